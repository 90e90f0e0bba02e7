//! Grid cross-check of the Birkhoff sum: deposit circulations on a doubly
//! periodic grid, solve Δψ = −ω spectrally, differentiate, and compare with
//! the direct sum over the same periodic images.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::kernel::{kernel_velocity, Kernel};
use super::SheetState;
use crate::error::{Error, Result};
use crate::field::{BoundaryY, ScalarField2D};
use crate::geometry::Vec2;
use crate::spectral::{wave_index, Fft2};

/// Doubly periodic grid `[0, lx) × [0, ly)` with `nx × ny` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridSpec {
    pub fn square(n: usize, l: f64) -> Self {
        Self { nx: n, ny: n, lx: l, ly: l }
    }

    fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    fn hy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    fn wrap(&self, p: Vec2) -> Vec2 {
        Vec2::new(p.x.rem_euclid(self.lx), p.y.rem_euclid(self.ly))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub u: ScalarField2D,
    pub v: ScalarField2D,
    /// max |U_grid − U_sum| over the probes used.
    pub max_discrepancy: f64,
    /// max_discrepancy divided by the largest direct-sum speed at the probes.
    pub relative_discrepancy: f64,
    pub reference_speed: f64,
    pub probes_used: usize,
    pub probes_skipped: usize,
    pub total_circulation: f64,
    /// True when ΣΓ ≠ 0 and the mean vorticity was removed.
    pub mean_subtracted: bool,
}

/// Direct sum over the doubly periodic lattice of images, with the uniform
/// mean flow removed so it matches the zero-mean spectral solution. Source
/// and target positions are wrapped into the box first.
pub fn doubly_periodic_velocity(
    targets: &[Vec2],
    sources: &[Vec2],
    circulations: &[f64],
    delta: f64,
    grid: &GridSpec,
) -> Vec<Vec2> {
    let kernel = Kernel::Periodic { period: grid.lx };
    let src: Vec<Vec2> = sources.iter().map(|p| grid.wrap(*p)).collect();
    // images beyond m decay like exp(−2π m ly/lx)
    let m = (40.0 * grid.lx / (2.0 * PI * grid.ly)).ceil() as i64 + 1;
    let mean = src
        .iter()
        .zip(circulations)
        .map(|(p, g)| g * p.y)
        .sum::<f64>()
        / (grid.lx * grid.ly);
    targets
        .par_iter()
        .map(|t| {
            let t = grid.wrap(*t);
            let mut acc = Vec2::ZERO;
            for (s, g) in src.iter().zip(circulations) {
                let d = t - *s;
                for k in (1..=m).rev() {
                    let off = Vec2::new(0.0, k as f64 * grid.ly);
                    acc += (kernel_velocity(kernel, d + off, delta)
                        + kernel_velocity(kernel, d - off, delta))
                        * *g;
                }
                if d.x != 0.0 || d.y != 0.0 {
                    acc += kernel_velocity(kernel, d, delta) * *g;
                }
            }
            acc - Vec2::new(mean, 0.0)
        })
        .collect()
}

/// Area-weighted (cloud-in-cell) deposition of circulations as vorticity.
fn deposit(points: &[Vec2], circulations: &[f64], grid: &GridSpec) -> Vec<f64> {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let mut w = vec![0.0; nx * ny];
    for (p, g) in points.iter().zip(circulations) {
        let p = grid.wrap(*p);
        let fx = p.x / hx;
        let fy = p.y / hy;
        let i0 = fx.floor() as usize % nx;
        let j0 = fy.floor() as usize % ny;
        let tx = fx - fx.floor();
        let ty = fy - fy.floor();
        let (i1, j1) = ((i0 + 1) % nx, (j0 + 1) % ny);
        let c = g / (hx * hy);
        w[j0 * nx + i0] += c * (1.0 - tx) * (1.0 - ty);
        w[j0 * nx + i1] += c * tx * (1.0 - ty);
        w[j1 * nx + i0] += c * (1.0 - tx) * ty;
        w[j1 * nx + i1] += c * tx * ty;
    }
    w
}

/// Velocity (ψ_y, −ψ_x) with Δₕψ = −ω for the five-point Laplacian and
/// centred differences, diagonalised by the DFT. The mean vorticity is
/// dropped. A pure spectral solve rings around point-like vorticity.
fn grid_velocity(omega: &[f64], grid: &GridSpec) -> (Vec<f64>, Vec<f64>) {
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let fft = Fft2::new(nx, ny);
    let mut w: Vec<Complex64> = omega.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    fft.forward(&mut w);
    let mut uh = vec![Complex64::new(0.0, 0.0); nx * ny];
    let mut vh = uh.clone();
    let im = Complex64::new(0.0, 1.0);
    for j in 0..ny {
        let ty = 2.0 * PI * wave_index(j, ny) / ny as f64;
        let ly = (2.0 * (0.5 * ty).sin() / hy).powi(2);
        let dy = ty.sin() / hy;
        for i in 0..nx {
            let tx = 2.0 * PI * wave_index(i, nx) / nx as f64;
            let lx = (2.0 * (0.5 * tx).sin() / hx).powi(2);
            let dx = tx.sin() / hx;
            if i == 0 && j == 0 {
                continue;
            }
            let psi = w[j * nx + i] / (lx + ly);
            uh[j * nx + i] = im * dy * psi;
            vh[j * nx + i] = -im * dx * psi;
        }
    }
    fft.inverse(&mut uh);
    fft.inverse(&mut vh);
    (
        uh.into_iter().map(|c| c.re).collect(),
        vh.into_iter().map(|c| c.re).collect(),
    )
}

/// Cross-check for raw point vortices. Probes closer than four cells to any
/// source are skipped; with no probes given, every fourth node is used.
pub fn crosscheck_points(
    points: &[Vec2],
    circulations: &[f64],
    delta: f64,
    grid: &GridSpec,
    probes: &[Vec2],
) -> Result<CrosscheckReport> {
    if grid.nx < 8 || grid.ny < 8 || !(grid.lx > 0.0) || !(grid.ly > 0.0) {
        return Err(Error::InvalidInput("cross-check grid too small".into()));
    }
    if points.len() != circulations.len() {
        return Err(Error::InvalidInput("point and circulation counts differ".into()));
    }
    let total: f64 = circulations.iter().sum();
    let scale = circulations.iter().map(|g| g.abs()).sum::<f64>();
    let mean_subtracted = total.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE);
    let omega = deposit(points, circulations, grid);
    let (u, v) = grid_velocity(&omega, grid);
    let u = ScalarField2D::new(grid.nx, grid.ny, grid.lx, grid.ly, BoundaryY::Periodic)?.with_values(u)?;
    let v = u.with_values(v)?;

    let default_probes: Vec<Vec2>;
    let probes = if probes.is_empty() {
        default_probes = (0..grid.ny)
            .step_by(4)
            .flat_map(|j| (0..grid.nx).step_by(4).map(move |i| (i, j)))
            .map(|(i, j)| u.node(i, j))
            .collect();
        &default_probes[..]
    } else {
        probes
    };
    let min_dist = 4.0 * grid.hx().max(grid.hy());
    let wrapped: Vec<Vec2> = points.iter().map(|p| grid.wrap(*p)).collect();
    let far = |p: Vec2| {
        let p = grid.wrap(p);
        wrapped.iter().all(|s| {
            let mut d = p - *s;
            d.x -= grid.lx * (d.x / grid.lx).round();
            d.y -= grid.ly * (d.y / grid.ly).round();
            d.norm() >= min_dist
        })
    };
    let used: Vec<Vec2> = probes.iter().copied().filter(|p| far(*p)).collect();
    let reference = doubly_periodic_velocity(&used, points, circulations, delta, grid);
    let mut max_d = 0.0f64;
    let mut ref_speed = 0.0f64;
    for (p, r) in used.iter().zip(&reference) {
        let q = grid.wrap(*p);
        let g = Vec2::new(u.sample(q), v.sample(q));
        max_d = max_d.max((g - *r).norm());
        ref_speed = ref_speed.max(r.norm());
    }
    Ok(CrosscheckReport {
        relative_discrepancy: if ref_speed > 0.0 { max_d / ref_speed } else { max_d },
        u,
        v,
        max_discrepancy: max_d,
        reference_speed: ref_speed,
        probes_used: used.len(),
        probes_skipped: probes.len() - used.len(),
        total_circulation: total,
        mean_subtracted,
    })
}

/// Cross-check of the sheet's own circulations.
pub fn stream_function_crosscheck(
    s: &SheetState,
    grid: &GridSpec,
    probes: &[Vec2],
) -> Result<CrosscheckReport> {
    crosscheck_points(s.curve.markers(), &s.circulations, s.blob_delta, grid, probes)
}

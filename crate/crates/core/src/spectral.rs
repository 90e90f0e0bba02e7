//! FFT helpers and the implicit `(a − bΔ)x = r` solve used by the
//! semi-implicit phase-field scheme.
//!
//! The Laplacian is the five-point stencil, diagonalised by the DFT in x (and
//! in y when periodic). With fixed-value rows in y each x-mode is solved as a
//! constant-coefficient tridiagonal system.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::field::BoundaryY;

/// Forward and inverse 2D DFT on row-major `ny × nx` arrays.
pub struct Fft2 {
    nx: usize,
    ny: usize,
    fx: Arc<dyn Fft<f64>>,
    ifx: Arc<dyn Fft<f64>>,
    fy: Arc<dyn Fft<f64>>,
    ify: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ny,
            fx: planner.plan_fft_forward(nx),
            ifx: planner.plan_fft_inverse(nx),
            fy: planner.plan_fft_forward(ny),
            ify: planner.plan_fft_inverse(ny),
        }
    }

    pub fn rows_forward(&self, data: &mut [Complex64]) {
        data.par_chunks_mut(self.nx).for_each(|row| self.fx.process(row));
    }

    /// Unnormalised inverse along rows.
    pub fn rows_inverse(&self, data: &mut [Complex64]) {
        data.par_chunks_mut(self.nx).for_each(|row| self.ifx.process(row));
    }

    fn transpose(&self, data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        for r in 0..rows {
            for c in 0..cols {
                out[c * rows + r] = data[r * cols + c];
            }
        }
        out
    }

    pub fn forward(&self, data: &mut Vec<Complex64>) {
        self.rows_forward(data);
        let mut t = self.transpose(data, self.ny, self.nx);
        t.par_chunks_mut(self.ny).for_each(|col| self.fy.process(col));
        *data = self.transpose(&t, self.nx, self.ny);
    }

    /// Normalised inverse.
    pub fn inverse(&self, data: &mut Vec<Complex64>) {
        let mut t = self.transpose(data, self.ny, self.nx);
        t.par_chunks_mut(self.ny).for_each(|col| self.ify.process(col));
        *data = self.transpose(&t, self.nx, self.ny);
        self.rows_inverse(data);
        let scale = 1.0 / (self.nx * self.ny) as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }
}

/// Signed integer wavenumber index for DFT bin `m` of `n`.
pub fn wave_index(m: usize, n: usize) -> f64 {
    if m <= n / 2 {
        m as f64
    } else {
        m as f64 - n as f64
    }
}

/// Eigenvalues of the negated 1D three-point second difference.
fn stencil_eigenvalues(n: usize, h: f64) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let s = (PI * m as f64 / n as f64).sin();
            4.0 * s * s / (h * h)
        })
        .collect()
}

/// Solver for `(a − bΔₕ) x = r` on a fixed grid.
pub struct ImplicitSolver {
    nx: usize,
    ny: usize,
    hy: f64,
    boundary: BoundaryY,
    fft: Fft2,
    lam_x: Vec<f64>,
    lam_y: Vec<f64>,
}

impl ImplicitSolver {
    pub fn new(nx: usize, ny: usize, hx: f64, hy: f64, boundary: BoundaryY) -> Self {
        Self {
            nx,
            ny,
            hy,
            boundary,
            fft: Fft2::new(nx, ny),
            lam_x: stencil_eigenvalues(nx, hx),
            lam_y: stencil_eigenvalues(ny, hy),
        }
    }

    /// Returns x with `(a − bΔₕ)x = r`. With fixed y boundaries the first and
    /// last rows of `rhs` are boundary values copied to the result.
    pub fn solve(&self, a: f64, b: f64, rhs: &[f64]) -> Vec<f64> {
        let (nx, ny) = (self.nx, self.ny);
        let mut data: Vec<Complex64> = rhs.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        match self.boundary {
            BoundaryY::Periodic => {
                self.fft.forward(&mut data);
                data.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
                    let ly = self.lam_y[j];
                    for (m, v) in row.iter_mut().enumerate() {
                        *v /= a + b * (self.lam_x[m] + ly);
                    }
                });
                self.fft.inverse(&mut data);
            }
            BoundaryY::Fixed => {
                self.fft.rows_forward(&mut data);
                let off = -b / (self.hy * self.hy);
                let cols: Vec<Vec<Complex64>> = (0..nx)
                    .into_par_iter()
                    .map(|m| {
                        let mut col: Vec<Complex64> = (0..ny).map(|j| data[j * nx + m]).collect();
                        let diag = a + b * self.lam_x[m] - 2.0 * off;
                        solve_dirichlet_column(&mut col, diag, off);
                        col
                    })
                    .collect();
                for (m, col) in cols.into_iter().enumerate() {
                    for (j, v) in col.into_iter().enumerate() {
                        data[j * nx + m] = v;
                    }
                }
                self.fft.rows_inverse(&mut data);
                let scale = 1.0 / nx as f64;
                data.iter_mut().for_each(|v| *v *= scale);
            }
        }
        let mut out: Vec<f64> = data.into_iter().map(|c| c.re).collect();
        if self.boundary == BoundaryY::Fixed {
            let last = (ny - 1) * nx;
            out[..nx].copy_from_slice(&rhs[..nx]);
            out[last..].copy_from_slice(&rhs[last..]);
        }
        out
    }
}

/// Interior rows of `diag·xⱼ + off·(xⱼ₋₁ + xⱼ₊₁) = rⱼ` with the end values of
/// `col` held fixed.
fn solve_dirichlet_column(col: &mut [Complex64], diag: f64, off: f64) {
    let n = col.len();
    let m = n - 2;
    let mut rhs: Vec<Complex64> = col[1..n - 1].to_vec();
    rhs[0] -= col[0] * off;
    rhs[m - 1] -= col[n - 1] * off;
    let mut c = vec![0.0; m];
    let mut d = vec![Complex64::new(0.0, 0.0); m];
    c[0] = off / diag;
    d[0] = rhs[0] / diag;
    for i in 1..m {
        let denom = diag - off * c[i - 1];
        c[i] = off / denom;
        d[i] = (rhs[i] - d[i - 1] * off) / denom;
    }
    col[m] = d[m - 1];
    for i in (0..m - 1).rev() {
        col[i + 1] = d[i] - col[i + 2] * c[i];
    }
}

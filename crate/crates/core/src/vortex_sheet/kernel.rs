//! Point-vortex kernels: free space, x-periodic closed form, and a truncated
//! image sum of the free-space kernel for cross-checking.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    FreeSpace,
    /// Closed-form sum over x-images with period `period`.
    Periodic { period: f64 },
    /// Free-space kernel summed over `images` copies on each side.
    PeriodicImages { period: f64, images: usize },
}

/// Velocity at offset `d = x − xⱼ` induced by unit circulation, with blob
/// length `delta`.
#[inline]
pub fn kernel_velocity(kernel: Kernel, d: Vec2, delta: f64) -> Vec2 {
    match kernel {
        Kernel::FreeSpace => free_space(d, delta),
        Kernel::Periodic { period } => periodic(d, delta, period),
        Kernel::PeriodicImages { period, images } => {
            let m = images as i64;
            let mut acc = Vec2::ZERO;
            // sum from the outside in to keep rounding symmetric
            for k in (1..=m).rev() {
                let s = Vec2::new(k as f64 * period, 0.0);
                acc += free_space(d + s, delta) + free_space(d - s, delta);
            }
            acc + free_space(d, delta)
        }
    }
}

#[inline]
fn free_space(d: Vec2, delta: f64) -> Vec2 {
    let r2 = d.norm_sq() + delta * delta;
    d.perp() * (1.0 / (2.0 * PI * r2))
}

#[inline]
fn periodic(d: Vec2, delta: f64, period: f64) -> Vec2 {
    let k = 2.0 * PI / period;
    let (sx, cx) = (k * d.x).sin_cos();
    let ky = k * d.y;
    let denom = ky.cosh() - cx + 0.5 * (k * delta) * (k * delta);
    Vec2::new(-ky.sinh(), sx) * (1.0 / (2.0 * period * denom))
}

/// Velocities at `targets` induced by point vortices of circulation
/// `circulations` at `sources`. A target that coincides with a source skips
/// that source (principal value by self-term exclusion).
pub fn point_vortex_velocity(
    targets: &[Vec2],
    sources: &[Vec2],
    circulations: &[f64],
    kernel: Kernel,
    delta: f64,
) -> Result<Vec<Vec2>> {
    if sources.len() != circulations.len() {
        return Err(Error::InvalidInput(
            "source and circulation counts differ".into(),
        ));
    }
    if delta < 0.0 {
        return Err(Error::InvalidInput("blob length must be non-negative".into()));
    }
    if delta == 0.0 {
        check_coincident(sources)?;
    }
    Ok(targets
        .par_iter()
        .map(|t| {
            let mut acc = Vec2::ZERO;
            for (s, g) in sources.iter().zip(circulations) {
                let d = *t - *s;
                if d.x == 0.0 && d.y == 0.0 {
                    continue;
                }
                acc += kernel_velocity(kernel, d, delta) * *g;
            }
            acc
        })
        .collect())
}

fn check_coincident(sources: &[Vec2]) -> Result<()> {
    let mut idx: Vec<usize> = (0..sources.len()).collect();
    idx.sort_by(|&a, &b| {
        sources[a]
            .x
            .partial_cmp(&sources[b].x)
            .unwrap()
            .then(sources[a].y.partial_cmp(&sources[b].y).unwrap())
    });
    for w in idx.windows(2) {
        if sources[w[0]] == sources[w[1]] {
            return Err(Error::CoincidentMarkers(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_kernel_matches_image_sum() {
        let d = Vec2::new(0.13, -0.07);
        let a = kernel_velocity(Kernel::Periodic { period: 1.0 }, d, 0.0);
        let b = kernel_velocity(Kernel::PeriodicImages { period: 1.0, images: 20000 }, d, 0.0);
        assert!((a - b).norm() < 1e-5, "{a:?} {b:?}");
    }

    #[test]
    fn periodic_kernel_far_field_is_uniform_shear() {
        let above = kernel_velocity(Kernel::Periodic { period: 2.0 }, Vec2::new(0.3, 12.0), 0.0);
        let below = kernel_velocity(Kernel::Periodic { period: 2.0 }, Vec2::new(0.3, -12.0), 0.0);
        assert!((above.x + 0.25).abs() < 1e-10);
        assert!((below.x - 0.25).abs() < 1e-10);
    }

    #[test]
    fn coincident_sources_rejected_without_blob() {
        let s = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 0.0)];
        let r = point_vortex_velocity(&s, &s, &[1.0, 1.0, 1.0], Kernel::FreeSpace, 0.0);
        assert_eq!(r.unwrap_err(), Error::CoincidentMarkers(0, 2));
        assert!(point_vortex_velocity(&s, &s, &[1.0, 1.0, 1.0], Kernel::FreeSpace, 0.1).is_ok());
    }
}

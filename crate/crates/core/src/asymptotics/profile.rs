//! Stationary inner profile φ'' + ½(φ − φ³) = 0 and its surface-tension
//! integral.

use crate::error::{Error, Result};

/// ∫(d/dρ tanh(ρ/2))² dρ over the real line.
pub const EXACT_SIGMA: f64 = 2.0 / 3.0;

/// Right-hand side of the first integral dφ/dρ = ½(1 − φ²).
#[inline]
fn slope(phi: f64) -> f64 {
    0.5 * (1.0 - phi * phi)
}

/// Sampled inner profile on a uniform ρ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution {
    pub rho_samples: Vec<f64>,
    pub phi_samples: Vec<f64>,
    pub sigma: f64,
    slopes: Vec<f64>,
}

impl ProfileSolution {
    /// Wraps arbitrary uniform samples; slopes come from fourth-order
    /// differences.
    pub fn from_samples(rho: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if rho.len() != phi.len() || rho.len() < 5 {
            return Err(Error::InvalidInput(
                "profile needs at least 5 matching samples".into(),
            ));
        }
        let h = rho[1] - rho[0];
        if !(h > 0.0) {
            return Err(Error::InvalidInput("rho samples must increase".into()));
        }
        let slopes = finite_difference(&phi, h);
        let mut p = Self {
            rho_samples: rho,
            phi_samples: phi,
            sigma: 0.0,
            slopes,
        };
        p.sigma = surface_tension_integral(&p);
        Ok(p)
    }

    pub fn step(&self) -> f64 {
        self.rho_samples[1] - self.rho_samples[0]
    }

    /// Cubic Hermite interpolation between samples.
    pub fn value_at(&self, rho: f64) -> f64 {
        let h = self.step();
        let r0 = self.rho_samples[0];
        let n = self.rho_samples.len();
        let f = ((rho - r0) / h).clamp(0.0, (n - 1) as f64);
        let i = (f.floor() as usize).min(n - 2);
        let t = f - i as f64;
        let (y0, y1) = (self.phi_samples[i], self.phi_samples[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }

    /// Same samples with ρ shifted by `offset`.
    pub fn translated(&self, offset: f64) -> Self {
        Self {
            rho_samples: self.rho_samples.iter().map(|r| r + offset).collect(),
            ..self.clone()
        }
    }
}

/// Fourth-order central differences with one-sided fourth-order stencils at
/// the two ends.
fn finite_difference(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i >= 2 && i + 2 < n {
                (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
            } else if i < 2 {
                (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4])
                    / (12.0 * h)
            } else {
                (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4])
                    / (12.0 * h)
            }
        })
        .collect()
}

fn rk4_step(phi: f64, h: f64) -> f64 {
    let k1 = slope(phi);
    let k2 = slope(phi + 0.5 * h * k1);
    let k3 = slope(phi + 0.5 * h * k2);
    let k4 = slope(phi + h * k3);
    phi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrates dφ/dρ = ½(1 − φ²) from φ(0) = 0 outwards with classical RK4,
/// `n` steps on each side of the origin.
pub fn solve_profile_ode(half_width: f64, n: usize) -> Result<ProfileSolution> {
    if !(half_width >= 10.0) {
        return Err(Error::InvalidInput("half_width must be at least 10".into()));
    }
    if n < 64 {
        return Err(Error::InvalidInput("n must be at least 64".into()));
    }
    let h = half_width / n as f64;
    let mut right = Vec::with_capacity(n + 1);
    let mut phi = 0.0;
    right.push(phi);
    for _ in 0..n {
        phi = rk4_step(phi, h);
        right.push(phi);
    }
    let mut left = Vec::with_capacity(n);
    let mut phi = 0.0;
    for _ in 0..n {
        phi = rk4_step(phi, -h);
        left.push(phi);
    }
    if right[n].abs() < 1.0 - 1e-3 || left[n - 1].abs() < 1.0 - 1e-3 {
        return Err(Error::InvalidInput(
            "domain too small: profile has not saturated".into(),
        ));
    }
    let phi: Vec<f64> = left.into_iter().rev().chain(right).collect();
    let rho: Vec<f64> = (0..=2 * n).map(|k| (k as f64 - n as f64) * h).collect();
    let slopes = phi.iter().map(|p| slope(*p)).collect();
    let mut sol = ProfileSolution {
        rho_samples: rho,
        phi_samples: phi,
        sigma: 0.0,
        slopes,
    };
    sol.sigma = surface_tension_integral(&sol);
    Ok(sol)
}

/// Composite Simpson quadrature of (φ′)² with fourth-order differences for φ′.
pub fn surface_tension_integral(p: &ProfileSolution) -> f64 {
    let h = p.step();
    let d = finite_difference(&p.phi_samples, h);
    let f: Vec<f64> = d.iter().map(|v| v * v).collect();
    simpson(&f, h)
}

/// Composite Simpson rule; an odd interval count closes with the 3/8 rule.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return 0.5 * h * (f[0] + f[1]);
    }
    let even_end = if n.is_multiple_of(2) { n } else { n - 3 };
    let mut acc = 0.0;
    let mut i = 0;
    while i < even_end {
        acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
        i += 2;
    }
    if n % 2 == 1 {
        let k = n - 3;
        acc += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tanh_profile(half_width: f64, n: usize, scale: f64) -> ProfileSolution {
        let h = half_width / n as f64;
        let rho: Vec<f64> = (0..=2 * n).map(|k| (k as f64 - n as f64) * h).collect();
        let phi = rho.iter().map(|r| (r * scale).tanh()).collect();
        ProfileSolution::from_samples(rho, phi).unwrap()
    }

    #[test]
    fn origin_and_symmetry() {
        let p = solve_profile_ode(30.0, 1024).unwrap();
        let n = 1024;
        assert_eq!(p.phi_samples[n], 0.0);
        for k in 0..=n {
            assert!((p.phi_samples[n + k] + p.phi_samples[n - k]).abs() <= 1e-12);
        }
        assert!((p.value_at(2.0) - 1f64.tanh()).abs() < 1e-8);
        assert!(p.phi_samples.windows(2).all(|w| w[1] >= w[0]));
        assert!((p.phi_samples[0] + 1.0).abs() < 1e-6);
        assert!((p.phi_samples[2 * n] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn matches_closed_form() {
        let p = solve_profile_ode(30.0, 1024).unwrap();
        let err = p
            .rho_samples
            .iter()
            .zip(&p.phi_samples)
            .map(|(r, f)| ((r / 2.0).tanh() - f).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn rk4_error_shrinks_at_fourth_order() {
        let err = |n| {
            let p = solve_profile_ode(20.0, n).unwrap();
            p.rho_samples
                .iter()
                .zip(&p.phi_samples)
                .map(|(r, f)| ((r / 2.0).tanh() - f).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(64), err(128));
        let order = (e1 / e2).log2();
        assert!(order > 3.7, "observed order {order}");
    }

    #[test]
    fn rejects_small_domains() {
        assert!(solve_profile_ode(5.0, 128).is_err());
        assert!(solve_profile_ode(20.0, 10).is_err());
    }

    #[test]
    fn sigma_of_exact_profiles() {
        let p = tanh_profile(30.0, 2048, 0.5);
        assert!((p.sigma - EXACT_SIGMA).abs() < 1e-8, "{}", p.sigma);
        let q = tanh_profile(30.0, 2048, 1.0);
        assert!((q.sigma - 4.0 / 3.0).abs() < 1e-8, "{}", q.sigma);
        let flat = ProfileSolution::from_samples((0..11).map(|k| k as f64).collect(), vec![1.0; 11]).unwrap();
        assert_eq!(flat.sigma, 0.0);
    }

    #[test]
    fn sigma_translation_invariant() {
        let p = solve_profile_ode(30.0, 512).unwrap();
        let q = p.translated(3.25);
        assert!((surface_tension_integral(&q) - surface_tension_integral(&p)).abs() < 1e-10);
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let h = 0.1;
        for n in [6usize, 7] {
            let f: Vec<f64> = (0..=n).map(|k| (k as f64 * h).powi(3)).collect();
            let exact = (n as f64 * h).powi(4) / 4.0;
            assert!((simpson(&f, h) - exact).abs() < 1e-14);
        }
    }
}

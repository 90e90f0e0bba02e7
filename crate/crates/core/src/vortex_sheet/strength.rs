use super::{SheetOptions, SheetState};
use crate::error::{Error, Result};
use crate::geometry::{InterfaceCurve, Vec2};

/// Derivative along arclength by the three-point formula on the
/// non-uniform chord spacing.
pub fn arclength_derivative(curve: &InterfaceCurve, f: &[f64]) -> Vec<f64> {
    let n = curve.len();
    let seg = curve.segment_lengths();
    (0..n)
        .map(|i| {
            let hm = seg[(i + n - 1) % n];
            let hp = seg[i];
            let (fm, f0, fp) = (f[(i + n - 1) % n], f[i], f[(i + 1) % n]);
            (fp - f0) * hm / (hp * (hm + hp)) + (f0 - fm) * hp / (hm * (hm + hp))
        })
        .collect()
}

/// The γ-independent parts of the strength relation, per marker.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceTerms {
    pub tangents: Vec<Vec2>,
    /// drive · 2 ĵ·ŝ
    pub drive: Vec<f64>,
    /// 2B ∂κ/∂s
    pub curvature: Vec<f64>,
}

impl SourceTerms {
    pub fn total(&self, i: usize) -> f64 {
        self.drive[i] + self.curvature[i]
    }
}

pub fn source_terms(s: &SheetState) -> Result<SourceTerms> {
    let tangents = s.curve.tangents();
    let d = s.drive.value();
    let drive = tangents.iter().map(|t| 2.0 * d * t.y).collect();
    let curvature = if s.b == 0.0 {
        vec![0.0; s.curve.len()]
    } else {
        let kappa = s.curve.curvature()?;
        arclength_derivative(&s.curve, &kappa)
            .into_iter()
            .map(|v| 2.0 * s.b * v)
            .collect()
    };
    Ok(SourceTerms {
        tangents,
        drive,
        curvature,
    })
}

/// Converged sheet strength with the iteration history.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetSolve {
    pub state: SheetState,
    /// Number of updates applied to γ.
    pub iterations: usize,
    /// max|F(γₖ) − γₖ| for each iterate, the last one below tolerance.
    pub residuals: Vec<f64>,
}

/// Picard iteration for γ, warm-started from `s.gamma`.
pub fn solve_sheet_strength(s: &SheetState, opts: &SheetOptions) -> Result<SheetSolve> {
    let src = source_terms(s)?;
    let n = s.curve.len();
    let a = s.atwood;
    let theta = if a.abs() >= 1.0 { opts.relaxation } else { 1.0 };
    let mut state = s.clone().with_gamma(s.gamma.clone())?;
    let mut residuals = Vec::new();
    for it in 0..=opts.max_iter {
        let mapped: Vec<f64> = if a == 0.0 {
            (0..n).map(|i| src.total(i)).collect()
        } else {
            let u = state.marker_velocities()?;
            (0..n)
                .map(|i| 2.0 * a * u[i].dot(src.tangents[i]) + src.total(i))
                .collect()
        };
        let res = mapped
            .iter()
            .zip(&state.gamma)
            .fold(0.0f64, |m, (f, g)| m.max((f - g).abs()));
        if !res.is_finite() {
            break;
        }
        residuals.push(res);
        if res <= opts.tol_gamma {
            return Ok(SheetSolve {
                state,
                iterations: it,
                residuals,
            });
        }
        if it == opts.max_iter {
            break;
        }
        let w = if it == 0 { 1.0 } else { theta };
        let next = mapped
            .iter()
            .zip(&state.gamma)
            .map(|(f, g)| (1.0 - w) * g + w * f)
            .collect();
        state = state.with_gamma(next)?;
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: residuals.last().copied().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DriveSign;
    use std::f64::consts::PI;

    fn sine(n: usize, amp: f64, a: f64, b: f64) -> SheetState {
        let c = InterfaceCurve::periodic_graph(n, 1.0, |x| amp * (2.0 * PI * x).sin()).unwrap();
        SheetState::new(c, a, b, DriveSign::Positive, 0.0).unwrap()
    }

    #[test]
    fn flat_interface_has_zero_strength() {
        let c = InterfaceCurve::periodic_graph(64, 1.0, |_| 0.3).unwrap();
        let s = SheetState::new(c, 0.7, 0.2, DriveSign::Negative, 0.0).unwrap();
        let r = solve_sheet_strength(&s, &SheetOptions::default()).unwrap();
        assert!(r.state.gamma.iter().all(|g| *g == 0.0));
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn circle_without_atwood_in_one_iteration() {
        let c = InterfaceCurve::closed_from_fn(96, |t| Vec2::new(0.4 * t.cos(), 0.4 * t.sin())).unwrap();
        let s = SheetState::new(c, 0.0, 0.0, DriveSign::Negative, 0.0).unwrap();
        let r = solve_sheet_strength(&s, &SheetOptions::default()).unwrap();
        assert_eq!(r.iterations, 1);
        let t = r.state.curve.tangents();
        for (g, t) in r.state.gamma.iter().zip(&t) {
            assert_eq!(*g, -2.0 * t.y);
        }
    }

    #[test]
    fn curvature_gradient_vanishes_on_circle() {
        let c = InterfaceCurve::closed_from_fn(64, |t| Vec2::new(t.cos(), t.sin())).unwrap();
        let s = SheetState::new(c, 0.0, 3.0, DriveSign::Off, 0.0).unwrap();
        let src = source_terms(&s).unwrap();
        assert!(src.curvature.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn sine_contracts_at_atwood_rate() {
        let s = sine(128, 0.01, 0.5, 0.0);
        let r = solve_sheet_strength(&s, &SheetOptions::default()).unwrap();
        assert!(r.iterations > 1);
        // from γ = 0 the first image is the drive term alone
        let src = source_terms(&s).unwrap();
        let drive = src.drive.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((r.residuals[0] - drive).abs() < 1e-15);
        for w in r.residuals.windows(2).skip(1) {
            if w[0] > 1e-13 {
                assert!(w[1] / w[0] <= 0.5 + 1e-6, "{:?}", r.residuals);
            }
        }
    }

    #[test]
    fn unit_atwood_uses_relaxation() {
        let s = sine(64, 0.02, 1.0, 0.0);
        let r = solve_sheet_strength(&s, &SheetOptions::default()).unwrap();
        assert!(*r.residuals.last().unwrap() <= 1e-10);
    }

    #[test]
    fn converged_gamma_is_fixed_point() {
        let s = sine(96, 0.05, -0.6, 0.01);
        let r = solve_sheet_strength(&s, &SheetOptions::default()).unwrap();
        let u = r.state.marker_velocities().unwrap();
        let src = source_terms(&r.state).unwrap();
        for (i, ui) in u.iter().enumerate() {
            let f = 2.0 * s.atwood * ui.dot(src.tangents[i]) + src.total(i);
            assert!((f - r.state.gamma[i]).abs() <= 1e-10);
        }
    }
}

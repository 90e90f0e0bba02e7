use super::strength::arclength_derivative;
use super::SheetState;
use crate::error::Result;
use crate::geometry::PeriodicSpline;

/// Per-marker reconstruction of the three terms of the strength relation.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureJumpReport {
    /// 2A U·ŝ with U from a fresh Birkhoff sum.
    pub tangential_term: Vec<f64>,
    /// drive · 2 ĵ·ŝ
    pub drive_term: Vec<f64>,
    /// 2B ∂κ/∂s, three-point stencil.
    pub curvature_term: Vec<f64>,
    /// 2B ∂κ/∂s from the derivative of a periodic spline through κ(s).
    pub curvature_term_spline: Vec<f64>,
    /// max |γ − (sum of the three terms)|
    pub max_residual: f64,
    /// max difference between the two curvature-derivative stencils.
    pub stencil_discrepancy: f64,
}

pub fn pressure_jump_check(s: &SheetState) -> Result<PressureJumpReport> {
    let n = s.curve.len();
    let u = s.marker_velocities()?;
    let tangents = s.curve.tangents();
    let tangential_term: Vec<f64> = (0..n)
        .map(|i| 2.0 * s.atwood * u[i].dot(tangents[i]))
        .collect();
    let d = s.drive.value();
    let drive_term: Vec<f64> = tangents.iter().map(|t| 2.0 * d * t.y).collect();
    let (curvature_term, curvature_term_spline) = if s.b == 0.0 {
        (vec![0.0; n], vec![0.0; n])
    } else {
        let kappa = s.curve.curvature()?;
        let fd = arclength_derivative(&s.curve, &kappa)
            .into_iter()
            .map(|v| 2.0 * s.b * v)
            .collect();
        let knots = s.curve.cumulative_arclength();
        let spline = PeriodicSpline::new(knots, &kappa, s.curve.total_arclength());
        let sp = knots.iter().map(|k| 2.0 * s.b * spline.derivative(*k)).collect();
        (fd, sp)
    };
    let mut max_residual = 0.0f64;
    let mut stencil_discrepancy = 0.0f64;
    for i in 0..n {
        let rhs = tangential_term[i] + drive_term[i] + curvature_term[i];
        max_residual = max_residual.max((s.gamma[i] - rhs).abs());
        stencil_discrepancy =
            stencil_discrepancy.max((curvature_term[i] - curvature_term_spline[i]).abs());
    }
    Ok(PressureJumpReport {
        tangential_term,
        drive_term,
        curvature_term,
        curvature_term_spline,
        max_residual,
        stencil_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::InterfaceCurve;
    use crate::params::DriveSign;
    use crate::vortex_sheet::{solve_sheet_strength, SheetOptions};
    use std::f64::consts::PI;

    #[test]
    fn converged_state_has_small_residual() {
        let c = InterfaceCurve::periodic_graph(128, 1.0, |x| 0.03 * (2.0 * PI * x).cos()).unwrap();
        let s = SheetState::new(c, 0.4, 0.02, DriveSign::Positive, 0.0).unwrap();
        let s = solve_sheet_strength(&s, &SheetOptions::default()).unwrap().state;
        let r = pressure_jump_check(&s).unwrap();
        assert!(r.max_residual <= 1e-10, "{}", r.max_residual);
    }

    #[test]
    fn flat_interface_terms_vanish() {
        let c = InterfaceCurve::periodic_graph(32, 1.0, |_| 0.0).unwrap();
        let s = SheetState::new(c, 0.4, 0.1, DriveSign::Negative, 0.0).unwrap();
        let r = pressure_jump_check(&s).unwrap();
        for i in 0..32 {
            assert_eq!(r.tangential_term[i], 0.0);
            assert_eq!(r.drive_term[i], 0.0);
            assert_eq!(r.curvature_term[i], 0.0);
        }
    }

    #[test]
    fn curvature_stencils_agree_at_second_order() {
        let disc = |n: usize| {
            let c = InterfaceCurve::periodic_graph(n, 1.0, |x| 0.05 * (2.0 * PI * x).sin()).unwrap();
            let s = SheetState::new(c, 0.0, 0.5, DriveSign::Off, 0.0).unwrap();
            let r = pressure_jump_check(&s).unwrap();
            let scale = r.curvature_term.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            r.stencil_discrepancy / scale
        };
        let (a, b) = (disc(64), disc(128));
        assert!(b < 0.01, "{b}");
        assert!(a / b > 3.0, "{a} {b}");
    }
}

use std::f64::consts::PI;

use super::kernel::{point_vortex_velocity, Kernel};
use super::strength::solve_sheet_strength;
use super::{SheetOptions, SheetState};
use crate::error::{Error, Result};
use crate::geometry::{InterfaceCurve, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Explicit midpoint rule.
    #[default]
    Rk2,
    Rk4,
}

fn axpy(x: &[Vec2], a: f64, y: &[Vec2]) -> Vec<Vec2> {
    x.iter().zip(y).map(|(p, v)| *p + *v * a).collect()
}

fn integrate(
    x0: &[Vec2],
    dt: f64,
    integrator: Integrator,
    mut rhs: impl FnMut(&[Vec2]) -> Result<Vec<Vec2>>,
) -> Result<Vec<Vec2>> {
    match integrator {
        Integrator::Rk2 => {
            let k1 = rhs(x0)?;
            let k2 = rhs(&axpy(x0, 0.5 * dt, &k1))?;
            Ok(axpy(x0, dt, &k2))
        }
        Integrator::Rk4 => {
            let k1 = rhs(x0)?;
            let k2 = rhs(&axpy(x0, 0.5 * dt, &k1))?;
            let k3 = rhs(&axpy(x0, 0.5 * dt, &k2))?;
            let k4 = rhs(&axpy(x0, dt, &k3))?;
            Ok(x0
                .iter()
                .enumerate()
                .map(|(i, p)| *p + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0))
                .collect())
        }
    }
}

/// Moves point vortices with frozen circulations by one step.
pub fn advect_points(
    points: &[Vec2],
    circulations: &[f64],
    kernel: Kernel,
    delta: f64,
    dt: f64,
    integrator: Integrator,
) -> Result<Vec<Vec2>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput("dt must be positive".into()));
    }
    integrate(points, dt, integrator, |x| {
        point_vortex_velocity(x, x, circulations, kernel, delta)
    })
}

/// Advances the markers by one step of dxᵢ/dt = U(xᵢ), re-solving γ at every
/// stage. The returned state carries γ solved at the new positions.
pub fn advance_interface(s: &SheetState, dt: f64, opts: &SheetOptions) -> Result<SheetState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput("dt must be positive".into()));
    }
    let topology = s.curve.topology();
    let mut warm = s.gamma.clone();
    let moved = integrate(s.curve.markers(), dt, opts.integrator, |x| {
        let curve = InterfaceCurve::new(x.to_vec(), topology)?;
        let stage = SheetState {
            curve,
            ..s.clone()
        }
        .with_gamma(warm.clone())?;
        let solved = solve_sheet_strength(&stage, opts)?.state;
        warm = solved.gamma.clone();
        solved.marker_velocities()
    })?;
    let mut curve = InterfaceCurve::new(moved, topology)?;
    if opts.check_intersection {
        if let Some((i, j)) = curve.find_self_intersection() {
            return Err(Error::SelfIntersection(i, j));
        }
    }
    if let Some(limit) = opts.redistribute_ratio {
        if curve.spacing_ratio() > limit {
            curve = curve.resample(curve.len())?;
        }
    }
    let next = SheetState {
        curve,
        t: s.t + dt,
        ..s.clone()
    }
    .with_gamma(warm)?;
    Ok(solve_sheet_strength(&next, opts)?.state)
}

/// Time step with max|U|·dt ≤ `cfl`·min spacing, further limited by the
/// explicit stability bound of the surface-tension term.
pub fn suggest_dt(s: &SheetState, cfl: f64) -> Result<f64> {
    let h = s.curve.min_spacing();
    let umax = s
        .marker_velocities()?
        .iter()
        .fold(0.0f64, |m, u| m.max(u.norm()));
    let mut dt = if umax > 0.0 { cfl * h / umax } else { f64::INFINITY };
    if s.b > 0.0 {
        // fastest discrete mode decays at B (π/h)³
        dt = dt.min(h.powi(3) / (s.b * PI.powi(3)));
    }
    let drive = s.drive.value().abs();
    if drive > 0.0 {
        dt = dt.min(cfl * h / drive);
    }
    if !dt.is_finite() {
        return Err(Error::InvalidInput(
            "state is stationary; no time scale".into(),
        ));
    }
    Ok(dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DriveSign;

    #[test]
    fn pair_moves_at_closed_form_speed() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
        let gam = [2.0 * PI, -2.0 * PI];
        let dt = 0.01;
        for integ in [Integrator::Rk2, Integrator::Rk4] {
            let out = advect_points(&pts, &gam, Kernel::FreeSpace, 0.0, dt, integ).unwrap();
            for (a, b) in out.iter().zip(&pts) {
                assert!(((*a - *b).norm() - dt).abs() < 1e-12);
            }
            assert!((out[0].distance(out[1]) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn flat_interface_is_stationary() {
        let c = InterfaceCurve::periodic_graph(64, 1.0, |_| 0.25).unwrap();
        let mut s = SheetState::new(c, 0.0, 0.0, DriveSign::Positive, 0.0).unwrap();
        let start = s.curve.markers().to_vec();
        for _ in 0..20 {
            s = advance_interface(&s, 0.01, &SheetOptions::default()).unwrap();
        }
        for (a, b) in s.curve.markers().iter().zip(&start) {
            assert!(a.distance(*b) <= 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive_dt() {
        let c = InterfaceCurve::periodic_graph(16, 1.0, |_| 0.0).unwrap();
        let s = SheetState::new(c, 0.0, 0.0, DriveSign::Positive, 0.0).unwrap();
        assert!(advance_interface(&s, 0.0, &SheetOptions::default()).is_err());
    }

    #[test]
    fn unstable_mode_grows_and_reversed_decays() {
        let amp = 0.002;
        let run = |drive| {
            let c = InterfaceCurve::periodic_graph(64, 1.0, |x| amp * (2.0 * PI * x).sin()).unwrap();
            let mut s = SheetState::new(c, 0.0, 0.0, drive, 0.0).unwrap();
            s = solve_sheet_strength(&s, &SheetOptions::default()).unwrap().state;
            for _ in 0..10 {
                s = advance_interface(&s, 0.005, &SheetOptions::default()).unwrap();
            }
            s.curve.markers().iter().fold(0.0f64, |m, p| m.max(p.y.abs()))
        };
        assert!(run(DriveSign::Positive) > amp * 1.1);
        assert!(run(DriveSign::Negative) < amp * 0.9);
    }
}

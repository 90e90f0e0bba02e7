//! Sharp-interface solver: the interface carries a vortex sheet whose
//! nondimensional strength obeys
//!
//! ```text
//! γ = 2A (U·ŝ) ± 2 ĵ·ŝ + 2B ∂/∂s(1/R∥)
//! ```
//!
//! with U the principal-value Birkhoff velocity of the sheet itself. Markers
//! carry circulations Γᵢ = γᵢ Δsᵢ and move with U.

mod advance;
mod crosscheck;
mod io;
mod jump;
mod kernel;
mod strength;

pub use advance::{advance_interface, advect_points, suggest_dt, Integrator};
pub use crosscheck::{
    crosscheck_points, doubly_periodic_velocity, stream_function_crosscheck, CrosscheckReport,
    GridSpec,
};
pub use io::{write_run_metadata, TrajectoryWriter};
pub use jump::{pressure_jump_check, PressureJumpReport};
pub use kernel::{kernel_velocity, point_vortex_velocity, Kernel};
pub use strength::{arclength_derivative, solve_sheet_strength, source_terms, SheetSolve, SourceTerms};

use crate::error::{Error, Result};
use crate::geometry::{InterfaceCurve, Topology, Vec2};
use crate::params::{sheet_groups, DriveSign, PhysicalParams};

/// Numerical controls of the sheet solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetOptions {
    pub tol_gamma: f64,
    /// Relaxation factor θ of the strength iteration. Used only when |A| = 1,
    /// where the plain iteration is not a contraction.
    pub relaxation: f64,
    pub max_iter: usize,
    pub integrator: Integrator,
    /// Redistribute markers when the spacing ratio exceeds this value.
    pub redistribute_ratio: Option<f64>,
    /// Halt with an error when the interface self-intersects.
    pub check_intersection: bool,
}

impl Default for SheetOptions {
    fn default() -> Self {
        Self {
            tol_gamma: 1e-10,
            relaxation: 0.8,
            max_iter: 200,
            integrator: Integrator::Rk2,
            redistribute_ratio: Some(2.0),
            check_intersection: true,
        }
    }
}

/// Interface markers with their sheet strength and circulations.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetState {
    pub curve: InterfaceCurve,
    pub gamma: Vec<f64>,
    pub circulations: Vec<f64>,
    pub t: f64,
    pub atwood: f64,
    pub b: f64,
    pub drive: DriveSign,
    pub blob_delta: f64,
}

impl SheetState {
    pub fn new(curve: InterfaceCurve, atwood: f64, b: f64, drive: DriveSign, blob_delta: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&atwood) {
            return Err(Error::InvalidInput(format!("Atwood ratio {atwood} outside [-1, 1]")));
        }
        if !(blob_delta >= 0.0) {
            return Err(Error::InvalidInput("blob length must be non-negative".into()));
        }
        let n = curve.len();
        Ok(Self {
            curve,
            gamma: vec![0.0; n],
            circulations: vec![0.0; n],
            t: 0.0,
            atwood,
            b,
            drive,
            blob_delta,
        })
    }

    /// State with A, B and the drive sign derived from dimensional parameters.
    pub fn from_params(curve: InterfaceCurve, p: &PhysicalParams, blob_delta: f64) -> Result<Self> {
        let g = sheet_groups(p)?;
        Self::new(curve, g.atwood, g.b, g.drive, blob_delta)
    }

    /// Replaces γ and recomputes Γᵢ = γᵢ Δsᵢ.
    pub fn with_gamma(mut self, gamma: Vec<f64>) -> Result<Self> {
        if gamma.len() != self.curve.len() {
            return Err(Error::InvalidInput("gamma length differs from marker count".into()));
        }
        self.circulations = gamma
            .iter()
            .zip(self.curve.arclength_weights())
            .map(|(g, w)| g * w)
            .collect();
        self.gamma = gamma;
        Ok(self)
    }

    /// Kernel matching the curve topology.
    pub fn kernel(&self) -> Kernel {
        match self.curve.topology() {
            Topology::Closed => Kernel::FreeSpace,
            Topology::Periodic { period } => Kernel::Periodic { period },
        }
    }

    pub fn total_circulation(&self) -> f64 {
        self.circulations.iter().sum()
    }

    pub fn marker_velocities(&self) -> Result<Vec<Vec2>> {
        birkhoff_velocity(self.curve.markers(), self)
    }
}

/// Principal-value Birkhoff velocity of the sheet at `targets`.
pub fn birkhoff_velocity(targets: &[Vec2], sources: &SheetState) -> Result<Vec<Vec2>> {
    point_vortex_velocity(
        targets,
        sources.curve.markers(),
        &sources.circulations,
        sources.kernel(),
        sources.blob_delta,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn flat(n: usize, gamma: f64) -> SheetState {
        let c = InterfaceCurve::periodic_graph(n, 1.0, |_| 0.0).unwrap();
        SheetState::new(c, 0.0, 0.0, DriveSign::Positive, 0.0)
            .unwrap()
            .with_gamma(vec![gamma; n])
            .unwrap()
    }

    #[test]
    fn single_marker_principal_value_is_zero() {
        let p = [Vec2::new(0.3, 0.4)];
        let u = point_vortex_velocity(&p, &p, &[2.0], Kernel::FreeSpace, 0.0).unwrap();
        assert_eq!(u[0], Vec2::ZERO);
    }

    #[test]
    fn vortex_pair_translates() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
        let gam = [2.0 * PI, -2.0 * PI];
        let u = point_vortex_velocity(&pts, &pts, &gam, Kernel::FreeSpace, 0.0).unwrap();
        assert!((u[0].norm() - 1.0).abs() < 1e-14);
        assert!((u[1].norm() - 1.0).abs() < 1e-14);
        assert!((u[0] - u[1]).norm() < 1e-14);
    }

    #[test]
    fn circulations_follow_weights() {
        let c = InterfaceCurve::closed_from_fn(32, |t| Vec2::new(t.cos(), 0.5 * t.sin())).unwrap();
        let gamma: Vec<f64> = (0..32).map(|i| (i as f64 * 0.3).sin()).collect();
        let s = SheetState::new(c, 0.2, 0.1, DriveSign::Negative, 0.0)
            .unwrap()
            .with_gamma(gamma.clone())
            .unwrap();
        let w = s.curve.arclength_weights();
        for i in 0..32 {
            assert!((s.circulations[i] - gamma[i] * w[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn flat_sheet_tangential_jump() {
        let gamma = 0.7;
        let s = flat(256, gamma);
        let off = 0.05;
        let probes = [Vec2::new(0.3, off), Vec2::new(0.3, -off)];
        let u = birkhoff_velocity(&probes, &s).unwrap();
        // fluid 1 (right of +x traversal) is below: γ = (u₁ − u₂)·ŝ
        let jump = u[1].x - u[0].x;
        assert!((jump - gamma).abs() < 0.01 * gamma, "{jump}");
    }

    #[test]
    fn reversing_circulation_negates_velocity() {
        let c = InterfaceCurve::closed_from_fn(40, |t| Vec2::new(t.cos(), 0.7 * t.sin())).unwrap();
        let gamma: Vec<f64> = (0..40).map(|i| 1.0 + (i as f64).cos()).collect();
        let s = SheetState::new(c.clone(), 0.0, 0.0, DriveSign::Positive, 0.0)
            .unwrap()
            .with_gamma(gamma.clone())
            .unwrap();
        let neg = SheetState::new(c, 0.0, 0.0, DriveSign::Positive, 0.0)
            .unwrap()
            .with_gamma(gamma.iter().map(|g| -g).collect())
            .unwrap();
        let a = s.marker_velocities().unwrap();
        let b = neg.marker_velocities().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(*x, -*y);
        }
    }

    #[test]
    fn rejects_bad_atwood() {
        let c = InterfaceCurve::periodic_graph(16, 1.0, |_| 0.0).unwrap();
        assert!(SheetState::new(c, 1.5, 0.0, DriveSign::Positive, 0.0).is_err());
    }
}

//! Diffuse-interface solver for the coupled pressure / order-parameter system
//!
//! ```text
//! ε u_t + (c₂²/2) φ_t = Δu
//! α ε² φ_t = ε² Δφ + ½(φ − φ³) + c u        (c = 2ε by default)
//! ```
//!
//! stepped semi-implicitly: both Laplacians implicit, the cubic reaction and
//! the couplings explicit. The sum of the two equations is in divergence form,
//! so `∫(ε u + (c₂²/2) φ)` only changes through boundary flux.

mod contour;
mod io;
mod measure;

pub use contour::{extract_interface, Extraction};
pub use io::{read_snapshot, write_field_csv, write_snapshot};
pub use measure::{
    gibbs_thomson_pressure, measure_profile, measure_profile_with, measure_sharp_interface,
    measure_sharp_interface_with, MeasureConfig, ProfileFit, SharpInterfaceReport,
};

use crate::error::{Error, Result};
use crate::field::ScalarField2D;
use crate::params::PhysicalParams;
use crate::spectral::ImplicitSolver;

/// Paired pressure-analog and order-parameter fields.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFieldState {
    pub u: ScalarField2D,
    pub phi: ScalarField2D,
    pub t: f64,
    pub eps: f64,
    pub c2sq: f64,
}

impl PhaseFieldState {
    pub fn new(u: ScalarField2D, phi: ScalarField2D, eps: f64, c2sq: f64) -> Result<Self> {
        if !u.same_grid(&phi) {
            return Err(Error::InvalidInput("u and phi grids differ".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidInput("eps must be positive".into()));
        }
        if !c2sq.is_finite() {
            return Err(Error::InvalidInput("c2sq must be finite".into()));
        }
        Ok(Self {
            u,
            phi,
            t: 0.0,
            eps,
            c2sq,
        })
    }

    /// `∫(ε u + (c₂²/2) φ)` over the grid.
    pub fn conserved_quantity(&self) -> f64 {
        self.eps * self.u.integral() + 0.5 * self.c2sq * self.phi.integral()
    }
}

/// Coefficients of the scaled system for one value of ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFieldModel {
    pub eps: f64,
    pub alpha: f64,
    pub c2sq: f64,
    /// Coefficient of u in the ε²-scaled φ equation.
    pub coupling: f64,
}

impl PhaseFieldModel {
    pub fn from_params(p: &PhysicalParams, eps: f64, c2sq: f64) -> Result<Self> {
        if !(p.alpha_kin > 0.0) {
            return Err(Error::InvalidInput(
                "phase-field stepping requires alpha_kin > 0".into(),
            ));
        }
        // λ of the unscaled system maps onto λ ε² in the ε²-scaled equation.
        let coupling = match p.lambda {
            None => 2.0 * eps,
            Some(l) => l * eps * eps,
        };
        Ok(Self {
            eps,
            alpha: p.alpha_kin,
            c2sq,
            coupling,
        })
    }

    /// Largest stable step of the explicit reaction and coupling terms.
    pub fn stability_bound(&self) -> f64 {
        let e2 = self.eps * self.eps;
        let feedback = self.c2sq.abs() * self.coupling.abs() / (2.0 * self.eps);
        self.alpha * e2 / (1.0 + feedback)
    }
}

/// Largest stable time step for the given state and parameters.
pub fn stability_bound(s: &PhaseFieldState, p: &PhysicalParams) -> Result<f64> {
    Ok(PhaseFieldModel::from_params(p, s.eps, s.c2sq)?.stability_bound())
}

/// Reusable stepper holding the FFT plans of one grid.
pub struct PhaseFieldStepper {
    model: PhaseFieldModel,
    solver: ImplicitSolver,
    nx: usize,
    ny: usize,
}

impl PhaseFieldStepper {
    pub fn new(s: &PhaseFieldState, p: &PhysicalParams) -> Result<Self> {
        let model = PhaseFieldModel::from_params(p, s.eps, s.c2sq)?;
        let g = &s.phi;
        Ok(Self {
            model,
            solver: ImplicitSolver::new(g.nx(), g.ny(), g.hx(), g.hy(), g.boundary()),
            nx: g.nx(),
            ny: g.ny(),
        })
    }

    pub fn model(&self) -> &PhaseFieldModel {
        &self.model
    }

    pub fn step(&self, s: &PhaseFieldState, dt: f64) -> Result<PhaseFieldState> {
        if !(dt > 0.0) {
            return Err(Error::InvalidInput("dt must be positive".into()));
        }
        if s.phi.nx() != self.nx || s.phi.ny() != self.ny || s.eps != self.model.eps {
            return Err(Error::InvalidInput("state does not match stepper".into()));
        }
        let m = &self.model;
        let e2 = m.eps * m.eps;
        let a_phi = m.alpha * e2 / dt;
        let fixed = s.phi.boundary() == crate::field::BoundaryY::Fixed;
        let nx = self.nx;
        let last = (self.ny - 1) * nx;
        let is_boundary = |k: usize| fixed && (k < nx || k >= last);

        let phi0 = s.phi.values();
        let u0 = s.u.values();
        let rhs_phi: Vec<f64> = phi0
            .iter()
            .zip(u0)
            .enumerate()
            .map(|(k, (&p, &u))| {
                if is_boundary(k) {
                    p
                } else {
                    a_phi * p + 0.5 * (p - p * p * p) + m.coupling * u
                }
            })
            .collect();
        let phi1 = self.solver.solve(a_phi, e2, &rhs_phi);

        let a_u = m.eps / dt;
        let rhs_u: Vec<f64> = u0
            .iter()
            .enumerate()
            .map(|(k, &u)| {
                if is_boundary(k) {
                    u
                } else {
                    a_u * u - 0.5 * m.c2sq * (phi1[k] - phi0[k]) / dt
                }
            })
            .collect();
        let u1 = self.solver.solve(a_u, 1.0, &rhs_u);

        let max_abs_phi = phi1.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if !(max_abs_phi <= 2.0) {
            return Err(Error::UnstableStep {
                max_abs_phi,
                dt_bound: m.stability_bound(),
            });
        }
        Ok(PhaseFieldState {
            u: s.u.with_values(u1)?,
            phi: s.phi.with_values(phi1)?,
            t: s.t + dt,
            eps: s.eps,
            c2sq: s.c2sq,
        })
    }

    /// Steps `n` times with step `dt`.
    pub fn run(&self, s: &PhaseFieldState, dt: f64, n: usize) -> Result<PhaseFieldState> {
        let mut cur = s.clone();
        for _ in 0..n {
            cur = self.step(&cur, dt)?;
        }
        Ok(cur)
    }
}

/// Advances `s` by one step of size `dt`. The input is left unmodified.
pub fn step_phase_field(s: &PhaseFieldState, dt: f64, p: &PhysicalParams) -> Result<PhaseFieldState> {
    PhaseFieldStepper::new(s, p)?.step(s, dt)
}

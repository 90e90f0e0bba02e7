//! Initial states for both solvers from one configuration.
//!
//! Fluid 1 is the φ > 0 phase and lies on the right of the marker traversal:
//! above a flat or sine interface and outside a bubble.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{BoundaryKind, RunConfig, Shape};
use crate::error::Result;
use crate::field::{BoundaryY, ScalarField2D};
use crate::geometry::{InterfaceCurve, Vec2};
use crate::phase_field::PhaseFieldState;
use crate::vortex_sheet::SheetState;

/// Seeded perturbation modes m = 2..=5 with amplitudes in ±noise.
#[derive(Debug, Clone, PartialEq)]
struct Noise {
    modes: Vec<(f64, f64, f64)>,
}

impl Noise {
    fn new(seed: u64, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (2..=5)
            .map(|m| {
                let a = amplitude * rng.gen_range(-1.0..1.0);
                let phase = rng.gen_range(0.0..2.0 * PI);
                (m as f64, a, phase)
            })
            .collect();
        Self { modes }
    }

    fn at(&self, theta: f64) -> f64 {
        self.modes
            .iter()
            .map(|(m, a, p)| a * (m * theta + p).sin())
            .sum()
    }
}

/// The configured interface as a function, evaluated by both solvers.
pub struct InterfaceShape {
    shape: Shape,
    lx: f64,
    y0: f64,
    amplitude: f64,
    modes: f64,
    center: Vec2,
    radius: f64,
    aspect: f64,
    noise: Noise,
}

impl InterfaceShape {
    pub fn from_config(cfg: &RunConfig) -> Self {
        let n = &cfg.numerics;
        let i = &cfg.initial;
        let c = i.center.unwrap_or([0.5 * n.lx, 0.5 * n.ly]);
        Self {
            shape: i.shape,
            lx: n.lx,
            y0: cfg.y0(),
            amplitude: i.amplitude,
            modes: i.modes as f64,
            center: Vec2::new(c[0], c[1]),
            radius: i.radius,
            aspect: i.aspect,
            noise: Noise::new(cfg.seed, i.noise),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.shape, Shape::Circle | Shape::Ellipse)
    }

    /// Height of a flat or sine interface at x.
    pub fn height(&self, x: f64) -> f64 {
        let theta = 2.0 * PI * x / self.lx;
        let base = match self.shape {
            Shape::Sine => self.amplitude * (self.modes * theta).sin(),
            _ => 0.0,
        };
        self.y0 + base + self.noise.at(theta)
    }

    fn semi_axes(&self) -> (f64, f64) {
        match self.shape {
            Shape::Ellipse => (self.radius, self.radius * self.aspect),
            _ => (self.radius, self.radius),
        }
    }

    /// Point at angle θ on a closed interface.
    fn boundary_point(&self, theta: f64) -> Vec2 {
        let (a, b) = self.semi_axes();
        let r = 1.0 + self.noise.at(theta);
        self.center + Vec2::new(a * r * theta.cos(), b * r * theta.sin())
    }

    /// Approximate signed distance, positive in fluid 1.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        if self.is_closed() {
            let (a, b) = self.semi_axes();
            let d = p - self.center;
            let theta = (d.y / b).atan2(d.x / a);
            let rho = ((d.x / a).powi(2) + (d.y / b).powi(2)).sqrt();
            let r = 1.0 + self.noise.at(theta);
            (rho - r) * a.min(b)
        } else {
            p.y - self.height(p.x)
        }
    }

    /// Marker curve with fluid 1 on the right of the traversal.
    pub fn curve(&self, markers: usize) -> Result<InterfaceCurve> {
        if self.is_closed() {
            InterfaceCurve::closed_from_fn(markers, |t| self.boundary_point(t))
        } else {
            Ok(InterfaceCurve::periodic_graph(markers, self.lx, |x| self.height(x))?.reversed())
        }
    }
}

fn boundary(cfg: &RunConfig) -> BoundaryY {
    match cfg.numerics.boundary_y {
        BoundaryKind::Fixed => BoundaryY::Fixed,
        BoundaryKind::Periodic => BoundaryY::Periodic,
    }
}

/// φ = tanh(d / 2ε) with u linear between the configured wall values.
pub fn initial_phase_field(cfg: &RunConfig, eps: f64) -> Result<PhaseFieldState> {
    let n = &cfg.numerics;
    let shape = InterfaceShape::from_config(cfg);
    let bc = boundary(cfg);
    let phi = ScalarField2D::from_fn(n.nx, n.ny, n.lx, n.ly, bc, |x, y| {
        (shape.signed_distance(Vec2::new(x, y)) / (2.0 * eps)).tanh()
    })?;
    let (ub, ut) = (cfg.initial.u_bottom, cfg.initial.u_top);
    let u = ScalarField2D::from_fn(n.nx, n.ny, n.lx, n.ly, bc, |_, y| match bc {
        BoundaryY::Fixed => ub + (ut - ub) * y / n.ly,
        BoundaryY::Periodic => ub,
    })?;
    PhaseFieldState::new(u, phi, eps, cfg.c2sq())
}

pub fn initial_sheet(cfg: &RunConfig) -> Result<SheetState> {
    let curve = InterfaceShape::from_config(cfg).curve(cfg.numerics.markers)?;
    SheetState::from_params(curve, &cfg.physical, cfg.numerics.blob_delta)
}

//! Run configuration: a TOML document with a versioned schema.
//!
//! ```toml
//! schema_version = 1
//! method = "vortex-sheet"
//! seed = 7
//!
//! [physical]
//! mu1 = 1.0
//! mu2 = 1.0
//!
//! [numerics]
//! markers = 64
//! steps = 200
//!
//! [initial]
//! shape = "sine"
//! amplitude = 0.02
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Missing sections and keys take their defaults; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::params::PhysicalParams;
use crate::vortex_sheet::Integrator;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PhaseField,
    VortexSheet,
    Compare,
    VerifyAsymptotics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    #[default]
    Fixed,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorKind {
    #[default]
    Rk2,
    Rk4,
}

impl From<IntegratorKind> for Integrator {
    fn from(k: IntegratorKind) -> Self {
        match k {
            IntegratorKind::Rk2 => Integrator::Rk2,
            IntegratorKind::Rk4 => Integrator::Rk4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Phase-field grid.
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub boundary_y: BoundaryKind,
    /// Interface width of a single phase-field run.
    pub eps: f64,
    /// Interface widths of a comparison, strictly decreasing.
    pub eps_schedule: Vec<f64>,
    /// Phase-field step; `dt_fraction` times the stability bound when absent.
    pub dt: Option<f64>,
    pub dt_fraction: f64,
    pub steps: usize,
    /// Final time (phase-field time for phase-field and compare runs,
    /// sheet time for vortex-sheet runs). Overrides `steps` when present.
    pub t_end: Option<f64>,
    pub markers: usize,
    /// Sheet step; chosen from `cfl` when absent.
    pub sheet_dt: Option<f64>,
    pub cfl: f64,
    pub blob_delta: f64,
    pub tol_gamma: f64,
    pub relaxation: f64,
    pub max_iter: usize,
    pub integrator: IntegratorKind,
    pub redistribute_ratio: f64,
    /// Resampling count for the Hausdorff distance.
    pub comparison_points: usize,
    /// Slack band of the monotone-trend test.
    pub monotone_slack: f64,
    /// Profile quadrature and dispersion settings of `verify-asymptotics`.
    pub profile_half_width: f64,
    pub profile_steps: Vec<usize>,
    pub sigma_tol: f64,
    pub dispersion_modes: Vec<f64>,
    /// Imposed u values of the driven planar-front runs; empty skips them.
    pub matching_drives: Vec<f64>,
    pub matching_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            nx: 128,
            ny: 128,
            lx: 1.0,
            ly: 1.0,
            boundary_y: BoundaryKind::Fixed,
            eps: 0.04,
            eps_schedule: vec![0.08, 0.04, 0.02],
            dt: None,
            dt_fraction: 0.5,
            steps: 100,
            t_end: None,
            markers: 64,
            sheet_dt: None,
            cfl: 0.25,
            blob_delta: 0.0,
            tol_gamma: 1e-10,
            relaxation: 0.8,
            max_iter: 200,
            integrator: IntegratorKind::Rk2,
            redistribute_ratio: 2.0,
            comparison_points: 512,
            monotone_slack: 0.1,
            profile_half_width: 30.0,
            profile_steps: vec![128, 256, 512, 1024],
            sigma_tol: 1e-8,
            dispersion_modes: vec![1.0, 2.0, 3.0, 4.0],
            matching_drives: Vec::new(),
            matching_tol: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Flat,
    #[default]
    Sine,
    Circle,
    Ellipse,
}

/// Initial interface and boundary data shared by both solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Initial {
    pub shape: Shape,
    /// Mean height of flat and sine interfaces.
    pub y0: Option<f64>,
    pub amplitude: f64,
    /// Number of sine periods across the width.
    pub modes: u32,
    pub center: Option<[f64; 2]>,
    pub radius: f64,
    /// Semi-axis ratio b/a of the ellipse.
    pub aspect: f64,
    /// Amplitude of a seeded random marker perturbation.
    pub noise: f64,
    /// u on the bottom and top rows of a fixed-boundary phase-field grid.
    /// A periodic grid starts from uniform u = `u_bottom`.
    pub u_bottom: f64,
    pub u_top: f64,
}

impl Default for Initial {
    fn default() -> Self {
        Self {
            shape: Shape::Sine,
            y0: None,
            amplitude: 0.02,
            modes: 1,
            center: None,
            radius: 0.25,
            aspect: 0.7,
            noise: 0.0,
            u_bottom: 0.0,
            u_top: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub dir: PathBuf,
    /// Snapshot every n steps; 0 writes the final state only.
    pub snapshot_every: usize,
    /// Trajectory row cadence of sheet runs.
    pub trajectory_every: usize,
    pub snapshots: bool,
    pub figures: bool,
}

impl Default for Output {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            snapshot_every: 0,
            trajectory_every: 10,
            snapshots: true,
            figures: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub method: Method,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub physical: PhysicalParams,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub initial: Initial,
    #[serde(default)]
    pub output: Output,
}

/// Dotted path `section.key` of the line a parse error points at.
fn error_field(text: &str, e: &toml::de::Error) -> String {
    let from_message = || e.message().split('`').nth(1).unwrap_or("document").to_string();
    let Some(span) = e.span().filter(|_| !e.message().starts_with("missing field")) else {
        return from_message();
    };
    let start = span.start.min(text.len());
    let mut section = String::new();
    let mut key = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let t = line.trim();
        if t.starts_with('[') {
            section = t.trim_matches(|c| c == '[' || c == ']').trim().to_string();
        }
        if start < offset + line.len() {
            key = t.split_once('=').map(|(k, _)| k.trim().to_string());
            break;
        }
        offset += line.len();
    }
    match key {
        Some(k) if section.is_empty() => k,
        Some(k) => format!("{section}.{k}"),
        None => from_message(),
    }
}

impl RunConfig {
    pub fn new(method: Method) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            method,
            seed: 0,
            physical: PhysicalParams::default(),
            numerics: Numerics::default(),
            initial: Initial::default(),
            output: Output::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::ConfigInvalid {
            field: error_field(text, &e),
            message: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err("path", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Matching constant c₂² = ℓ/K of the phase-field runs.
    pub fn c2sq(&self) -> f64 {
        self.physical.matching_constant()
    }

    /// Mean interface height: mid-height unless configured.
    pub fn y0(&self) -> f64 {
        self.initial.y0.unwrap_or(0.5 * self.numerics.ly)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_err(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, found {}", self.schema_version),
            ));
        }
        // TOML integers are signed 64-bit
        if i64::try_from(self.seed).is_err() {
            return Err(config_err("seed", format!("{} exceeds {}", self.seed, i64::MAX)));
        }
        self.physical
            .validate()
            .map_err(|e| config_err("physical", e.to_string()))?;
        let n = &self.numerics;
        let positive = [
            ("numerics.lx", n.lx),
            ("numerics.ly", n.ly),
            ("numerics.eps", n.eps),
            ("numerics.dt_fraction", n.dt_fraction),
            ("numerics.cfl", n.cfl),
            ("numerics.tol_gamma", n.tol_gamma),
            ("numerics.relaxation", n.relaxation),
            ("numerics.redistribute_ratio", n.redistribute_ratio),
            ("numerics.monotone_slack", n.monotone_slack),
            ("numerics.sigma_tol", n.sigma_tol),
            ("numerics.matching_tol", n.matching_tol),
        ];
        for (field, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(config_err(field, format!("must be positive, got {v}")));
            }
        }
        if n.relaxation > 1.0 {
            return Err(config_err("numerics.relaxation", "must lie in (0, 1]"));
        }
        if n.nx < 8 || n.ny < 8 {
            return Err(config_err("numerics.nx", "grids need at least 8 nodes per side"));
        }
        if n.markers < crate::geometry::MIN_MARKERS {
            return Err(config_err("numerics.markers", "need at least 8 markers"));
        }
        if n.comparison_points < crate::geometry::MIN_MARKERS {
            return Err(config_err("numerics.comparison_points", "need at least 8 points"));
        }
        for (field, v) in [("numerics.dt", n.dt), ("numerics.sheet_dt", n.sheet_dt), ("numerics.t_end", n.t_end)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(config_err(field, format!("must be positive, got {v}")));
                }
            }
        }
        if !(self.physical.ell > 0.0) {
            return Err(config_err("physical.ell", "matching constant ell/K must be positive"));
        }
        if n.blob_delta < 0.0 {
            return Err(config_err("numerics.blob_delta", "must be non-negative"));
        }
        if n.eps_schedule.iter().any(|e| !(*e > 0.0)) {
            return Err(config_err("numerics.eps_schedule", "values must be positive"));
        }
        if n.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(config_err("numerics.eps_schedule", "must be strictly decreasing"));
        }
        if self.method == Method::Compare && n.eps_schedule.len() < 3 {
            return Err(config_err("numerics.eps_schedule", "compare needs at least 3 values"));
        }
        if self.method == Method::VerifyAsymptotics && n.profile_steps.iter().any(|s| *s < 64) {
            return Err(config_err("numerics.profile_steps", "values must be at least 64"));
        }
        if n.dispersion_modes.iter().any(|m| !(*m > 0.0)) {
            return Err(config_err("numerics.dispersion_modes", "values must be positive"));
        }
        let i = &self.initial;
        if i.modes == 0 {
            return Err(config_err("initial.modes", "must be at least 1"));
        }
        if matches!(i.shape, Shape::Circle | Shape::Ellipse) && !(i.radius > 0.0) {
            return Err(config_err("initial.radius", "must be positive"));
        }
        if i.shape == Shape::Ellipse && !(i.aspect > 0.0) {
            return Err(config_err("initial.aspect", "must be positive"));
        }
        if i.noise < 0.0 {
            return Err(config_err("initial.noise", "must be non-negative"));
        }
        if self.output.trajectory_every == 0 {
            return Err(config_err("output.trajectory_every", "must be at least 1"));
        }
        Ok(())
    }
}

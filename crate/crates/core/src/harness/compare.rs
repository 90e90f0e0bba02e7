//! Cross-method comparison: phase-field interfaces at decreasing ε against
//! one vortex-sheet run, at matched times.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{BoundaryKind, RunConfig, Shape};
use super::setup::{initial_phase_field, initial_sheet};
use super::studies::is_monotone;
use crate::asymptotics::{linear_growth_oracle_with, DispersionConfig, EXACT_SIGMA};
use crate::error::{config_err, Error, Result};
use crate::geometry::{distance_to_curve, InterfaceCurve};
use crate::params::sheet_groups;
use crate::phase_field::{extract_interface, PhaseFieldState, PhaseFieldStepper};
use crate::vortex_sheet::{
    advance_interface, solve_sheet_strength, suggest_dt, SheetOptions, SheetState,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub eps_values: Vec<f64>,
    pub hausdorff_distances: Vec<f64>,
    pub monotone_flag: bool,
    /// Wall time of each phase-field run (s).
    pub runtimes: Vec<f64>,
    /// Distance between the initial interfaces of each ε.
    pub initial_distances: Vec<f64>,
    pub t_phase_field: f64,
    pub t_sheet: f64,
    /// Sheet time per unit phase-field time.
    pub clock_factor: f64,
    pub sheet_runtime: f64,
}

/// Comparison report with the interfaces it was computed from.
#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub report: ComparisonReport,
    pub phase_field_curves: Vec<InterfaceCurve>,
    pub sheet_initial: InterfaceCurve,
    pub sheet_final: InterfaceCurve,
}

/// Largest distance from a point of `a` to the polyline `b`.
fn directed(a: &InterfaceCurve, b: &InterfaceCurve) -> f64 {
    a.markers()
        .par_iter()
        .map(|p| distance_to_curve(*p, b).0)
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance after resampling both curves to `points`.
pub fn hausdorff(a: &InterfaceCurve, b: &InterfaceCurve, points: usize) -> Result<f64> {
    let ra = a.resample(points)?;
    let rb = b.resample(points)?;
    Ok(directed(&ra, &rb).max(directed(&rb, &ra)))
}

/// Sharp-interface decay rate of mode k for the phase-field limit between
/// fixed walls at distances `h_below` and `h_above`.
pub fn phase_field_mode_rate(k: f64, c2sq: f64, alpha: f64, h_below: f64, h_above: f64) -> f64 {
    let coth = |x: f64| 1.0 / x.tanh();
    let kk = 0.5 * k * (coth(k * h_below) + coth(k * h_above));
    let g = EXACT_SIGMA * kk / (2.0 * c2sq);
    -g * k * k / (1.0 + alpha * g)
}

/// Sheet rate of the configured mode and the phase-field rate of the same
/// mode, in that order.
pub fn mode_rates(cfg: &RunConfig) -> Result<(f64, f64)> {
    let n = &cfg.numerics;
    let k = 2.0 * PI * cfg.initial.modes as f64 / n.lx;
    let g = sheet_groups(&cfg.physical)?;
    let dcfg = DispersionConfig {
        markers: n.markers,
        period: Some(n.lx),
        ..Default::default()
    };
    // setup puts fluid 1 above the interface, the mirror of the oracle's sheet
    let sheet = linear_growth_oracle_with(k, g.atwood, g.b, g.drive.flipped(), &dcfg)?;
    let y0 = cfg.y0();
    let pf = phase_field_mode_rate(k, cfg.c2sq(), cfg.physical.alpha_kin, y0, n.ly - y0);
    Ok((sheet, pf))
}

fn sheet_options(cfg: &RunConfig) -> SheetOptions {
    let n = &cfg.numerics;
    SheetOptions {
        tol_gamma: n.tol_gamma,
        relaxation: n.relaxation,
        max_iter: n.max_iter,
        integrator: n.integrator.into(),
        redistribute_ratio: Some(n.redistribute_ratio),
        check_intersection: true,
    }
}

/// Runs the sheet from the configured interface to time `t_end`, calling
/// `observe` after every step with the step index.
/// Sheet step size and count: `t_end` reached exactly when given, else
/// `numerics.steps` steps.
pub fn sheet_schedule(cfg: &RunConfig, s: &SheetState, t_end: Option<f64>) -> (f64, usize) {
    let n = &cfg.numerics;
    let dt = match n.sheet_dt {
        Some(dt) => dt,
        None => suggest_dt(s, n.cfl).unwrap_or(t_end.unwrap_or(1.0)),
    };
    match t_end {
        Some(t) => {
            let steps = (t / dt).ceil().max(1.0) as usize;
            (t / steps as f64, steps)
        }
        None => (dt, n.steps),
    }
}

/// Runs the configured sheet, calling `observe` on the initial solve and
/// after every step.
pub fn run_sheet(
    cfg: &RunConfig,
    t_end: Option<f64>,
    mut observe: impl FnMut(usize, &SheetState) -> Result<()>,
) -> Result<SheetState> {
    let opts = sheet_options(cfg);
    let s0 = initial_sheet(cfg)?;
    let mut s = solve_sheet_strength(&s0, &opts)?.state;
    observe(0, &s)?;
    if t_end.is_some_and(|t| t <= 0.0) {
        return Ok(s);
    }
    let (dt, steps) = sheet_schedule(cfg, &s, t_end);
    for step in 1..=steps {
        s = advance_interface(&s, dt, &opts)
            .map_err(|e| annotate(e, &format!("sheet step {step}")))?;
        observe(step, &s)?;
    }
    Ok(s)
}

fn annotate(e: Error, context: &str) -> Error {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("{context}: {m}")),
        other => other,
    }
}

/// Phase-field step size and count reaching `t_end` exactly.
pub fn phase_field_schedule(cfg: &RunConfig, stepper: &PhaseFieldStepper, t_end: Option<f64>) -> (f64, usize) {
    let n = &cfg.numerics;
    let dt = n.dt.unwrap_or(n.dt_fraction * stepper.model().stability_bound());
    match t_end {
        Some(t) => {
            let steps = (t / dt).ceil().max(1.0) as usize;
            (t / steps as f64, steps)
        }
        None => (dt, n.steps),
    }
}

/// Runs a phase-field state forward, calling `observe` after every step.
pub fn run_phase_field(
    cfg: &RunConfig,
    eps: f64,
    t_end: Option<f64>,
    mut observe: impl FnMut(usize, &PhaseFieldState) -> Result<()>,
) -> Result<PhaseFieldState> {
    let mut s = initial_phase_field(cfg, eps)?;
    let stepper = PhaseFieldStepper::new(&s, &cfg.physical)?;
    let (dt, steps) = phase_field_schedule(cfg, &stepper, t_end);
    observe(0, &s)?;
    for step in 1..=steps {
        s = stepper.step(&s, dt)?;
        observe(step, &s)?;
    }
    Ok(s)
}

pub fn compare_methods(cfg: &RunConfig) -> Result<ComparisonOutcome> {
    let n = &cfg.numerics;
    if n.eps_schedule.len() < 3 {
        return Err(config_err("numerics.eps_schedule", "compare needs at least 3 values"));
    }
    if n.boundary_y != BoundaryKind::Fixed {
        return Err(config_err("numerics.boundary_y", "compare needs fixed walls in y"));
    }
    if !matches!(cfg.initial.shape, Shape::Sine | Shape::Flat) {
        return Err(config_err("initial.shape", "compare supports flat and sine interfaces"));
    }
    let (r_sheet, r_pf) = mode_rates(cfg)?;
    if !(r_sheet < 0.0 && r_pf < 0.0) {
        return Err(config_err(
            "physical",
            format!("clock alignment needs a decaying mode (sheet {r_sheet:.4}, phase field {r_pf:.4})"),
        ));
    }
    let clock = r_pf / r_sheet;
    let t_pf = n.t_end.unwrap_or(1.0 / r_pf.abs());
    let t_sheet = t_pf * clock;

    let start = Instant::now();
    let sheet_initial = initial_sheet(cfg)?.curve;
    let sheet_final = run_sheet(cfg, Some(t_sheet), |_, _| Ok(()))?.curve;
    let sheet_runtime = start.elapsed().as_secs_f64();

    let cell = n.lx / n.nx as f64;
    let cell = cell.max(n.ly / (n.ny - 1) as f64);
    let points = n.comparison_points;
    let runs: Vec<Result<(InterfaceCurve, f64, f64)>> = n
        .eps_schedule
        .par_iter()
        .map(|&eps| {
            let t0 = Instant::now();
            let s0 = initial_phase_field(cfg, eps)?;
            let c0 = extract_interface(&s0.phi)?.curve;
            let d0 = hausdorff(&c0, &sheet_initial, points)?;
            if d0 > cell {
                return Err(Error::MismatchedInitialCondition { distance: d0, cell });
            }
            let s = run_phase_field(cfg, eps, Some(t_pf), |_, _| Ok(()))?;
            let c = extract_interface(&s.phi)?.curve;
            Ok((c, d0, t0.elapsed().as_secs_f64()))
        })
        .collect();
    let mut curves = Vec::new();
    let mut distances = Vec::new();
    let mut initial = Vec::new();
    let mut runtimes = Vec::new();
    for r in runs {
        let (c, d0, rt) = r?;
        distances.push(hausdorff(&c, &sheet_final, points)?);
        curves.push(c);
        initial.push(d0);
        runtimes.push(rt);
    }
    let monotone_flag = is_monotone(&distances, n.monotone_slack);
    Ok(ComparisonOutcome {
        report: ComparisonReport {
            eps_values: n.eps_schedule.clone(),
            hausdorff_distances: distances,
            monotone_flag,
            runtimes,
            initial_distances: initial,
            t_phase_field: t_pf,
            t_sheet,
            clock_factor: clock,
            sheet_runtime,
        },
        phase_field_curves: curves,
        sheet_initial,
        sheet_final,
    })
}

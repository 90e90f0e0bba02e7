//! Verification studies built from full solver runs: sharp-interface
//! residuals under ε refinement, driven planar fronts for the matching
//! constant, and early-time growth of a sheet perturbation.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::compare::{mode_rates, phase_field_schedule, run_phase_field, run_sheet};
use super::config::{BoundaryKind, RunConfig, Shape};
use super::setup::initial_phase_field;
use crate::asymptotics::{verify_matching_constant, JumpSample, MatchingReport};
use crate::error::{config_err, Result};
use crate::geometry::InterfaceCurve;
use crate::phase_field::{measure_sharp_interface, PhaseFieldState, PhaseFieldStepper, SharpInterfaceReport};

/// True when every value is at most the previous one times (1 + slack).
pub fn is_monotone(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}

/// Runs one ε to `t_end` and returns the final state together with the
/// state `window` earlier (at least one step).
fn run_with_lag(
    cfg: &RunConfig,
    eps: f64,
    t_end: f64,
    window: f64,
) -> Result<(PhaseFieldState, PhaseFieldState)> {
    let s0 = initial_phase_field(cfg, eps)?;
    let stepper = PhaseFieldStepper::new(&s0, &cfg.physical)?;
    let (dt, steps) = phase_field_schedule(cfg, &stepper, Some(t_end));
    let back = ((window / dt).round() as usize).clamp(1, steps);
    let mut prev = None;
    let s = run_phase_field(cfg, eps, Some(t_end), |step, s| {
        if step == steps - back {
            prev = Some(s.clone());
        }
        Ok(())
    })?;
    Ok((s, prev.expect("lagged state recorded")))
}

#[derive(Debug, Clone)]
pub struct ResidualStudy {
    pub eps_values: Vec<f64>,
    pub gibbs_thomson: Vec<f64>,
    pub flux_jump: Vec<f64>,
    pub harmonicity: Vec<f64>,
    pub reports: Vec<SharpInterfaceReport>,
}

impl ResidualStudy {
    /// All three residual series non-increasing within `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        is_monotone(&self.gibbs_thomson, slack)
            && is_monotone(&self.flux_jump, slack)
            && is_monotone(&self.harmonicity, slack)
    }
}

/// Sharp-interface residuals of each ε of the schedule at `t_end`, with the
/// normal velocity taken over the last `window_fraction` of the run.
pub fn sharp_interface_study(cfg: &RunConfig, t_end: f64, window_fraction: f64) -> Result<ResidualStudy> {
    let eps_values = cfg.numerics.eps_schedule.clone();
    let reports = eps_values
        .par_iter()
        .map(|&eps| {
            let (s, prev) = run_with_lag(cfg, eps, t_end, t_end * window_fraction)?;
            measure_sharp_interface(&s, &cfg.physical, &prev)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualStudy {
        gibbs_thomson: reports.iter().map(|r| r.gibbs_thomson_residual).collect(),
        flux_jump: reports.iter().map(|r| r.flux_jump_residual).collect(),
        harmonicity: reports.iter().map(|r| r.harmonicity_residual).collect(),
        eps_values,
        reports,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingRun {
    /// Wall value of u driving the front.
    pub drive: f64,
    pub sample: JumpSample,
}

/// Planar fronts driven by u = G on both walls, one per entry of
/// `numerics.matching_drives`, each run at `numerics.eps` to `t_end`.
/// Returns the per-run samples and the regression against ℓ/K.
pub fn matching_runs(cfg: &RunConfig, t_end: f64) -> Result<(Vec<MatchingRun>, MatchingReport)> {
    let drives = &cfg.numerics.matching_drives;
    if drives.is_empty() {
        return Err(config_err("numerics.matching_drives", "no driven runs configured"));
    }
    let runs = drives
        .par_iter()
        .map(|&g| {
            let mut c = cfg.clone();
            c.initial.shape = Shape::Flat;
            c.initial.noise = 0.0;
            c.numerics.boundary_y = BoundaryKind::Fixed;
            c.initial.u_bottom = g;
            c.initial.u_top = g;
            let (s, prev) = run_with_lag(&c, c.numerics.eps, t_end, t_end / 20.0)?;
            let r = measure_sharp_interface(&s, &c.physical, &prev)?;
            Ok(MatchingRun {
                drive: g,
                sample: JumpSample {
                    flux_jump: r.mean_flux_jump(),
                    velocity: r.mean_normal_velocity(),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<JumpSample> = runs.iter().map(|r| r.sample).collect();
    let report = verify_matching_constant(&samples, cfg.c2sq())?;
    Ok((runs, report))
}

/// Fourier coefficient of sin(kx) in the height y − y0 of a periodic graph
/// interface, integrated with the trapezoid rule along the polyline.
pub fn mode_amplitude(curve: &InterfaceCurve, k: f64, y0: f64, period: f64) -> f64 {
    let m = curve.markers();
    let n = m.len();
    let f = |x: f64, y: f64| (y - y0) * (k * x).sin();
    let mut acc = 0.0;
    for i in 0..n {
        let a = m[i];
        let b = m[(i + 1) % n];
        let dx = (b.x - a.x) - period * ((b.x - a.x) / period).round();
        acc += 0.5 * (f(a.x, a.y) + f(a.x + dx, b.y)) * dx;
    }
    2.0 * acc.abs() / period
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    /// Least-squares slope of ln(amplitude) against t.
    pub fitted: f64,
    /// Linearized rate of the same discrete sheet.
    pub oracle: f64,
    pub samples: usize,
    pub initial_amplitude: f64,
    pub final_amplitude: f64,
}

impl GrowthFit {
    pub fn relative_deviation(&self) -> f64 {
        ((self.fitted - self.oracle) / self.oracle).abs()
    }
}

/// Runs the configured sine interface to `t_end` and fits the growth rate
/// of its mode while the amplitude stays below `amplitude_limit`.
pub fn sheet_growth_fit(cfg: &RunConfig, t_end: f64, amplitude_limit: f64) -> Result<GrowthFit> {
    if cfg.initial.shape != Shape::Sine {
        return Err(config_err("initial.shape", "growth fit needs a sine interface"));
    }
    let n = &cfg.numerics;
    let k = 2.0 * PI * cfg.initial.modes as f64 / n.lx;
    let y0 = cfg.y0();
    let (oracle, _) = mode_rates(cfg)?;
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    let mut amps = Vec::new();
    let mut inside = true;
    run_sheet(cfg, Some(t_end), |_, s| {
        let a = mode_amplitude(&s.curve, k, y0, n.lx);
        inside &= a < amplitude_limit;
        if inside && a > 0.0 {
            ts.push(s.t);
            logs.push(a.ln());
            amps.push(a);
        }
        Ok(())
    })?;
    if ts.len() < 3 {
        return Err(crate::error::Error::InsufficientData(format!(
            "{} samples below the amplitude limit",
            ts.len()
        )));
    }
    let m = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / m;
    let ml = logs.iter().sum::<f64>() / m;
    let sxy: f64 = ts.iter().zip(&logs).map(|(t, l)| (t - mt) * (l - ml)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    Ok(GrowthFit {
        fitted: sxy / sxx,
        oracle,
        samples: ts.len(),
        initial_amplitude: amps[0],
        final_amplitude: *amps.last().unwrap(),
    })
}

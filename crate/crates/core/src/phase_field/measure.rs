//! Sharp-interface diagnostics of a phase-field state: normal velocity, flux
//! jump, Gibbs–Thomson pressure, harmonicity of u away from the interface,
//! and the fit of the normal profile of φ against tanh(ρ/2).

use crate::asymptotics::EXACT_SIGMA;
use crate::error::{Error, Result};
use crate::field::BoundaryY;
use crate::geometry::{distance_to_curve, InterfaceCurve, Vec2};
use crate::params::PhysicalParams;

use super::contour::extract_interface;
use super::PhaseFieldState;

/// Interface pressure predicted by u = [(−αv − κ)/4]σ.
pub fn gibbs_thomson_pressure(v: f64, kappa: f64, alpha: f64, sigma: f64) -> f64 {
    (-alpha * v - kappa) * sigma / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    /// Sampling offset from the interface in units of ε.
    pub d_off: f64,
    /// Half-width of the excluded interface collar in units of ε.
    pub collar: f64,
    /// Moving-average window for the normal velocity (markers).
    pub smoothing_window: usize,
    /// Resampling spacing of the extracted interface in grid cells;
    /// `None` keeps the raw contour points.
    pub marker_spacing_cells: Option<f64>,
    /// Surface-tension constant σ.
    pub sigma: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            d_off: 4.0,
            collar: 6.0,
            smoothing_window: 5,
            marker_spacing_cells: Some(3.0),
            sigma: EXACT_SIGMA,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharpInterfaceReport {
    pub gibbs_thomson_residual: f64,
    pub flux_jump_residual: f64,
    pub harmonicity_residual: f64,
    pub measured_normal_velocity: Vec<f64>,
    pub measured_curvature: Vec<f64>,
    /// [∂u/∂n]₊₋ per marker, n pointing into φ > 0.
    pub flux_jump: Vec<f64>,
    /// Interface value of u extrapolated from both sides, per marker.
    pub interface_pressure: Vec<f64>,
    pub curve: InterfaceCurve,
}

impl SharpInterfaceReport {
    pub fn mean_flux_jump(&self) -> f64 {
        mean(&self.flux_jump)
    }

    pub fn mean_normal_velocity(&self) -> f64 {
        mean(&self.measured_normal_velocity)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn smooth_periodic(v: &[f64], window: usize) -> Vec<f64> {
    let n = v.len();
    let half = (window.max(1) / 2).min((n - 1) / 2) as isize;
    (0..n as isize)
        .map(|i| {
            let s: f64 = (-half..=half)
                .map(|k| v[(i + k).rem_euclid(n as isize) as usize])
                .sum();
            s / (2 * half + 1) as f64
        })
        .collect()
}

fn resampled(curve: InterfaceCurve, h: f64, cfg: &MeasureConfig) -> Result<InterfaceCurve> {
    match cfg.marker_spacing_cells {
        Some(cells) => {
            let target = cells * h;
            if target < curve.total_arclength() / crate::geometry::MIN_MARKERS as f64 {
                curve.redistribute(target)
            } else {
                Ok(curve)
            }
        }
        None => Ok(curve),
    }
}

pub fn measure_sharp_interface(
    s: &PhaseFieldState,
    p: &PhysicalParams,
    prev: &PhaseFieldState,
) -> Result<SharpInterfaceReport> {
    measure_sharp_interface_with(s, p, prev, &MeasureConfig::default())
}

pub fn measure_sharp_interface_with(
    s: &PhaseFieldState,
    p: &PhysicalParams,
    prev: &PhaseFieldState,
    cfg: &MeasureConfig,
) -> Result<SharpInterfaceReport> {
    if !s.phi.same_grid(&prev.phi) || !s.u.same_grid(&s.phi) {
        return Err(Error::InvalidInput("states do not share a grid".into()));
    }
    let dt = s.t - prev.t;
    if !(dt > 0.0) {
        return Err(Error::InvalidInput("prev.t must precede s.t".into()));
    }
    let h = s.phi.hx().max(s.phi.hy());
    let curve = resampled(extract_interface(&s.phi)?.curve, h, cfg)?;
    let prev_curve = extract_interface(&prev.phi)?.curve;

    let normals = curve.normals();
    let kappa = smooth_periodic(&curve.curvature()?, cfg.smoothing_window);
    let raw_v: Vec<f64> = curve
        .markers()
        .iter()
        .zip(&normals)
        .map(|(x, n)| {
            let (_, q) = distance_to_curve(*x, &prev_curve);
            (*x - q).dot(*n) / dt
        })
        .collect();
    let v = smooth_periodic(&raw_v, cfg.smoothing_window);

    let d = cfg.d_off * s.eps;
    let c2sq = p.matching_constant();
    let mut flux_jump = Vec::with_capacity(curve.len());
    let mut interface_pressure = Vec::with_capacity(curve.len());
    let mut gt_res: f64 = 0.0;
    let mut flux_res: f64 = 0.0;
    for (i, (x, n)) in curve.markers().iter().zip(&normals).enumerate() {
        let at = |k: f64| s.u.sample(*x + *n * (k * d));
        // quadratic through samples at d, 2d, 3d, extrapolated to the interface
        let side = |sign: f64| {
            let (a, b, c) = (at(sign), at(2.0 * sign), at(3.0 * sign));
            let value = 3.0 * a - 3.0 * b + c;
            let slope = (-2.5 * a + 4.0 * b - 1.5 * c) / d;
            (value, sign * slope)
        };
        let (u_plus, grad_plus) = side(1.0);
        let (u_minus, grad_minus) = side(-1.0);
        let jump = grad_plus - grad_minus;
        let u_gamma = 0.5 * (u_plus + u_minus);
        flux_res = flux_res.max((jump + c2sq * v[i]).abs());
        let predicted = gibbs_thomson_pressure(v[i], kappa[i], p.alpha_kin, cfg.sigma);
        gt_res = gt_res.max((u_gamma - predicted).abs());
        flux_jump.push(jump);
        interface_pressure.push(u_gamma);
    }

    let collar = cfg.collar * s.eps;
    let lap = s.u.laplacian();
    let mut harm: f64 = 0.0;
    let (nx, ny) = (s.u.nx(), s.u.ny());
    for j in 0..ny {
        if s.u.boundary() == BoundaryY::Fixed && (j == 0 || j == ny - 1) {
            continue;
        }
        for i in 0..nx {
            let node = s.u.node(i, j);
            let (dist, _) = distance_to_curve(node, &curve);
            if dist > collar {
                harm = harm.max(lap.at(i, j).abs());
            }
        }
    }

    Ok(SharpInterfaceReport {
        gibbs_thomson_residual: gt_res,
        flux_jump_residual: flux_res,
        harmonicity_residual: harm,
        measured_normal_velocity: v,
        measured_curvature: kappa,
        flux_jump,
        interface_pressure,
        curve,
    })
}

/// Fit of the normal φ profile at one marker against tanh((ρ − ρ₀)/2).
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFit {
    /// Fitted offset ρ₀ in units of ε.
    pub offset: f64,
    /// L∞ misfit after the offset fit.
    pub misfit: f64,
    pub rho: Vec<f64>,
    pub phi: Vec<f64>,
}

pub fn measure_profile(s: &PhaseFieldState, c: &InterfaceCurve, marker_index: usize) -> Result<ProfileFit> {
    measure_profile_with(s, c, marker_index, 8.0, 0.125)
}

/// Samples φ at `x + ρ ε n` for ρ in `[-half_width, half_width]` and fits the
/// offset by Gauss–Newton on the squared residual.
pub fn measure_profile_with(
    s: &PhaseFieldState,
    c: &InterfaceCurve,
    marker_index: usize,
    half_width: f64,
    step: f64,
) -> Result<ProfileFit> {
    if marker_index >= c.len() {
        return Err(Error::InvalidInput(format!(
            "marker index {marker_index} out of range (curve has {})",
            c.len()
        )));
    }
    let x: Vec2 = c.markers()[marker_index];
    let n = c.normals()[marker_index];
    let count = (2.0 * half_width / step).round() as usize + 1;
    let rho: Vec<f64> = (0..count).map(|k| -half_width + k as f64 * step).collect();
    let phi: Vec<f64> = rho.iter().map(|r| s.phi.sample(x + n * (r * s.eps))).collect();

    let mut off = 0.0;
    for _ in 0..50 {
        let (mut g, mut hsum) = (0.0, 0.0);
        for (r, f) in rho.iter().zip(&phi) {
            let t = ((r - off) / 2.0).tanh();
            let dt = -0.5 * (1.0 - t * t);
            g += (t - f) * dt;
            hsum += dt * dt;
        }
        let delta = g / hsum;
        off -= delta;
        if delta.abs() < 1e-14 {
            break;
        }
    }
    let misfit = rho
        .iter()
        .zip(&phi)
        .map(|(r, f)| (((r - off) / 2.0).tanh() - f).abs())
        .fold(0.0, f64::max);
    Ok(ProfileFit {
        offset: off,
        misfit,
        rho,
        phi,
    })
}

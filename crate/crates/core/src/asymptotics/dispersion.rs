//! Linearized growth rate of a small sinusoidal perturbation of a flat
//! periodic sheet, computed from the discrete sheet model itself.
//!
//! The probe sheet is traversed left to right, so fluid 1 lies below it.
//! Mirroring y swaps the fluids and flips the drive sign.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::InterfaceCurve;
use crate::params::DriveSign;
use crate::vortex_sheet::{solve_sheet_strength, SheetOptions, SheetState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionConfig {
    pub markers: usize,
    /// Domain period; one wavelength when `None`.
    pub period: Option<f64>,
    /// Probe amplitude as a fraction of the wavelength.
    pub relative_amplitude: f64,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            markers: 128,
            period: None,
            relative_amplitude: 1e-6,
        }
    }
}

/// Projection of v onto sin(kx) for the interface y = amp·sin(kx), divided
/// by amp.
pub fn rate_at_amplitude(
    k: f64,
    atwood: f64,
    b: f64,
    drive: DriveSign,
    amp: f64,
    cfg: &DispersionConfig,
) -> Result<f64> {
    if !(k > 0.0) || amp == 0.0 {
        return Err(Error::InvalidInput("need k > 0 and a nonzero amplitude".into()));
    }
    let period = cfg.period.unwrap_or(2.0 * PI / k);
    let modes = period * k / (2.0 * PI);
    if (modes - modes.round()).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "wavenumber {k} does not fit the period {period}"
        )));
    }
    let n = cfg.markers;
    let curve = InterfaceCurve::periodic_graph(n, period, |x| amp * (k * x).sin())?;
    let s = SheetState::new(curve, atwood, b, drive, 0.0)?;
    let s = solve_sheet_strength(&s, &SheetOptions::default())?.state;
    let u = s.marker_velocities()?;
    let proj = s
        .curve
        .markers()
        .iter()
        .zip(&u)
        .map(|(p, v)| v.y * (k * p.x).sin())
        .sum::<f64>()
        * 2.0
        / n as f64;
    Ok(proj / amp)
}

/// Growth rate from a central difference of the amplitude projection around
/// the flat state.
pub fn linear_growth_oracle(k: f64, atwood: f64, b: f64, drive: DriveSign) -> Result<f64> {
    linear_growth_oracle_with(k, atwood, b, drive, &DispersionConfig::default())
}

pub fn linear_growth_oracle_with(
    k: f64,
    atwood: f64,
    b: f64,
    drive: DriveSign,
    cfg: &DispersionConfig,
) -> Result<f64> {
    let amp = cfg.relative_amplitude * 2.0 * PI / k;
    let up = rate_at_amplitude(k, atwood, b, drive, amp, cfg)? * amp;
    let down = rate_at_amplitude(k, atwood, b, drive, -amp, cfg)? * -amp;
    Ok((up - down) / (2.0 * amp))
}

/// Continuum rate drive·k − B k³ of the sheet model.
pub fn continuum_growth_rate(k: f64, b: f64, drive: DriveSign) -> f64 {
    drive.value() * k - b * k.powi(3)
}

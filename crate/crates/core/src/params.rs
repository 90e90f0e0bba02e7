//! Physical parameters of the fluid pair and the nondimensional groups derived
//! from them.
//!
//! Lengths are scaled by the cell width `W`, speeds by the characteristic
//! speed `U*` and times by `W / U*`. When the driving vanishes (`U* = 0`) the
//! capillary speed `a b² / (12 μ̄ W²)` takes the place of `U*`, which makes the
//! surface-tension group equal to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensional description of a Hele-Shaw cell and the two fluids in it.
///
/// Fluid 1 lies on the right of the interface traversal direction, fluid 2
/// on the left (for a left-to-right interface: fluid 1 below, fluid 2 above).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalParams {
    /// Viscosity of fluid 1 (Pa·s).
    pub mu1: f64,
    /// Viscosity of fluid 2 (Pa·s).
    pub mu2: f64,
    /// Density of fluid 1 (kg/m³).
    pub rho1: f64,
    /// Density of fluid 2 (kg/m³).
    pub rho2: f64,
    /// Plate gap (m).
    pub b: f64,
    /// Gravitational acceleration (m/s²).
    pub g: f64,
    /// Surface-tension coefficient (N/m).
    pub a: f64,
    /// Imposed far-field speed (m/s).
    pub u_inf: f64,
    /// Cell width (m).
    #[serde(rename = "W", alias = "w")]
    pub w: f64,
    /// Latent-heat-like constant of the phase-field model.
    pub ell: f64,
    /// Diffusivity-like constant of the phase-field model.
    #[serde(rename = "K", alias = "k")]
    pub k: f64,
    /// Kinetic coefficient in the Gibbs–Thomson relation.
    pub alpha_kin: f64,
    /// Coupling coefficient of the unscaled phase-field system. `None` keeps
    /// the canonical `2ε` coupling of the scaled system.
    #[serde(default)]
    pub lambda: Option<f64>,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mu1: 1.0,
            mu2: 1.0,
            rho1: 0.0,
            rho2: 0.0,
            b: 1.0,
            g: 0.0,
            a: 12.0,
            u_inf: 0.0,
            w: 1.0,
            ell: 1.0,
            k: 1.0,
            alpha_kin: 1.0,
            lambda: None,
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.mu1,
            self.mu2,
            self.rho1,
            self.rho2,
            self.b,
            self.g,
            self.a,
            self.u_inf,
            self.w,
            self.ell,
            self.k,
            self.alpha_kin,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateParams("non-finite parameter".into()));
        }
        if self.mu1 < 0.0 || self.mu2 < 0.0 {
            return Err(Error::DegenerateParams("negative viscosity".into()));
        }
        if self.mu1 + self.mu2 <= 0.0 {
            return Err(Error::DegenerateParams("mu1 + mu2 must be positive".into()));
        }
        if self.b <= 0.0 {
            return Err(Error::DegenerateParams("gap b must be positive".into()));
        }
        if self.w <= 0.0 {
            return Err(Error::DegenerateParams("width W must be positive".into()));
        }
        if self.k <= 0.0 {
            return Err(Error::DegenerateParams("K must be positive".into()));
        }
        Ok(())
    }

    /// Arithmetic mean viscosity μ̄.
    pub fn mean_viscosity(&self) -> f64 {
        0.5 * (self.mu1 + self.mu2)
    }

    /// Matching constant c₂² = ℓ / K.
    pub fn matching_constant(&self) -> f64 {
        self.ell / self.k
    }

    /// Darcy mobility b² / (12 μ) of fluid `i` (1 or 2).
    pub fn mobility(&self, fluid: u8) -> f64 {
        let mu = if fluid == 1 { self.mu1 } else { self.mu2 };
        self.b * self.b / (12.0 * mu)
    }

    /// The same cell with the fluid labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            mu1: self.mu2,
            mu2: self.mu1,
            rho1: self.rho2,
            rho2: self.rho1,
            ..*self
        }
    }
}

/// Atwood ratio A = (μ₂ − μ₁) / (μ₂ + μ₁).
pub fn compute_atwood(p: &PhysicalParams) -> Result<f64> {
    let sum = p.mu1 + p.mu2;
    if sum == 0.0 || !sum.is_finite() {
        return Err(Error::DegenerateParams("mu1 + mu2 = 0".into()));
    }
    Ok(((p.mu2 - p.mu1) / sum).clamp(-1.0, 1.0))
}

/// Signed driving speed ((μ₂ − μ₁)U∞ + (ρ₂ − ρ₁) g b² / 12) / (μ₂ + μ₁).
pub fn signed_drive_speed(p: &PhysicalParams) -> Result<f64> {
    let sum = p.mu1 + p.mu2;
    if sum == 0.0 || !sum.is_finite() {
        return Err(Error::DegenerateParams("mu1 + mu2 = 0".into()));
    }
    let num = (p.mu2 - p.mu1) * p.u_inf + (p.rho2 - p.rho1) * p.g * p.b * p.b / 12.0;
    Ok(num / sum)
}

/// Characteristic speed U*. Returns [`Error::ZeroSpeed`] when the numerator
/// vanishes.
pub fn characteristic_speed(p: &PhysicalParams) -> Result<f64> {
    let u = signed_drive_speed(p)?.abs();
    if u == 0.0 {
        return Err(Error::ZeroSpeed);
    }
    Ok(u)
}

/// Surface-tension group B = a b² / (12 U* W² μ̄).
pub fn compute_b(p: &PhysicalParams) -> Result<f64> {
    let u_star = characteristic_speed(p)?;
    if p.w <= 0.0 {
        return Err(Error::DegenerateParams("W must be positive".into()));
    }
    Ok(p.a * p.b * p.b / (12.0 * u_star * p.w * p.w * p.mean_viscosity()))
}

/// Capillary speed a b² / (12 μ̄ W²), the velocity scale of undriven runs.
pub fn capillary_speed(p: &PhysicalParams) -> Result<f64> {
    if p.mu1 + p.mu2 <= 0.0 {
        return Err(Error::DegenerateParams("mu1 + mu2 = 0".into()));
    }
    Ok(p.a * p.b * p.b / (12.0 * p.mean_viscosity() * p.w * p.w))
}

/// Sign of the driving term of the sheet-strength relation.
///
/// `Positive` drives the interface in +ĵ. `Off` is used when the cell is not
/// driven at all (`U* = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DriveSign {
    #[default]
    Positive,
    Negative,
    Off,
}

impl DriveSign {
    pub fn value(self) -> f64 {
        match self {
            DriveSign::Positive => 1.0,
            DriveSign::Negative => -1.0,
            DriveSign::Off => 0.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            DriveSign::Positive => DriveSign::Negative,
            DriveSign::Negative => DriveSign::Positive,
            DriveSign::Off => DriveSign::Off,
        }
    }

    pub fn from_value(v: f64) -> Self {
        if v > 0.0 {
            DriveSign::Positive
        } else if v < 0.0 {
            DriveSign::Negative
        } else {
            DriveSign::Off
        }
    }
}

/// Nondimensional groups of the sheet model together with the scales used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetGroups {
    pub atwood: f64,
    pub b: f64,
    pub drive: DriveSign,
    /// Length scale (m).
    pub length_scale: f64,
    /// Speed scale (m/s).
    pub speed_scale: f64,
}

impl SheetGroups {
    /// Time scale W / U* (s).
    pub fn time_scale(&self) -> f64 {
        self.length_scale / self.speed_scale
    }
}

/// Derives A, B and the drive sign. Undriven cells fall back to capillary
/// scaling, which fixes B = 1.
pub fn sheet_groups(p: &PhysicalParams) -> Result<SheetGroups> {
    p.validate()?;
    let atwood = compute_atwood(p)?;
    let drive = signed_drive_speed(p)?;
    if drive != 0.0 {
        return Ok(SheetGroups {
            atwood,
            b: compute_b(p)?,
            drive: DriveSign::from_value(drive),
            length_scale: p.w,
            speed_scale: drive.abs(),
        });
    }
    let cap = capillary_speed(p)?;
    if cap <= 0.0 {
        return Err(Error::ZeroSpeed);
    }
    Ok(SheetGroups {
        atwood,
        b: 1.0,
        drive: DriveSign::Off,
        length_scale: p.w,
        speed_scale: cap,
    })
}

/// Coefficient of ĵ·ŝ in the dimensional strength relation divided by U*.
/// Always ±2 for driven cells; used as a cross-check on the nondimensional
/// drive term.
pub fn dimensional_drive_coefficient(p: &PhysicalParams) -> Result<f64> {
    let sum = p.mu1 + p.mu2;
    let u_star = characteristic_speed(p)?;
    let mu_bar = p.mean_viscosity();
    let dmu = p.mu2 - p.mu1;
    let drho = p.rho2 - p.rho1;
    // (Δμ/μ̄) U∞ + Δρ g b² / (12 μ̄), with μ̄ the mean: equals 2 × signed drive speed.
    let coeff = dmu / mu_bar * p.u_inf + drho * p.g * p.b * p.b / (12.0 * mu_bar);
    debug_assert!(sum > 0.0);
    Ok(coeff / u_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> PhysicalParams {
        PhysicalParams::default()
    }

    #[test]
    fn atwood_examples() {
        let mut p = base();
        assert_eq!(compute_atwood(&p).unwrap(), 0.0);
        p.mu1 = 0.0;
        p.mu2 = 3.0;
        assert_eq!(compute_atwood(&p).unwrap(), 1.0);
        p.mu1 = 1.0;
        assert_eq!(compute_atwood(&p).unwrap(), 0.5);
        p.mu1 = 0.0;
        p.mu2 = 0.0;
        assert!(matches!(compute_atwood(&p), Err(Error::DegenerateParams(_))));
    }

    #[test]
    fn characteristic_speed_examples() {
        let p = base();
        assert_eq!(characteristic_speed(&p), Err(Error::ZeroSpeed));

        let p = PhysicalParams {
            mu1: 1.0,
            mu2: 3.0,
            u_inf: 2.0,
            ..base()
        };
        assert_eq!(characteristic_speed(&p).unwrap(), 1.0);

        let p = PhysicalParams {
            rho1: 0.0,
            rho2: 12.0,
            g: 1.0,
            b: 1.0,
            ..base()
        };
        assert!((characteristic_speed(&p).unwrap() - 0.5).abs() < 1e-15);
    }

    fn unit_speed() -> PhysicalParams {
        // U* = |2·2/4| = 1, μ̄ = 2. Scale a so that B reads as a b²/(12 W²).
        PhysicalParams {
            mu1: 1.0,
            mu2: 3.0,
            u_inf: 2.0,
            ..base()
        }
    }

    #[test]
    fn b_examples() {
        let p = PhysicalParams { a: 0.0, ..unit_speed() };
        assert_eq!(compute_b(&p).unwrap(), 0.0);

        // U* = 1 and μ̄ = 1: equal viscosities driven by buoyancy.
        let p = PhysicalParams {
            a: 12.0,
            b: 1.0,
            w: 1.0,
            rho2: 24.0,
            g: 1.0,
            ..base()
        };
        assert_eq!(characteristic_speed(&p).unwrap(), 1.0);
        assert_eq!(compute_b(&p).unwrap(), 1.0);

        let wide = PhysicalParams { w: 2.0, ..p };
        assert_eq!(compute_b(&wide).unwrap(), 0.25);

        assert_eq!(compute_b(&base()), Err(Error::ZeroSpeed));
    }

    #[test]
    fn atwood_antisymmetric_under_swap() {
        let p = PhysicalParams {
            mu1: 0.3,
            mu2: 1.7,
            ..base()
        };
        let a = compute_atwood(&p).unwrap();
        let b = compute_atwood(&p.swapped()).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn drive_coefficient_is_two() {
        let p = PhysicalParams {
            mu1: 1.0,
            mu2: 3.0,
            u_inf: 2.0,
            rho2: 5.0,
            g: 9.81,
            b: 0.1,
            ..base()
        };
        let c = dimensional_drive_coefficient(&p).unwrap();
        assert!((c.abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn undriven_cell_uses_capillary_scaling() {
        let g = sheet_groups(&base()).unwrap();
        assert_eq!(g.drive, DriveSign::Off);
        assert_eq!(g.b, 1.0);
        assert!((g.speed_scale - 1.0).abs() < 1e-15);
    }
}

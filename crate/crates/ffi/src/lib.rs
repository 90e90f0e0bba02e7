//! C ABI over the hele-shaw solvers.
//!
//! Handles are opaque pointers created by `*_new` and released by `*_free`.
//! Every fallible call returns an [`HsStatus`]; the message of the last
//! failure on the calling thread is available from [`hs_last_error`].
//! Arrays cross the boundary as caller-owned buffers with an explicit
//! capacity; interleaved point arrays are `x0, y0, x1, y1, ...`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hele_shaw::asymptotics::{linear_growth_oracle, solve_profile_ode};
use hele_shaw::field::{BoundaryY, ScalarField2D};
use hele_shaw::geometry::{InterfaceCurve, Topology, Vec2};
use hele_shaw::harness::{run, RunConfig};
use hele_shaw::params::{DriveSign, PhysicalParams};
use hele_shaw::phase_field::{PhaseFieldState, PhaseFieldStepper};
use hele_shaw::vortex_sheet::{advance_interface, solve_sheet_strength, SheetOptions, SheetState};
use hele_shaw::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    ConfigInvalid = 3,
    DegenerateParams = 4,
    DegenerateCurve = 5,
    NoInterface = 6,
    NoConvergence = 7,
    UnstableStep = 8,
    SelfIntersection = 9,
    BufferTooSmall = 10,
    Io = 11,
    Other = 12,
    Panic = 13,
}

/// Drive sign of a sheet: +1, -1 or 0 for an undriven cell.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsDrive {
    Negative = -1,
    Off = 0,
    Positive = 1,
}

impl From<HsDrive> for DriveSign {
    fn from(d: HsDrive) -> Self {
        match d {
            HsDrive::Negative => DriveSign::Negative,
            HsDrive::Off => DriveSign::Off,
            HsDrive::Positive => DriveSign::Positive,
        }
    }
}

/// Which field of a phase-field state to read or write.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsField {
    Phi = 0,
    U = 1,
}

/// Opaque vortex-sheet handle.
pub struct HsSheet {
    state: SheetState,
    options: SheetOptions,
}

/// Opaque phase-field handle.
pub struct HsPhaseField {
    state: PhaseFieldState,
    stepper: PhaseFieldStepper,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HsStatus {
    match e {
        Error::InvalidInput(_) | Error::InsufficientData(_) | Error::CoincidentMarkers(..) => HsStatus::InvalidInput,
        Error::ConfigInvalid { .. } => HsStatus::ConfigInvalid,
        Error::DegenerateParams(_) | Error::ZeroSpeed => HsStatus::DegenerateParams,
        Error::DegenerateCurve(_) | Error::UnsupportedTopology(_) => HsStatus::DegenerateCurve,
        Error::NoInterface => HsStatus::NoInterface,
        Error::NoConvergence { .. } => HsStatus::NoConvergence,
        Error::UnstableStep { .. } => HsStatus::UnstableStep,
        Error::SelfIntersection(..) => HsStatus::SelfIntersection,
        Error::Io(_) | Error::MissingArtifact(_) | Error::MalformedCsv { .. } => HsStatus::Io,
        Error::MismatchedInitialCondition { .. } => HsStatus::Other,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), HsStatusError>) -> HsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsStatus::Ok,
        Ok(Err(e)) => {
            set_error(&e.message);
            e.status
        }
        Err(_) => {
            set_error("panic inside hele-shaw");
            HsStatus::Panic
        }
    }
}

struct HsStatusError {
    status: HsStatus,
    message: String,
}

impl From<Error> for HsStatusError {
    fn from(e: Error) -> Self {
        Self { status: status_of(&e), message: e.to_string() }
    }
}

fn fail(status: HsStatus, message: &str) -> HsStatusError {
    HsStatusError { status, message: message.to_string() }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), HsStatusError> {
    if p.is_null() {
        Err(fail(HsStatus::NullPointer, &format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `out` must be valid for `cap` writes when `need <= cap`.
unsafe fn copy_out(src: &[f64], out: *mut f64, cap: usize) -> Result<(), HsStatusError> {
    if src.len() > cap {
        return Err(fail(
            HsStatus::BufferTooSmall,
            &format!("buffer holds {cap} values, need {}", src.len()),
        ));
    }
    non_null(out, "output buffer")?;
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Message of the last failed call on this thread, empty when none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a sheet from `n` interleaved marker positions. `closed` nonzero
/// makes a closed curve; otherwise the curve is periodic in x with `period`.
///
/// # Safety
/// `xy` must point to `2 n` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_new(
    xy: *const f64,
    n: usize,
    closed: c_int,
    period: f64,
    atwood: f64,
    b: f64,
    drive: HsDrive,
    blob_delta: f64,
    out: *mut *mut HsSheet,
) -> HsStatus {
    guard(|| {
        non_null(xy, "xy")?;
        non_null(out, "out")?;
        let raw = std::slice::from_raw_parts(xy, 2 * n);
        let pts = raw.chunks_exact(2).map(|c| Vec2::new(c[0], c[1])).collect();
        let topology = if closed != 0 { Topology::Closed } else { Topology::Periodic { period } };
        let curve = InterfaceCurve::new(pts, topology)?;
        let options = SheetOptions::default();
        let s = SheetState::new(curve, atwood, b, drive.into(), blob_delta)?;
        let state = solve_sheet_strength(&s, &options)?.state;
        *out = Box::into_raw(Box::new(HsSheet { state, options }));
        Ok(())
    })
}

/// # Safety
/// `sheet` must come from [`hs_sheet_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_free(sheet: *mut HsSheet) {
    if !sheet.is_null() {
        drop(Box::from_raw(sheet));
    }
}

/// Advances the sheet by `steps` steps of size `dt`.
///
/// # Safety
/// `sheet` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_step(sheet: *mut HsSheet, dt: f64, steps: usize) -> HsStatus {
    guard(|| {
        non_null(sheet, "sheet")?;
        let h = &mut *sheet;
        let mut s = h.state.clone();
        for _ in 0..steps {
            s = advance_interface(&s, dt, &h.options)?;
        }
        h.state = s;
        Ok(())
    })
}

/// Number of markers; redistribution may change it between steps.
///
/// # Safety
/// `sheet` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_len(sheet: *const HsSheet) -> usize {
    sheet.as_ref().map_or(0, |h| h.state.curve.len())
}

/// # Safety
/// `sheet` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_time(sheet: *const HsSheet) -> f64 {
    sheet.as_ref().map_or(f64::NAN, |h| h.state.t)
}

/// Copies interleaved marker positions into `out` (capacity `cap` doubles).
///
/// # Safety
/// `sheet` must be a live handle, `out` valid for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_markers(sheet: *const HsSheet, out: *mut f64, cap: usize) -> HsStatus {
    guard(|| {
        non_null(sheet, "sheet")?;
        let xy: Vec<f64> = (*sheet).state.curve.markers().iter().flat_map(|p| [p.x, p.y]).collect();
        copy_out(&xy, out, cap)
    })
}

/// Copies the sheet strength γ per marker into `out`.
///
/// # Safety
/// `sheet` must be a live handle, `out` valid for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn hs_sheet_gamma(sheet: *const HsSheet, out: *mut f64, cap: usize) -> HsStatus {
    guard(|| {
        non_null(sheet, "sheet")?;
        copy_out(&(*sheet).state.gamma, out, cap)
    })
}

/// Creates a phase-field state on an `nx × ny` grid. `phi` and `u` hold
/// `nx·ny` values in row-major order (x fastest); a null `u` starts from
/// zero. `c2sq` is the matching constant ℓ/K and `alpha` the kinetic
/// coefficient.
///
/// # Safety
/// `phi` (and `u` when non-null) must point to `nx·ny` doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_new(
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    periodic_y: c_int,
    eps: f64,
    c2sq: f64,
    alpha: f64,
    phi: *const f64,
    u: *const f64,
    out: *mut *mut HsPhaseField,
) -> HsStatus {
    guard(|| {
        non_null(phi, "phi")?;
        non_null(out, "out")?;
        let bc = if periodic_y != 0 { BoundaryY::Periodic } else { BoundaryY::Fixed };
        let grid = ScalarField2D::new(nx, ny, lx, ly, bc)?;
        let len = nx * ny;
        let phi = grid.with_values(std::slice::from_raw_parts(phi, len).to_vec())?;
        let u = if u.is_null() {
            grid.clone()
        } else {
            grid.with_values(std::slice::from_raw_parts(u, len).to_vec())?
        };
        let params = PhysicalParams { ell: c2sq, k: 1.0, alpha_kin: alpha, ..PhysicalParams::default() };
        let state = PhaseFieldState::new(u, phi, eps, c2sq)?;
        let stepper = PhaseFieldStepper::new(&state, &params)?;
        *out = Box::into_raw(Box::new(HsPhaseField { state, stepper }));
        Ok(())
    })
}

/// # Safety
/// `pf` must come from [`hs_phase_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_free(pf: *mut HsPhaseField) {
    if !pf.is_null() {
        drop(Box::from_raw(pf));
    }
}

/// Largest stable step of the handle's model.
///
/// # Safety
/// `pf` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_stability_bound(pf: *const HsPhaseField) -> f64 {
    pf.as_ref().map_or(f64::NAN, |h| h.stepper.model().stability_bound())
}

/// # Safety
/// `pf` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_step(pf: *mut HsPhaseField, dt: f64, steps: usize) -> HsStatus {
    guard(|| {
        non_null(pf, "phase field")?;
        let h = &mut *pf;
        h.state = h.stepper.run(&h.state, dt, steps)?;
        Ok(())
    })
}

/// # Safety
/// `pf` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_time(pf: *const HsPhaseField) -> f64 {
    pf.as_ref().map_or(f64::NAN, |h| h.state.t)
}

/// The conserved integral of εu + (c₂²/2)φ.
///
/// # Safety
/// `pf` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_conserved(pf: *const HsPhaseField) -> f64 {
    pf.as_ref().map_or(f64::NAN, |h| h.state.conserved_quantity())
}

/// Copies φ or u into `out`.
///
/// # Safety
/// `pf` must be a live handle, `out` valid for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn hs_phase_field_get(
    pf: *const HsPhaseField,
    which: HsField,
    out: *mut f64,
    cap: usize,
) -> HsStatus {
    guard(|| {
        non_null(pf, "phase field")?;
        let s = &(*pf).state;
        let f = match which {
            HsField::Phi => &s.phi,
            HsField::U => &s.u,
        };
        copy_out(f.values(), out, cap)
    })
}

/// Surface-tension integral of the inner profile solved with `n` steps per
/// half-width.
///
/// # Safety
/// `sigma` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_surface_tension(half_width: f64, n: usize, sigma: *mut f64) -> HsStatus {
    guard(|| {
        non_null(sigma, "sigma")?;
        *sigma = solve_profile_ode(half_width, n)?.sigma;
        Ok(())
    })
}

/// Linearized growth rate of mode `k` of a flat sheet traversed left to
/// right (fluid 1 below).
///
/// # Safety
/// `rate` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_linear_growth_rate(k: f64, atwood: f64, b: f64, drive: HsDrive, rate: *mut f64) -> HsStatus {
    guard(|| {
        non_null(rate, "rate")?;
        *rate = linear_growth_oracle(k, atwood, b, drive.into())?;
        Ok(())
    })
}

/// Runs a TOML configuration. On success `*passed` is 1 when every run check
/// passed and 0 otherwise.
///
/// # Safety
/// `toml` must be a NUL-terminated UTF-8 string, `passed` writable or null.
#[no_mangle]
pub unsafe extern "C" fn hs_run_config(toml: *const c_char, passed: *mut c_int) -> HsStatus {
    guard(|| {
        non_null(toml, "toml")?;
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|_| fail(HsStatus::InvalidInput, "config is not UTF-8"))?;
        let cfg = RunConfig::from_toml_str(text)?;
        let summary = run(&cfg)?;
        if !passed.is_null() {
            *passed = summary.all_passed() as c_int;
        }
        Ok(())
    })
}

use std::ffi::{CStr, CString};
use std::f64::consts::PI;
use std::ptr;

use hele_shaw_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hs_last_error()) }.to_string_lossy().into_owned()
}

fn circle(n: usize, r: f64) -> Vec<f64> {
    (0..n)
        .flat_map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

#[test]
fn sheet_round_trip() {
    let xy = circle(32, 0.5);
    let mut h = ptr::null_mut();
    let st = unsafe { hs_sheet_new(xy.as_ptr(), 32, 1, 0.0, 0.0, 1.0, HsDrive::Off, 0.0, &mut h) };
    assert_eq!(st, HsStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { hs_sheet_len(h) }, 32);
    let mut out = vec![0.0; 64];
    assert_eq!(unsafe { hs_sheet_markers(h, out.as_mut_ptr(), out.len()) }, HsStatus::Ok);
    assert_eq!(out, xy);
    assert_eq!(unsafe { hs_sheet_step(h, 1e-4, 3) }, HsStatus::Ok, "{}", last_error());
    assert!((unsafe { hs_sheet_time(h) } - 3e-4).abs() < 1e-15);
    let mut gamma = vec![0.0; 32];
    assert_eq!(unsafe { hs_sheet_gamma(h, gamma.as_mut_ptr(), 32) }, HsStatus::Ok);
    // a circle with A = 0 carries no strength
    assert!(gamma.iter().all(|g| g.abs() < 1e-8));
    unsafe { hs_sheet_free(h) };
}

#[test]
fn errors_are_reported() {
    let xy = circle(4, 0.5);
    let mut h = ptr::null_mut();
    let st = unsafe { hs_sheet_new(xy.as_ptr(), 4, 1, 0.0, 0.0, 1.0, HsDrive::Off, 0.0, &mut h) };
    assert_eq!(st, HsStatus::InvalidInput);
    assert!(h.is_null());
    assert!(last_error().contains("8 markers"));

    let st = unsafe { hs_sheet_new(ptr::null(), 8, 1, 0.0, 0.0, 1.0, HsDrive::Off, 0.0, &mut h) };
    assert_eq!(st, HsStatus::NullPointer);

    let xy = circle(8, 0.5);
    let st = unsafe { hs_sheet_new(xy.as_ptr(), 8, 1, 0.0, 1.5, 1.0, HsDrive::Off, 0.0, &mut h) };
    assert_eq!(st, HsStatus::InvalidInput);

    let st = unsafe { hs_sheet_new(xy.as_ptr(), 8, 1, 0.0, 0.0, 1.0, HsDrive::Off, 0.0, &mut h) };
    assert_eq!(st, HsStatus::Ok);
    let mut small = vec![0.0; 3];
    assert_eq!(unsafe { hs_sheet_markers(h, small.as_mut_ptr(), 3) }, HsStatus::BufferTooSmall);
    unsafe { hs_sheet_free(h) };
    unsafe { hs_sheet_free(ptr::null_mut()) };
}

#[test]
fn phase_field_keeps_uniform_states() {
    let (nx, ny) = (16, 16);
    let phi = vec![1.0; nx * ny];
    let mut h = ptr::null_mut();
    let st = unsafe { hs_phase_field_new(nx, ny, 1.0, 1.0, 1, 0.05, 1.0, 1.0, phi.as_ptr(), ptr::null(), &mut h) };
    assert_eq!(st, HsStatus::Ok, "{}", last_error());
    let dt = 0.5 * unsafe { hs_phase_field_stability_bound(h) };
    let q0 = unsafe { hs_phase_field_conserved(h) };
    assert_eq!(unsafe { hs_phase_field_step(h, dt, 10) }, HsStatus::Ok);
    let mut out = vec![0.0; nx * ny];
    assert_eq!(unsafe { hs_phase_field_get(h, HsField::Phi, out.as_mut_ptr(), out.len()) }, HsStatus::Ok);
    assert!(out.iter().all(|v| (v - 1.0).abs() < 1e-14));
    assert!((unsafe { hs_phase_field_conserved(h) } - q0).abs() < 1e-12);
    assert_eq!(unsafe { hs_phase_field_step(h, -1.0, 1) }, HsStatus::InvalidInput);
    unsafe { hs_phase_field_free(h) };
}

#[test]
fn oracles() {
    let mut sigma = 0.0;
    assert_eq!(unsafe { hs_surface_tension(30.0, 1024, &mut sigma) }, HsStatus::Ok);
    assert!((sigma - 2.0 / 3.0).abs() < 1e-8);
    let mut rate = 0.0;
    assert_eq!(unsafe { hs_linear_growth_rate(2.0 * PI, 0.0, 1.0, HsDrive::Off, &mut rate) }, HsStatus::Ok);
    assert!(rate < 0.0);
    let v = unsafe { CStr::from_ptr(hs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn run_config_reports_status() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "schema_version = 1\nmethod = \"verify-asymptotics\"\n[output]\ndir = {:?}\nfigures = false\n",
        dir.path().display().to_string()
    );
    let c = CString::new(text).unwrap();
    let mut passed = -1;
    assert_eq!(unsafe { hs_run_config(c.as_ptr(), &mut passed) }, HsStatus::Ok, "{}", last_error());
    assert_eq!(passed, 1);
    assert!(dir.path().join("manifest.txt").is_file());

    let bad = CString::new("schema_version = 1\nmethod = \"nope\"\n").unwrap();
    assert_eq!(unsafe { hs_run_config(bad.as_ptr(), ptr::null_mut()) }, HsStatus::ConfigInvalid);
    assert!(last_error().contains("method"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hele_shaw.h")).unwrap();
    for name in [
        "hs_last_error",
        "hs_sheet_new",
        "hs_sheet_free",
        "hs_phase_field_new",
        "hs_phase_field_get",
        "hs_run_config",
        "typedef struct HsSheet HsSheet",
        "HS_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(header.contains(name), "{name}");
    }
    // the header must at least parse as C when a compiler is around
    if let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-"])
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.take().unwrap().write_all(b"#include \"hele_shaw.h\"\nint main(void){return hs_version()==0;}\n")?;
            child.wait_with_output()
        })
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}

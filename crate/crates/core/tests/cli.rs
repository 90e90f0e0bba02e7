use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hele-shaw"))
        .args(args)
        .env("HELE_SHAW_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, format!("schema_version = 1\n{body}")).unwrap();
    path.display().to_string()
}

fn sheet_config(dir: &Path) -> String {
    write_config(
        dir,
        r#"method = "vortex-sheet"
seed = 7
[physical]
mu1 = 1.0
mu2 = 3.0
u_inf = -1.0
[numerics]
markers = 32
steps = 40
[initial]
noise = 1e-3
[output]
figures = false
"#,
    )
}

fn same_outputs(a: &Path, b: &Path, names: &[&str]) {
    for name in names {
        let x = fs::read(a.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let y = fs::read(b.join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn sheet_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sheet_config(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = cli(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    same_outputs(&a, &b, &["sheet_initial.csv", "sheet_final.csv", "trajectory.csv", "report.txt"]);

    // a different seed changes the perturbed start
    let c = dir.path().join("c");
    let o = cli(&["run", "--config", &cfg, "--out", c.to_str().unwrap(), "--seed", "8", "--quiet"]);
    assert!(o.status.success());
    assert_ne!(fs::read(a.join("sheet_initial.csv")).unwrap(), fs::read(c.join("sheet_initial.csv")).unwrap());
}

#[test]
fn verify_is_reproducible_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = cli(&["verify", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(text.contains("sigma: pass"), "{text}");
    }
    same_outputs(&a, &b, &["sigma.csv", "dispersion.csv", "checks.txt"]);
    let manifest = fs::read_to_string(a.join("manifest.txt")).unwrap();
    assert!(manifest.contains("sigma.csv") && manifest.contains("config_sha256"));
}

#[test]
fn failed_check_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "method = \"verify-asymptotics\"\n[numerics]\nsigma_tol = 1e-30\nprofile_steps = [64, 128]\n");
    let o = cli(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bad_input_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "method = \"phase-field\"\n[numerics]\neps = -1.0\n");
    let o = cli(&["run", "--config", &cfg, "--quiet"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eps"));

    let o = cli(&["plot", "--kind", "interface-overlay", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let o = cli(&["plot", "--kind", "pie-chart", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));

    let o = cli(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    fs::write(&csv, "x,y\n0,0.5\n0.5,0.52\n1,0.5\n").unwrap();
    let o = cli(&["plot", "--kind", "interface-overlay", "--out", dir.path().to_str().unwrap(), "--quiet", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(dir.path().join("interface-overlay.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.contains("polyline"));
}

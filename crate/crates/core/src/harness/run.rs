//! Orchestration of a configured run and the artifacts it leaves on disk.
//!
//! Every run directory holds the resolved `config.toml`, method-specific CSV
//! and snapshot files, a `report.txt` of `key = value` lines, optional SVG
//! figures and a `manifest.txt` listing each file with its SHA-256. Wall
//! times go to `timings.txt` so that every other file is reproducible byte
//! for byte.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::compare::{compare_methods, mode_rates, phase_field_schedule, run_sheet};
use super::config::{Method, RunConfig};
use super::figure::{emit_figure, FigureKind};
use super::setup::{initial_phase_field, initial_sheet};
use super::studies::matching_runs;
use crate::asymptotics::{continuum_growth_rate, linear_growth_oracle_with, solve_profile_ode, DispersionConfig, EXACT_SIGMA};
use crate::error::{Error, Result};
use crate::geometry::InterfaceCurve;
use crate::params::sheet_groups;
use crate::phase_field::{extract_interface, measure_sharp_interface, write_snapshot, PhaseFieldStepper};
use crate::vortex_sheet::{SheetState, TrajectoryWriter};

/// Outcome of one named check of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    /// Files written, relative to `out_dir`, manifest excluded.
    pub files: Vec<String>,
    pub checks: Vec<Check>,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

/// Output directory that remembers what was written into it.
struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        self.dir.join(name)
    }

    fn text(&mut self, name: &str, content: &str) -> Result<()> {
        let p = self.path(name);
        std::fs::write(p, content)?;
        Ok(())
    }

    fn report(&mut self, name: &str, entries: &[(&str, String)]) -> Result<()> {
        let mut out = String::new();
        for (k, v) in entries {
            out.push_str(&format!("{k} = {v}\n"));
        }
        self.text(name, &out)
    }

    fn curve(&mut self, name: &str, c: &InterfaceCurve) -> Result<()> {
        let mut out = String::from("x,y\n");
        for p in c.markers() {
            out.push_str(&format!("{:?},{:?}\n", p.x, p.y));
        }
        self.text(name, &out)
    }

    fn figure(&mut self, name: &str, inputs: &[&str], kind: FigureKind) -> Result<()> {
        let paths: Vec<PathBuf> = inputs.iter().map(|i| self.dir.join(i)).collect();
        let out = self.path(name);
        emit_figure(&paths, kind, &out)
    }

    fn manifest(&self, config_text: &str) -> Result<()> {
        let mut names = self.files.clone();
        names.sort();
        let mut out = String::new();
        out.push_str(&format!("config_sha256 = {}\n", sha256_hex(config_text.as_bytes())));
        out.push_str(&format!("version = {} {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("files = {}\n", names.len()));
        for n in &names {
            let bytes = std::fs::read(self.dir.join(n))?;
            out.push_str(&format!("{}  {n}\n", sha256_hex(&bytes)));
        }
        std::fs::write(self.dir.join("manifest.txt"), out)?;
        Ok(())
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

fn fmt(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt(*x)).collect::<Vec<_>>().join(", ")
}

/// Validates `cfg`, runs its method and writes artifacts to
/// `cfg.output.dir`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let mut art = Artifacts::create(&cfg.output.dir)?;
    let config_text = cfg.to_toml_string();
    art.text("config.toml", &config_text)?;
    let checks = match cfg.method {
        Method::PhaseField => phase_field_run(cfg, &mut art)?,
        Method::VortexSheet => sheet_run(cfg, &mut art)?,
        Method::Compare => compare_run(cfg, &mut art)?,
        Method::VerifyAsymptotics => verify_run(cfg, &mut art)?,
    };
    let mut lines = String::new();
    for c in &checks {
        lines.push_str(&format!(
            "{} = {} ({})\n",
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.detail
        ));
    }
    art.text("checks.txt", &lines)?;
    art.manifest(&config_text)?;
    Ok(RunSummary { out_dir: art.dir.clone(), files: art.files.clone(), checks })
}

fn phase_field_run(cfg: &RunConfig, art: &mut Artifacts) -> Result<Vec<Check>> {
    let n = &cfg.numerics;
    let o = &cfg.output;
    let eps = n.eps;
    let mut s = initial_phase_field(cfg, eps)?;
    let stepper = PhaseFieldStepper::new(&s, &cfg.physical)?;
    let (dt, steps) = phase_field_schedule(cfg, &stepper, n.t_end);
    let q0 = s.conserved_quantity();
    let has_interface = match extract_interface(&s.phi) {
        Ok(e) => {
            art.curve("interface_initial.csv", &e.curve)?;
            true
        }
        Err(Error::NoInterface) => false,
        Err(e) => return Err(e),
    };
    let snap = |art: &mut Artifacts, s: &crate::phase_field::PhaseFieldState, tag: &str| -> Result<()> {
        write_snapshot(&art.path(&format!("phi_{tag}.hsf")), &s.phi, "phi", s.t, eps)?;
        write_snapshot(&art.path(&format!("u_{tag}.hsf")), &s.u, "u", s.t, eps)
    };
    let lag = (steps / 20).max(1);
    let mut prev = (steps <= lag).then(|| s.clone());
    let mut max_drift: f64 = 0.0;
    for step in 1..=steps {
        let q = s.conserved_quantity();
        s = stepper
            .step(&s, dt)
            .map_err(|e| match e {
                Error::InvalidInput(m) => Error::InvalidInput(format!("phase-field step {step}: {m}")),
                other => other,
            })?;
        max_drift = max_drift.max((s.conserved_quantity() - q).abs());
        if step + lag == steps {
            prev = Some(s.clone());
        }
        if o.snapshots && o.snapshot_every > 0 && step % o.snapshot_every == 0 && step != steps {
            snap(art, &s, &format!("{step:06}"))?;
        }
    }
    if o.snapshots {
        snap(art, &s, "final")?;
    }
    let mut entries = vec![
        ("method", "phase-field".to_string()),
        ("eps", fmt(eps)),
        ("dt", fmt(dt)),
        ("steps", steps.to_string()),
        ("t_final", fmt(s.t)),
        ("c2sq", fmt(cfg.c2sq())),
        ("conserved_initial", fmt(q0)),
        ("conserved_final", fmt(s.conserved_quantity())),
        ("conserved_max_step_drift", fmt(max_drift)),
        ("max_abs_phi", fmt(s.phi.max_abs())),
    ];
    if has_interface {
        let e = extract_interface(&s.phi)?;
        art.curve("interface_final.csv", &e.curve)?;
        entries.push(("interface_points", e.curve.len().to_string()));
        if let Some(prev) = &prev {
            match measure_sharp_interface(&s, &cfg.physical, prev) {
                Ok(r) => {
                    entries.push(("gibbs_thomson_residual", fmt(r.gibbs_thomson_residual)));
                    entries.push(("flux_jump_residual", fmt(r.flux_jump_residual)));
                    entries.push(("harmonicity_residual", fmt(r.harmonicity_residual)));
                    entries.push(("mean_normal_velocity", fmt(r.mean_normal_velocity())));
                }
                Err(Error::NoInterface) => {}
                Err(e) => return Err(e),
            }
        }
    }
    art.report("report.txt", &entries)?;
    if o.figures {
        if has_interface {
            art.figure(
                "interface.svg",
                &["interface_initial.csv", "interface_final.csv"],
                FigureKind::InterfaceOverlay,
            )?;
        }
        if o.snapshots {
            art.figure("phi_final.svg", &["phi_final.hsf"], FigureKind::FieldHeatmap)?;
            art.figure("u_final.svg", &["u_final.hsf"], FigureKind::FieldHeatmap)?;
        }
    }
    Ok(Vec::new())
}

fn sheet_run(cfg: &RunConfig, art: &mut Artifacts) -> Result<Vec<Check>> {
    let n = &cfg.numerics;
    let every = cfg.output.trajectory_every;
    let s0 = initial_sheet(cfg)?;
    art.curve("sheet_initial.csv", &s0.curve)?;
    let mut writer = TrajectoryWriter::create(&art.path("trajectory.csv"))?;
    let mut last_written = None;
    let mut last_step = 0;
    let mut first: Option<SheetState> = None;
    let s = run_sheet(cfg, n.t_end, |step, s| {
        if first.is_none() {
            first = Some(s.clone());
        }
        last_step = step;
        if step % every == 0 {
            writer.record(step, s)?;
            last_written = Some(step);
        }
        Ok(())
    })?;
    if last_written != Some(last_step) {
        writer.record(last_step, &s)?;
    }
    writer.finish()?;
    art.curve("sheet_final.csv", &s.curve)?;
    let first = first.expect("initial state observed");
    let displacement = if first.curve.len() == s.curve.len() {
        first
            .curve
            .markers()
            .iter()
            .zip(s.curve.markers())
            .fold(0.0f64, |m, (a, b)| m.max(a.distance(*b)))
    } else {
        f64::NAN
    };
    let mut entries = vec![
        ("method", "vortex-sheet".to_string()),
        ("atwood", fmt(s.atwood)),
        ("b", fmt(s.b)),
        ("drive", fmt(s.drive.value())),
        ("steps", last_step.to_string()),
        ("t_final", fmt(s.t)),
        ("markers_initial", first.curve.len().to_string()),
        ("markers_final", s.curve.len().to_string()),
        ("max_marker_displacement", fmt(displacement)),
        ("total_circulation", fmt(s.total_circulation())),
    ];
    if s.curve.is_closed() {
        entries.push(("area_initial", fmt(first.curve.area())));
        entries.push(("area_final", fmt(s.curve.area())));
    }
    art.report("report.txt", &entries)?;
    if cfg.output.figures {
        art.figure(
            "interface.svg",
            &["sheet_initial.csv", "sheet_final.csv"],
            FigureKind::InterfaceOverlay,
        )?;
    }
    Ok(Vec::new())
}

fn compare_run(cfg: &RunConfig, art: &mut Artifacts) -> Result<Vec<Check>> {
    let out = compare_methods(cfg)?;
    let r = &out.report;
    let (r_sheet, r_pf) = mode_rates(cfg)?;
    let mut csv = String::from("eps,hausdorff,initial_distance\n");
    for i in 0..r.eps_values.len() {
        csv.push_str(&format!(
            "{:?},{:?},{:?}\n",
            r.eps_values[i], r.hausdorff_distances[i], r.initial_distances[i]
        ));
    }
    art.text("comparison.csv", &csv)?;
    art.curve("sheet_initial.csv", &out.sheet_initial)?;
    art.curve("sheet_final.csv", &out.sheet_final)?;
    let mut names = vec!["sheet_final.csv".to_string()];
    for (i, c) in out.phase_field_curves.iter().enumerate() {
        let name = format!("interface_eps{i}.csv");
        art.curve(&name, c)?;
        names.push(name);
    }
    art.report(
        "report.txt",
        &[
            ("method", "compare".to_string()),
            ("eps_values", fmt_list(&r.eps_values)),
            ("hausdorff_distances", fmt_list(&r.hausdorff_distances)),
            ("monotone_flag", r.monotone_flag.to_string()),
            ("t_phase_field", fmt(r.t_phase_field)),
            ("t_sheet", fmt(r.t_sheet)),
            ("clock_factor", fmt(r.clock_factor)),
            ("sheet_mode_rate", fmt(r_sheet)),
            ("phase_field_mode_rate", fmt(r_pf)),
        ],
    )?;
    art.report(
        "timings.txt",
        &[
            ("phase_field_runtimes_s", fmt_list(&r.runtimes)),
            ("sheet_runtime_s", fmt(r.sheet_runtime)),
        ],
    )?;
    if cfg.output.figures {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        art.figure("comparison.svg", &refs, FigureKind::InterfaceOverlay)?;
    }
    Ok(vec![check(
        "hausdorff_trend",
        r.monotone_flag,
        format!("distances [{}]", fmt_list(&r.hausdorff_distances)),
    )])
}

fn verify_run(cfg: &RunConfig, art: &mut Artifacts) -> Result<Vec<Check>> {
    let n = &cfg.numerics;
    let mut checks = Vec::new();

    let mut csv = String::from("steps,h,sigma,abs_error,profile_linf\n");
    let mut errors = Vec::new();
    let mut finest = None;
    for &steps in &n.profile_steps {
        let p = solve_profile_ode(n.profile_half_width, steps)?;
        let err = (p.sigma - EXACT_SIGMA).abs();
        let linf = p
            .rho_samples
            .iter()
            .zip(&p.phi_samples)
            .fold(0.0f64, |m, (r, f)| m.max((f - (0.5 * r).tanh()).abs()));
        csv.push_str(&format!("{steps},{:?},{:?},{:?},{:?}\n", p.step(), p.sigma, err, linf));
        errors.push(err);
        finest = Some((p.sigma, err, linf));
    }
    art.text("sigma.csv", &csv)?;
    let mut entries = vec![("method", "verify-asymptotics".to_string())];
    if let Some((sigma, err, linf)) = finest {
        entries.push(("sigma", fmt(sigma)));
        entries.push(("sigma_error", fmt(err)));
        entries.push(("profile_linf", fmt(linf)));
        checks.push(check(
            "sigma",
            err <= n.sigma_tol,
            format!("sigma {sigma:.12} vs 2/3, tolerance {:e}", n.sigma_tol),
        ));
        // refinement stops paying once the error reaches round-off
        let floor = 1e-13;
        let decreasing = errors.windows(2).all(|w| w[1] < w[0] || w[0] < floor);
        checks.push(check(
            "sigma_refinement",
            decreasing,
            format!("errors [{}]", fmt_list(&errors)),
        ));
    }

    let groups = sheet_groups(&cfg.physical)?;
    let dcfg = DispersionConfig {
        markers: n.markers,
        period: Some(n.lx),
        ..Default::default()
    };
    let mut csv = String::from("mode,k,rate,continuum\n");
    for &m in &n.dispersion_modes {
        let k = 2.0 * PI * m / n.lx;
        // interfaces are set up with fluid 1 above, the mirror of the probe sheet
        let drive = groups.drive.flipped();
        let rate = linear_growth_oracle_with(k, groups.atwood, groups.b, drive, &dcfg)?;
        let cont = continuum_growth_rate(k, groups.b, drive);
        csv.push_str(&format!("{m:?},{k:?},{rate:?},{cont:?}\n"));
    }
    art.text("dispersion.csv", &csv)?;

    if !n.matching_drives.is_empty() {
        let t_end = n.t_end.unwrap_or(0.05);
        let (runs, rep) = matching_runs(cfg, t_end)?;
        let mut csv = String::from("drive,velocity,flux_jump\n");
        for r in &runs {
            csv.push_str(&format!("{:?},{:?},{:?}\n", r.drive, r.sample.velocity, r.sample.flux_jump));
        }
        art.text("matching.csv", &csv)?;
        entries.push(("matching_slope", fmt(rep.slope)));
        entries.push(("matching_configured", fmt(rep.configured)));
        entries.push(("matching_relative_deviation", fmt(rep.relative_deviation)));
        checks.push(check(
            "matching_constant",
            rep.relative_deviation <= n.matching_tol,
            format!("slope {:.5} vs {:.5}", rep.slope, rep.configured),
        ));
    }
    art.report("report.txt", &entries)?;
    if cfg.output.figures {
        art.figure("dispersion.svg", &["dispersion.csv"], FigureKind::DispersionCurve)?;
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Shape;
    use crate::params::PhysicalParams;

    fn in_dir(method: Method, dir: &Path) -> RunConfig {
        let mut cfg = RunConfig::new(method);
        cfg.output.dir = dir.to_path_buf();
        cfg
    }

    #[test]
    fn verify_defaults_emit_sigma_table() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = in_dir(Method::VerifyAsymptotics, dir.path());
        let s = run(&cfg).unwrap();
        assert!(s.all_passed(), "{:?}", s.checks);
        let table = std::fs::read_to_string(dir.path().join("sigma.csv")).unwrap();
        let last = table.lines().last().unwrap();
        let sigma: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
        assert!((sigma - 2.0 / 3.0).abs() <= 1e-8);
    }

    #[test]
    fn flat_undriven_sheet_stays_put() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = in_dir(Method::VortexSheet, dir.path());
        cfg.initial.shape = Shape::Flat;
        cfg.numerics.sheet_dt = Some(0.01);
        cfg.numerics.steps = 20;
        cfg.physical = PhysicalParams::default();
        run(&cfg).unwrap();
        let rep = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
        let line = rep.lines().find(|l| l.starts_with("max_marker_displacement")).unwrap();
        let d: f64 = line.split(" = ").nth(1).unwrap().parse().unwrap();
        assert!(d <= 1e-12, "{d}");
    }

    #[test]
    fn manifest_lists_every_file() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = in_dir(Method::PhaseField, dir.path());
        cfg.numerics.nx = 32;
        cfg.numerics.ny = 32;
        cfg.numerics.steps = 6;
        cfg.output.snapshot_every = 3;
        let s = run(&cfg).unwrap();
        let manifest = std::fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        let mut on_disk: Vec<String> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .filter(|n| n != "manifest.txt")
            .collect();
        on_disk.sort();
        let mut listed = s.files.clone();
        listed.sort();
        assert_eq!(listed, on_disk);
        for f in &listed {
            let hash = sha256_hex(&std::fs::read(dir.path().join(f)).unwrap());
            assert!(manifest.contains(&format!("{hash}  {f}")), "{f}");
        }
        assert!(listed.contains(&"phi_000003.hsf".to_string()));
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hele_shaw::harness::{emit_figure, run, FigureKind, Method, RunConfig};
use hele_shaw::Error;

/// Phase-field and vortex-sheet Hele-Shaw solvers.
///
/// Exit status: 0 success, 2 invalid configuration, 3 solver or I/O
/// failure, 4 a run check failed. `HELE_SHAW_THREADS` sets the worker count.
#[derive(Parser)]
#[command(name = "hele-shaw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the method named in the configuration.
    Run(RunArgs),
    /// Cross-method comparison over the ε schedule.
    Compare(RunArgs),
    /// Profile, surface-tension, dispersion and matching checks.
    Verify(RunArgs),
    /// Render an SVG figure from run artifacts.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct PlotArgs {
    /// interface-overlay, field-heatmap or dispersion-curve.
    #[arg(long)]
    kind: String,
    /// Directory receiving `<kind>.svg`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    quiet: bool,
    /// Input CSV or snapshot files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConfigInvalid { .. } => 2,
        _ => 3,
    }
}

fn load(args: &RunArgs, forced: Option<Method>) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::new(forced.unwrap_or(Method::VerifyAsymptotics)),
    };
    if let Some(m) = forced {
        cfg.method = m;
    }
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(args: &RunArgs, forced: Option<Method>) -> Result<u8, Error> {
    let cfg = load(args, forced)?;
    let summary = run(&cfg)?;
    if !args.quiet {
        println!("wrote {} files to {}", summary.files.len() + 1, summary.out_dir.display());
        for c in &summary.checks {
            println!("{}: {} ({})", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
    }
    Ok(if summary.all_passed() { 0 } else { 4 })
}

fn plot(args: &PlotArgs) -> Result<u8, Error> {
    let kind: FigureKind = args
        .kind
        .parse()
        .map_err(|_| Error::ConfigInvalid { field: "kind".into(), message: format!("unknown figure kind `{}`", args.kind) })?;
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join(format!("{}.svg", kind.name()));
    emit_figure(&args.inputs, kind, &path)?;
    if !args.quiet {
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn configure_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("HELE_SHAW_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| Error::ConfigInvalid {
            field: "HELE_SHAW_THREADS".into(),
            message: format!("`{v}` is not a thread count"),
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Run(a) => execute(a, None),
        Command::Compare(a) => execute(a, Some(Method::Compare)),
        Command::Verify(a) => execute(a, Some(Method::VerifyAsymptotics)),
        Command::Plot(a) => plot(a),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

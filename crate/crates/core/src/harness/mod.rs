//! Configuration, orchestration, the cross-method comparison, persistence
//! and figures.

mod compare;
mod config;
mod figure;
mod run;
mod setup;
mod studies;

pub use compare::{
    compare_methods, hausdorff, mode_rates, phase_field_mode_rate, phase_field_schedule,
    run_phase_field, run_sheet, sheet_schedule, ComparisonOutcome, ComparisonReport,
};
pub use config::{
    BoundaryKind, Initial, IntegratorKind, Method, Numerics, Output, RunConfig, Shape,
    SCHEMA_VERSION,
};
pub use setup::{initial_phase_field, initial_sheet, InterfaceShape};
pub use studies::{
    is_monotone, matching_runs, mode_amplitude, sharp_interface_study, sheet_growth_fit, GrowthFit,
    MatchingRun, ResidualStudy,
};
pub use figure::{emit_figure, render_figure, FigureKind};
pub use run::{run, sha256_hex, Check, RunSummary};

//! Inner-profile, matching and linear-stability oracles.

mod dispersion;
mod matching;
mod profile;

pub use dispersion::{
    continuum_growth_rate, linear_growth_oracle, linear_growth_oracle_with, rate_at_amplitude,
    DispersionConfig,
};
pub use matching::{verify_matching_constant, JumpSample, MatchingReport};
pub use profile::{
    simpson, solve_profile_ode, surface_tension_integral, ProfileSolution, EXACT_SIGMA,
};

//! Hele-Shaw interface dynamics by two routes: a diffuse-interface
//! phase-field model and a sharp-interface vortex-sheet model, with the
//! asymptotic oracles that tie them together.

// `!(x > 0.0)` guards reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod params;
pub mod phase_field;
pub mod spectral;
pub mod vortex_sheet;

pub use error::{Error, Result};

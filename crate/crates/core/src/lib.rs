//! Global sensitivity analysis: sampling of truncated-normal inputs, Sobol
//! main and total effects, nearest-neighbour mutual information, the delta
//! index, the PAWN index, resampling-based confidence intervals, and a study
//! harness for a segmented fire-spread model.

pub mod error;
pub mod experiments;
pub mod models;
pub mod moment_independent;
pub mod normal;
pub mod numeric;
pub mod partition;
pub mod pawn;
pub mod resampling;
pub mod sampling;
pub mod seed;
pub mod sobol;

pub use error::{GsaError, Result};

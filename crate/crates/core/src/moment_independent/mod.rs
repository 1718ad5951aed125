//! Density-based sensitivity measures: differential entropy, mutual
//! information and the delta index.

mod delta;
mod kde;
mod knn;

use rand::Rng;

use crate::error::{GsaError, Result};
use crate::seed::rng_from_seed;

pub use delta::{delta_given_data, delta_partitions_for, DeltaEstimator, DeltaSettings};
pub use kde::{
    binned_density, kde_at, kde_on_grid, silverman_bandwidth, DensityEstimate, UniformGrid,
};
pub use knn::{differential_entropy, knn_mutual_information};

/// Settings shared by the nearest-neighbour estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnSettings {
    pub k: usize,
    /// Seed of the tie-breaking jitter.
    pub jitter_seed: u64,
}

impl Default for KnnSettings {
    fn default() -> Self {
        Self {
            k: 3,
            jitter_seed: 0x6a09_e667_f3bc_c908,
        }
    }
}

/// Relative size of the tie-breaking jitter.
pub const JITTER_SCALE: f64 = 1e-10;

/// Copy of `v` with uniform noise in `[-m, m]`, `m = 1e-10 * range(v)`.
pub(crate) fn jittered(v: &[f64], seed: u64) -> Result<Vec<f64>> {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let range = hi - lo;
    if !(range > 0.0) || !range.is_finite() {
        return Err(GsaError::DegenerateData(
            "sample has zero or undefined range".into(),
        ));
    }
    let m = JITTER_SCALE * range;
    let mut rng = rng_from_seed(seed);
    Ok(v.iter()
        .map(|x| x + m * (2.0 * rng.random::<f64>() - 1.0))
        .collect())
}

/// Mutual information mapped onto `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedMi {
    pub rho: f64,
    /// The input was negative (estimator bias) and was clamped to zero.
    pub clamped: bool,
}

/// `rho = sqrt(1 - exp(-2 eta))`; equals `|r|` for a bivariate Gaussian.
pub fn normalize_mi(eta: f64) -> NormalizedMi {
    let clamped = eta < 0.0;
    let eta = eta.max(0.0);
    NormalizedMi {
        rho: (-(-2.0 * eta).exp_m1()).sqrt(),
        clamped,
    }
}

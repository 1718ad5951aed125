//! Wall-clock cost of each estimator at matched sample sizes.

use std::time::Instant;

use crate::error::{argument, GsaError, Result};
use crate::numeric::sorted_copy;
use crate::resampling::Method;
use crate::seed::{derive_seed, stream};

use super::study::{
    delta_indices, mi_indices, pawn_indices, sobol_indices, SampleSizes, StudySettings,
};

#[derive(Debug, Clone, PartialEq)]
pub struct TimingCell {
    /// Sobol cells report under [`Method::SobolTotal`] and cover both effects.
    pub method: Method,
    pub samples: usize,
    pub runs: Vec<f64>,
    pub median_seconds: f64,
}

/// Times sampling, model evaluation and estimation (no intervals) for each
/// ranked method at each sample size, `runs` times per cell, on a
/// single-threaded pool.
pub fn timing_study(
    mu_wind: f64,
    sample_sizes: &[usize],
    runs: usize,
    settings: &StudySettings,
    seed: u64,
) -> Result<Vec<TimingCell>> {
    if runs == 0 {
        return Err(argument("need at least one timing run"));
    }
    let model = settings.inputs.model(mu_wind)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| GsaError::Argument(format!("cannot build thread pool: {e}")))?;
    let mut cells = Vec::new();
    for method in Method::RANKED {
        for &n in sample_sizes {
            let s = StudySettings {
                sizes: SampleSizes {
                    sobol: n,
                    mi: n,
                    delta: n,
                    pawn: n,
                },
                with_ci: false,
                null_dummies: 0,
                ..settings.clone()
            };
            let mut times = Vec::with_capacity(runs);
            for r in 0..runs {
                let run_seed = derive_seed(seed, stream::TIMING, r as u64);
                let start = Instant::now();
                pool.install(|| -> Result<()> {
                    match method {
                        Method::SobolTotal | Method::SobolMain => {
                            sobol_indices(&model, &s, run_seed).map(drop)
                        }
                        Method::Mi => mi_indices(&model, &s, run_seed).map(drop),
                        Method::Delta => delta_indices(&model, &s, run_seed).map(drop),
                        Method::Pawn => pawn_indices(&model, &s, run_seed).map(drop),
                    }
                })?;
                times.push(start.elapsed().as_secs_f64());
            }
            let sorted = sorted_copy(&times);
            cells.push(TimingCell {
                method,
                samples: n,
                median_seconds: sorted[sorted.len() / 2],
                runs: times,
            });
        }
    }
    Ok(cells)
}

//! Repeated estimation over a grid of sample sizes.

use crate::error::{argument, Result};
use crate::resampling::{rank_indices, Method};
use crate::seed::{derive_seed, stream};

use super::study::{run_index_study, SampleSizes, StudySettings};

/// Mean indices of one method at one grid entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCell {
    pub sizes: SampleSizes,
    pub method: Method,
    pub mean_values: Vec<f64>,
    /// Ranks of the mean values.
    pub ranks: Vec<usize>,
    /// Fraction of repetitions whose own ranking differs from the ranking of
    /// the means at the largest grid entry.
    pub disagreement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceResult {
    pub variables: Vec<String>,
    pub grid: Vec<SampleSizes>,
    pub repetitions: usize,
    /// Grid-major, methods in [`Method::ALL`] order.
    pub cells: Vec<ConvergenceCell>,
}

impl ConvergenceResult {
    pub fn cells_for(&self, method: Method) -> Vec<&ConvergenceCell> {
        self.cells.iter().filter(|c| c.method == method).collect()
    }

    /// Fraction of grid entries whose mean ranking differs from the last one.
    pub fn instability_rate(&self, method: Method) -> f64 {
        let cells = self.cells_for(method);
        let last = &cells.last().expect("grid is non-empty").ranks;
        cells.iter().filter(|c| &c.ranks != last).count() as f64 / cells.len() as f64
    }
}

/// Repetition `r` uses the seed `derive(seed, REPETITION, r)` at every grid
/// entry. Intervals and null levels are not computed.
pub fn convergence_study(
    mu_wind: f64,
    grid: &[SampleSizes],
    repetitions: usize,
    settings: &StudySettings,
    seed: u64,
) -> Result<ConvergenceResult> {
    if grid.is_empty() {
        return Err(argument("sample-size grid is empty"));
    }
    if repetitions == 0 {
        return Err(argument("need at least one repetition"));
    }
    let model = settings.inputs.model(mu_wind)?;
    let variables = model.variable_names();
    // values[g][m][r] = index values of method m, repetition r at grid entry g
    let mut values: Vec<Vec<Vec<Vec<f64>>>> = Vec::with_capacity(grid.len());
    for sizes in grid {
        let s = StudySettings {
            sizes: *sizes,
            with_ci: false,
            null_dummies: 0,
            ..settings.clone()
        };
        let mut per_method = vec![Vec::with_capacity(repetitions); Method::ALL.len()];
        for r in 0..repetitions {
            let study =
                run_index_study(&model, &s, derive_seed(seed, stream::REPETITION, r as u64))?;
            for (m, method) in Method::ALL.iter().enumerate() {
                per_method[m].push(study.values(*method));
            }
        }
        values.push(per_method);
    }
    let means: Vec<Vec<Vec<f64>>> = values
        .iter()
        .map(|per_method| {
            per_method
                .iter()
                .map(|reps| {
                    (0..variables.len())
                        .map(|i| reps.iter().map(|v| v[i]).sum::<f64>() / reps.len() as f64)
                        .collect()
                })
                .collect()
        })
        .collect();
    let final_ranks: Vec<Vec<usize>> = means
        .last()
        .unwrap()
        .iter()
        .map(|m| rank_indices(m))
        .collect();
    let mut cells = Vec::new();
    for (g, sizes) in grid.iter().enumerate() {
        for (m, method) in Method::ALL.iter().enumerate() {
            let reps = &values[g][m];
            let disagree = reps
                .iter()
                .filter(|v| rank_indices(v) != final_ranks[m])
                .count();
            cells.push(ConvergenceCell {
                sizes: *sizes,
                method: *method,
                mean_values: means[g][m].clone(),
                ranks: rank_indices(&means[g][m]),
                disagreement: disagree as f64 / repetitions as f64,
            });
        }
    }
    Ok(ConvergenceResult {
        variables,
        grid: grid.to_vec(),
        repetitions,
        cells,
    })
}

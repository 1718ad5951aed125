//! Monte Carlo main and total effects from two base matrices and their
//! single-column hybrids.
//!
//! With `f_A`, `f_B` the outputs on rows of A and B and `f_i` the outputs on
//! the hybrid that takes column `i` from A and the rest from B:
//!
//! ```text
//! S_i   = mean_k f_A[k] * (f_i[k] - f_B[k])   / V
//! S_T,i = mean_k (f_i[k] - f_B[k])^2 / 2      / V
//! ```
//!
//! `V` is the unbiased variance of the pooled A and B outputs (2N values).
//! "N samples" means N rows of each base matrix, so one estimate costs
//! `(n + 2) * N` model evaluations.

use crate::error::{argument, GsaError, Result};
use crate::models::ModelDefinition;
use crate::numeric::{mean, pairwise_sum, unbiased_variance};
use crate::sampling::sobol_matrices;

/// Smallest base-matrix row count accepted by [`estimate_sobol`].
pub const MIN_SOBOL_ROWS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SobolEstimate {
    pub variable: String,
    pub main_effect: f64,
    pub total_effect: f64,
    pub n_evaluations: usize,
    /// Set when the main effect came out negative (Monte Carlo noise); the value is not clipped.
    pub negative_main: bool,
}

/// Unbiased sample variance.
pub fn sample_variance(y: &[f64]) -> Result<f64> {
    unbiased_variance(y).ok_or_else(|| argument("variance needs at least two values"))
}

/// Model outputs on the Sobol design, kept so estimates can be recomputed on
/// resampled rows without re-running the model.
#[derive(Debug, Clone)]
pub struct SobolOutputs {
    pub variables: Vec<String>,
    pub f_a: Vec<f64>,
    pub f_b: Vec<f64>,
    pub f_hybrid: Vec<Vec<f64>>,
}

impl SobolOutputs {
    pub fn rows(&self) -> usize {
        self.f_a.len()
    }

    pub fn evaluation_count(&self) -> usize {
        self.rows() * (self.f_hybrid.len() + 2)
    }

    pub fn estimate(&self) -> Result<Vec<SobolEstimate>> {
        let rows: Vec<usize> = (0..self.rows()).collect();
        self.estimate_rows(&rows)
    }

    /// Estimates using only the listed row indices (repeats allowed).
    pub fn estimate_rows(&self, rows: &[usize]) -> Result<Vec<SobolEstimate>> {
        if rows.len() < 2 {
            return Err(argument("Sobol estimate needs at least two rows"));
        }
        let pooled: Vec<f64> = rows
            .iter()
            .map(|&k| self.f_a[k])
            .chain(rows.iter().map(|&k| self.f_b[k]))
            .collect();
        let variance = sample_variance(&pooled)?;
        let centre = mean(&pooled);
        if variance <= 1e-12 * centre * centre || variance <= f64::MIN_POSITIVE {
            return Err(GsaError::DegenerateModel {
                variance,
                mean: centre,
            });
        }
        let n = rows.len() as f64;
        let mut out = Vec::with_capacity(self.f_hybrid.len());
        let mut main_terms = vec![0.0; rows.len()];
        let mut total_terms = vec![0.0; rows.len()];
        for (name, f_i) in self.variables.iter().zip(&self.f_hybrid) {
            for (slot, &k) in rows.iter().enumerate() {
                let diff = f_i[k] - self.f_b[k];
                main_terms[slot] = self.f_a[k] * diff;
                total_terms[slot] = diff * diff;
            }
            let main_effect = pairwise_sum(&main_terms) / (n * variance);
            let total_effect = pairwise_sum(&total_terms) / (2.0 * n * variance);
            out.push(SobolEstimate {
                variable: name.clone(),
                main_effect,
                total_effect,
                n_evaluations: self.evaluation_count(),
                negative_main: main_effect < 0.0,
            });
        }
        Ok(out)
    }
}

/// Run the model on a fresh Sobol design of `n` base rows.
pub fn evaluate_sobol_design(model: &ModelDefinition, n: usize, seed: u64) -> Result<SobolOutputs> {
    if n < MIN_SOBOL_ROWS {
        return Err(argument(format!(
            "Sobol estimation needs at least {MIN_SOBOL_ROWS} base rows, got {n}"
        )));
    }
    let m = sobol_matrices(&model.input_specs, n, seed)?;
    let f_a = model.evaluate_rows(&m.a)?;
    let f_b = model.evaluate_rows(&m.b)?;
    let f_hybrid = m
        .hybrids
        .iter()
        .map(|h| model.evaluate_rows(h))
        .collect::<Result<Vec<_>>>()?;
    Ok(SobolOutputs {
        variables: model.variable_names(),
        f_a,
        f_b,
        f_hybrid,
    })
}

pub fn estimate_sobol(model: &ModelDefinition, n: usize, seed: u64) -> Result<Vec<SobolEstimate>> {
    evaluate_sobol_design(model, n, seed)?.estimate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{linear_gaussian_model, ModelDefinition};
    use crate::sampling::RandomVariableSpec;

    #[test]
    fn variance_of_constant_and_pair() {
        assert_eq!(sample_variance(&[3.0; 10]).unwrap(), 0.0);
        assert_eq!(sample_variance(&[0.0, 2.0]).unwrap(), 2.0);
        assert!(sample_variance(&[1.0]).is_err());
    }

    #[test]
    fn constant_model_is_degenerate() {
        let specs = vec![RandomVariableSpec::new("a", 0.0, 1.0, -3.0, 3.0).unwrap()];
        let m = ModelDefinition::new("c", specs, |_| Ok(4.0));
        assert!(matches!(
            estimate_sobol(&m, 200, 1),
            Err(GsaError::DegenerateModel { .. })
        ));
    }

    #[test]
    fn too_few_rows_rejected() {
        let m = linear_gaussian_model(vec![1.0, 1.0]);
        assert!(estimate_sobol(&m, 50, 1).is_err());
    }

    #[test]
    fn single_driver_takes_all_variance() {
        let m = linear_gaussian_model(vec![1.0, 0.0]);
        let est = estimate_sobol(&m, 4000, 7).unwrap();
        assert!((est[0].main_effect - 1.0).abs() < 0.02);
        assert!((est[0].total_effect - 1.0).abs() < 0.02);
        assert!(est[1].main_effect.abs() < 0.02);
        assert_eq!(est[1].total_effect, 0.0);
        assert_eq!(est[0].n_evaluations, 4 * 4000);
    }

    #[test]
    fn deterministic_given_seed() {
        let m = linear_gaussian_model(vec![2.0, 1.0]);
        assert_eq!(
            estimate_sobol(&m, 500, 3).unwrap(),
            estimate_sobol(&m, 500, 3).unwrap()
        );
    }
}

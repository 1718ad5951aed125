//! Output distribution with one input held fixed at `mu + c * sd`,
//! `c = -2, -1, 0, 1, 2`.
//!
//! All cases share one sample of independent draws; fixing an input
//! overwrites its column, so cases differ only through the fixed value. The
//! draws are not stratified because a stratified column, once it alone drives
//! the output, is spaced too evenly for the nearest-neighbour entropy.

use crate::error::{argument, Result};
use crate::models::{FireInputs, ModelDefinition};
use crate::moment_independent::{
    binned_density, differential_entropy, DensityEstimate, KnnSettings,
};
use crate::numeric::{excess_kurtosis, sorted_copy, unbiased_variance};
use crate::sampling::random_sample;
use crate::seed::{derive_seed, stream};

/// Multiples of the standard deviation at which an input is fixed.
pub const FIX_OFFSETS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalSettings {
    /// Input laws used by [`conditional_profile`].
    pub inputs: FireInputs,
    pub samples: usize,
    pub knn_k: usize,
    pub curve_points: usize,
}

impl Default for ConditionalSettings {
    fn default() -> Self {
        Self {
            inputs: FireInputs::default(),
            samples: 2_000_000,
            knn_k: 3,
            curve_points: 512,
        }
    }
}

/// Summary of one output sample.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSummary {
    pub variance: f64,
    pub entropy: f64,
    pub excess_kurtosis: f64,
    pub pdf: DensityEstimate,
    /// Empirical CDF on the density grid.
    pub cdf: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalProfile {
    pub variable: String,
    pub fix_values: Vec<f64>,
    pub baseline: OutputSummary,
    /// One entry per fix value.
    pub fixed: Vec<OutputSummary>,
}

impl ConditionalProfile {
    pub fn variances(&self) -> Vec<f64> {
        self.fixed.iter().map(|s| s.variance).collect()
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.fixed.iter().map(|s| s.entropy).collect()
    }
}

fn summarize(y: &[f64], settings: &ConditionalSettings, jitter_seed: u64) -> Result<OutputSummary> {
    let variance = unbiased_variance(y).ok_or_else(|| argument("need at least two samples"))?;
    let entropy = differential_entropy(
        y,
        &KnnSettings {
            k: settings.knn_k,
            jitter_seed,
        },
    )?;
    let pdf = binned_density(y, settings.curve_points)?;
    let sorted = sorted_copy(y);
    let n = sorted.len() as f64;
    let cdf = pdf
        .grid
        .iter()
        .map(|&g| sorted.partition_point(|&v| v <= g) as f64 / n)
        .collect();
    Ok(OutputSummary {
        variance,
        entropy,
        excess_kurtosis: excess_kurtosis(y),
        pdf,
        cdf,
    })
}

/// Profile of input `variable` of `model`.
pub fn conditional_profile_of(
    model: &ModelDefinition,
    variable: usize,
    settings: &ConditionalSettings,
    seed: u64,
) -> Result<ConditionalProfile> {
    let spec = model
        .input_specs
        .get(variable)
        .ok_or_else(|| argument(format!("model has no input {variable}")))?;
    let fix_values: Vec<f64> = FIX_OFFSETS
        .iter()
        .map(|c| spec.mean + c * spec.std_dev)
        .collect();
    if let Some(v) = fix_values.iter().find(|v| !spec.contains(**v)) {
        return Err(argument(format!(
            "fix value {v} of {} lies outside [{}, {}]",
            spec.name, spec.lower, spec.upper
        )));
    }
    let mut sample = random_sample(
        &model.input_specs,
        settings.samples,
        derive_seed(seed, stream::CONDITIONAL, 0),
    )?;
    let jitter = derive_seed(seed, stream::JITTER, 0);
    let baseline = summarize(&model.evaluate_rows(&sample.inputs)?, settings, jitter)?;
    let mut fixed = Vec::with_capacity(fix_values.len());
    for &v in &fix_values {
        sample.inputs.column_mut(variable).fill(v);
        fixed.push(summarize(
            &model.evaluate_rows(&sample.inputs)?,
            settings,
            jitter,
        )?);
    }
    Ok(ConditionalProfile {
        variable: spec.name.clone(),
        fix_values,
        baseline,
        fixed,
    })
}

/// Profile of a fire-model input (`"T"`, `"RH"`, `"U"` or `"FA"`) at wind mean `mu_wind`.
pub fn conditional_profile(
    variable: &str,
    mu_wind: f64,
    settings: &ConditionalSettings,
    seed: u64,
) -> Result<ConditionalProfile> {
    let model = settings.inputs.model(mu_wind)?;
    let index = model
        .input_specs
        .iter()
        .position(|s| s.name == variable)
        .ok_or_else(|| argument(format!("unknown variable {variable}")))?;
    conditional_profile_of(&model, index, settings, seed)
}

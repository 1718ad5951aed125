//! Truncated-normal inputs and Latin hypercube designs.
//!
//! Out-of-range values are never drawn: each coordinate comes from the inverse
//! CDF of the truncated law, which has the same distribution as redrawing until
//! the value lands in range, and keeps the hypercube strata intact.

use ndarray::Array2;
use rand::distr::Open01;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{argument, domain, Result};
use crate::models::ModelDefinition;
use crate::normal::{std_normal_cdf, std_normal_quantile, std_normal_sf};
use crate::seed::{derived_rng, rng_from_seed, stream};

/// One input variable: a normal law restricted to `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariableSpec {
    pub name: String,
    pub mean: f64,
    pub std_dev: f64,
    pub lower: f64,
    pub upper: f64,
}

impl RandomVariableSpec {
    pub fn new(
        name: impl Into<String>,
        mean: f64,
        std_dev: f64,
        lower: f64,
        upper: f64,
    ) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            mean,
            std_dev,
            lower,
            upper,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.std_dev > 0.0) || !self.std_dev.is_finite() {
            return Err(argument(format!("{}: std_dev must be positive", self.name)));
        }
        if !(self.lower < self.upper) {
            return Err(argument(format!(
                "{}: lower must be below upper",
                self.name
            )));
        }
        if !(self.lower..=self.upper).contains(&self.mean) {
            return Err(argument(format!(
                "{}: mean {} outside [{}, {}]",
                self.name, self.mean, self.lower, self.upper
            )));
        }
        Ok(())
    }

    fn standardized_bounds(&self) -> (f64, f64) {
        (
            (self.lower - self.mean) / self.std_dev,
            (self.upper - self.mean) / self.std_dev,
        )
    }

    /// Inverse CDF of the truncated law; see [`truncnorm_inverse_cdf`].
    pub fn inverse_cdf(&self, p: f64) -> Result<f64> {
        truncnorm_inverse_cdf(p, self)
    }

    /// CDF of the truncated law.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lower {
            return 0.0;
        }
        if x >= self.upper {
            return 1.0;
        }
        let (a, b) = self.standardized_bounds();
        let z = (x - self.mean) / self.std_dev;
        if a >= 0.0 {
            // upper-tail window: work with survival functions
            let (sa, sb) = (std_normal_sf(a), std_normal_sf(b));
            (sa - std_normal_sf(z)) / (sa - sb)
        } else {
            let (fa, fb) = (std_normal_cdf(a), std_normal_cdf(b));
            (std_normal_cdf(z) - fa) / (fb - fa)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lower..=self.upper).contains(&x)
    }
}

/// Quantile of the truncated normal: returns `x` with `TruncCDF(x) = p`.
///
/// Uses the window `[Phi(a), Phi(b)]` of the standard normal, mirrored into
/// the lower tail when the whole window sits above the mean so the
/// subtraction never cancels.
pub fn truncnorm_inverse_cdf(p: f64, spec: &RandomVariableSpec) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("probability {p} outside (0, 1)")));
    }
    let (a, b) = spec.standardized_bounds();
    let z = if a >= 0.0 {
        // mirror: X' = -X has bounds (-b, -a), and F'(x') = 1 - F(-x')
        let (fa, fb) = (std_normal_cdf(-b), std_normal_cdf(-a));
        -std_normal_quantile(fa + (1.0 - p) * (fb - fa))
    } else {
        let (fa, fb) = (std_normal_cdf(a), std_normal_cdf(b));
        std_normal_quantile(fa + p * (fb - fa))
    };
    Ok((spec.mean + spec.std_dev * z).clamp(spec.lower, spec.upper))
}

/// Where a point sits inside its probability stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StratumPlacement {
    #[default]
    Random,
    Midpoint,
}

/// Paired inputs and (once evaluated) outputs from one sampling run.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub specs: Vec<RandomVariableSpec>,
    /// N x n, one row per sample.
    pub inputs: Array2<f64>,
    pub outputs: Option<Vec<f64>>,
    pub seed: u64,
}

impl SampleSet {
    pub fn rows(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.inputs.column(i).to_vec()
    }

    /// Evaluate `model` on every row and store the outputs.
    pub fn evaluate(&mut self, model: &ModelDefinition) -> Result<&[f64]> {
        let y = model.evaluate_rows(&self.inputs)?;
        self.outputs = Some(y);
        Ok(self.outputs.as_deref().unwrap())
    }
}

/// Latin hypercube sample of `n` rows with uniform placement inside strata.
pub fn lhs_sample(specs: &[RandomVariableSpec], n: usize, seed: u64) -> Result<SampleSet> {
    lhs_sample_with(specs, n, seed, StratumPlacement::Random)
}

pub fn lhs_sample_with(
    specs: &[RandomVariableSpec],
    n: usize,
    seed: u64,
    placement: StratumPlacement,
) -> Result<SampleSet> {
    if n < 2 {
        return Err(argument(format!(
            "Latin hypercube needs at least 2 rows, got {n}"
        )));
    }
    for s in specs {
        s.validate()?;
    }
    let mut rng = rng_from_seed(seed);
    let mut inputs = Array2::<f64>::zeros((n, specs.len()));
    let mut strata: Vec<usize> = (0..n).collect();
    for (j, spec) in specs.iter().enumerate() {
        strata.shuffle(&mut rng);
        for (r, &s) in strata.iter().enumerate() {
            let offset = match placement {
                StratumPlacement::Random => rng.sample::<f64, _>(Open01),
                StratumPlacement::Midpoint => 0.5,
            };
            let p = (s as f64 + offset) / n as f64;
            // p can round to 1.0 only when n is astronomically large
            let p = p.min(1.0 - f64::EPSILON / 2.0);
            inputs[[r, j]] = truncnorm_inverse_cdf(p, spec)?;
        }
    }
    Ok(SampleSet {
        specs: specs.to_vec(),
        inputs,
        outputs: None,
        seed,
    })
}

/// Independent draws without stratification. Nearest-neighbour estimators
/// assume this: a stratified column is spaced more evenly than a random one.
pub fn random_sample(specs: &[RandomVariableSpec], n: usize, seed: u64) -> Result<SampleSet> {
    if n < 2 {
        return Err(argument(format!(
            "random sample needs at least 2 rows, got {n}"
        )));
    }
    for s in specs {
        s.validate()?;
    }
    let mut rng = rng_from_seed(seed);
    let mut inputs = Array2::<f64>::zeros((n, specs.len()));
    for (j, spec) in specs.iter().enumerate() {
        for r in 0..n {
            inputs[[r, j]] = truncnorm_inverse_cdf(rng.sample::<f64, _>(Open01), spec)?;
        }
    }
    Ok(SampleSet {
        specs: specs.to_vec(),
        inputs,
        outputs: None,
        seed,
    })
}

/// Base matrices and single-column hybrids for the Monte Carlo Sobol estimator.
#[derive(Debug, Clone)]
pub struct SobolMatrices {
    pub a: Array2<f64>,
    pub b: Array2<f64>,
    /// `hybrids[i]` is `b` with column `i` taken from `a`.
    pub hybrids: Vec<Array2<f64>>,
}

impl SobolMatrices {
    pub fn evaluation_count(&self) -> usize {
        self.a.nrows() * (self.hybrids.len() + 2)
    }
}

pub fn sobol_matrices(specs: &[RandomVariableSpec], n: usize, seed: u64) -> Result<SobolMatrices> {
    let a = lhs_sample(specs, n, crate::seed::derive_seed(seed, stream::SOBOL_A, 0))?.inputs;
    let b = lhs_sample(specs, n, crate::seed::derive_seed(seed, stream::SOBOL_B, 0))?.inputs;
    let hybrids = (0..specs.len())
        .map(|i| {
            let mut h = b.clone();
            h.column_mut(i).assign(&a.column(i));
            h
        })
        .collect();
    Ok(SobolMatrices { a, b, hybrids })
}

/// Uniform(0,1) Latin hypercube column, used for dummy inputs.
pub(crate) fn uniform_lhs_column(n: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = derived_rng(seed, stream::DUMMY, index);
    let mut strata: Vec<usize> = (0..n).collect();
    strata.shuffle(&mut rng);
    strata
        .into_iter()
        .map(|s| (s as f64 + rng.sample::<f64, _>(Open01)) / n as f64)
        .collect()
}

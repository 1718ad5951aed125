//! All four indices for one model, each on its own sample.

use rayon::prelude::*;

use crate::error::{argument, Result};
use crate::models::{FireInputs, ModelDefinition};
use crate::moment_independent::{
    knn_mutual_information, normalize_mi, DeltaEstimator, DeltaSettings, KnnSettings, NormalizedMi,
};
use crate::numeric::{mean, unbiased_variance};
use crate::pawn::{PawnEstimator, PawnSettings};
use crate::resampling::{
    bootstrap_ci_multi, grouped_jackknife_ci, ranked_estimates, ranking_order, resample_counts,
    BootstrapSettings, ConfidenceInterval, IndexEstimate, JackknifeSettings, Method,
};
use crate::sampling::{lhs_sample, uniform_lhs_column};
use crate::seed::{derive_seed, stream};
use crate::sobol::evaluate_sobol_design;

use super::stage::{stage_classify, StageLabel};

/// Sample size of each estimator. Sobol counts base-matrix rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSizes {
    pub sobol: usize,
    pub mi: usize,
    pub delta: usize,
    pub pawn: usize,
}

impl SampleSizes {
    pub const REFERENCE: SampleSizes = SampleSizes {
        sobol: 4_000,
        mi: 10_000,
        delta: 5_000,
        pawn: 2_000_000,
    };

    pub fn divided_by(self, divisor: usize) -> Self {
        Self {
            sobol: self.sobol / divisor,
            mi: self.mi / divisor,
            delta: self.delta / divisor,
            pawn: self.pawn / divisor,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        let s = |n: usize| (n as f64 * factor).round() as usize;
        Self {
            sobol: s(self.sobol),
            mi: s(self.mi),
            delta: s(self.delta),
            pawn: s(self.pawn),
        }
    }

    pub fn get(&self, method: Method) -> usize {
        match method {
            Method::SobolTotal | Method::SobolMain => self.sobol,
            Method::Mi => self.mi,
            Method::Delta => self.delta,
            Method::Pawn => self.pawn,
        }
    }
}

impl Default for SampleSizes {
    fn default() -> Self {
        Self::REFERENCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudySettings {
    /// Input laws of the fire model (studies that take a wind mean).
    pub inputs: FireInputs,
    pub sizes: SampleSizes,
    pub knn_k: usize,
    pub delta: DeltaSettings,
    pub pawn: PawnSettings,
    pub bootstrap: BootstrapSettings,
    pub jackknife: JackknifeSettings,
    /// Compute confidence intervals (bootstrap / jackknife).
    pub with_ci: bool,
    /// Independent uniform columns used to estimate each estimator's null level.
    pub null_dummies: usize,
}

impl Default for StudySettings {
    fn default() -> Self {
        Self {
            inputs: FireInputs::default(),
            sizes: SampleSizes::REFERENCE,
            knn_k: 3,
            delta: DeltaSettings::default(),
            pawn: PawnSettings::default(),
            bootstrap: BootstrapSettings::default(),
            jackknife: JackknifeSettings::default(),
            with_ci: true,
            null_dummies: 8,
        }
    }
}

/// Ranked estimates of one method together with its null level.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodIndices {
    pub method: Method,
    pub estimates: Vec<IndexEstimate>,
    /// Values at or below this level cannot be told apart from an input that
    /// has no influence at all.
    pub null_floor: f64,
}

impl MethodIndices {
    fn build(
        method: Method,
        variables: &[String],
        values: &[f64],
        ci: Option<&[ConfidenceInterval]>,
        floor: f64,
    ) -> Self {
        Self {
            method,
            estimates: ranked_estimates(method, variables, values, ci),
            null_floor: floor,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.estimates.iter().map(|e| e.value).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.estimates.iter().map(|e| e.rank).collect()
    }

    /// Indices of the variables above the null level, most important first.
    pub fn screened_order(&self) -> Vec<usize> {
        let values = self.values();
        ranking_order(&values)
            .into_iter()
            .filter(|&i| values[i] > self.null_floor)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexStudy {
    pub variables: Vec<String>,
    /// One entry per method, in [`Method::ALL`] order.
    pub methods: Vec<MethodIndices>,
    pub normalized_mi: Vec<NormalizedMi>,
    pub warnings: Vec<String>,
}

impl IndexStudy {
    pub fn method(&self, m: Method) -> &MethodIndices {
        self.methods
            .iter()
            .find(|r| r.method == m)
            .expect("every method is computed")
    }

    pub fn values(&self, m: Method) -> Vec<f64> {
        self.method(m).values()
    }

    pub fn ranks(&self, m: Method) -> Vec<usize> {
        self.method(m).ranks()
    }

    pub fn variable_index(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| argument(format!("unknown variable {name}")))
    }

    /// Whether every pair of ranked methods orders the variables they both
    /// find influential in the same way.
    pub fn screened_rankings_agree(&self) -> bool {
        let orders: Vec<Vec<usize>> = Method::RANKED
            .iter()
            .map(|&m| self.method(m).screened_order())
            .collect();
        orders
            .iter()
            .enumerate()
            .all(|(i, a)| orders[i + 1..].iter().all(|b| orders_agree(a, b)))
    }

    /// Whether the plain rankings of all ranked methods coincide.
    pub fn rankings_identical(&self) -> bool {
        let first = self.ranks(Method::RANKED[0]);
        Method::RANKED[1..].iter().all(|&m| self.ranks(m) == first)
    }
}

/// Two importance orders agree when they list their common elements in the
/// same sequence.
pub fn orders_agree(a: &[usize], b: &[usize]) -> bool {
    let a_common: Vec<usize> = a.iter().copied().filter(|v| b.contains(v)).collect();
    let b_common: Vec<usize> = b.iter().copied().filter(|v| a.contains(v)).collect();
    a_common == b_common
}

/// Null level from the index values of pure-noise inputs: the larger of their
/// maximum and `mean + 4 sd`.
fn null_floor(dummies: &[f64]) -> f64 {
    match dummies.len() {
        0 => f64::NEG_INFINITY,
        1 => dummies[0],
        _ => {
            let max = dummies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let spread = unbiased_variance(dummies).unwrap().sqrt();
            max.max(mean(dummies) + 4.0 * spread)
        }
    }
}

fn sampled_outputs(
    model: &ModelDefinition,
    n: usize,
    seed: u64,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut sample = lhs_sample(&model.input_specs, n, seed)?;
    let y = sample.evaluate(model)?.to_vec();
    let columns = (0..model.dimension()).map(|i| sample.column(i)).collect();
    Ok((columns, y))
}

fn dummy_columns(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..count as u64)
        .map(|d| uniform_lhs_column(n, seed, d))
        .collect()
}

/// Sobol total and main effects (in that order).
pub fn sobol_indices(
    model: &ModelDefinition,
    settings: &StudySettings,
    seed: u64,
) -> Result<[MethodIndices; 2]> {
    let outputs = evaluate_sobol_design(model, settings.sizes.sobol, seed)?;
    let est = outputs.estimate()?;
    let total: Vec<f64> = est.iter().map(|e| e.total_effect).collect();
    let main: Vec<f64> = est.iter().map(|e| e.main_effect).collect();
    let (ci_total, ci_main) = if settings.with_ci {
        let point: Vec<f64> = total.iter().chain(&main).copied().collect();
        let ci = bootstrap_ci_multi(
            outputs.rows(),
            &point,
            &settings.bootstrap,
            derive_seed(seed, stream::BOOTSTRAP, 0),
            |rows| {
                let e = outputs.estimate_rows(rows)?;
                Ok(e.iter()
                    .map(|v| v.total_effect)
                    .chain(e.iter().map(|v| v.main_effect))
                    .collect())
            },
        )?;
        let n = total.len();
        (Some(ci[..n].to_vec()), Some(ci[n..].to_vec()))
    } else {
        (None, None)
    };
    let names = model.variable_names();
    // a dummy input never changes the hybrid output, so both effects are exactly zero
    Ok([
        MethodIndices::build(Method::SobolTotal, &names, &total, ci_total.as_deref(), 0.0),
        MethodIndices::build(Method::SobolMain, &names, &main, ci_main.as_deref(), 0.0),
    ])
}

/// Mutual information of each input with the output; also returns the
/// normalized values and estimator warnings.
pub fn mi_indices(
    model: &ModelDefinition,
    settings: &StudySettings,
    seed: u64,
) -> Result<(MethodIndices, Vec<NormalizedMi>, Vec<String>)> {
    let n = settings.sizes.mi;
    let (columns, y) = sampled_outputs(model, n, derive_seed(seed, stream::MI_SAMPLE, 0))?;
    let knn = |index: u64| KnnSettings {
        k: settings.knn_k,
        jitter_seed: derive_seed(seed, stream::JITTER, index),
    };
    let values: Vec<f64> = columns
        .par_iter()
        .enumerate()
        .map(|(i, x)| knn_mutual_information(x, &y, &knn(i as u64)))
        .collect::<Result<_>>()?;
    let dummies: Vec<f64> = dummy_columns(n, settings.null_dummies, seed)
        .par_iter()
        .enumerate()
        .map(|(d, x)| knn_mutual_information(x, &y, &knn(1000 + d as u64)))
        .collect::<Result<_>>()?;
    let ci = if settings.with_ci {
        let intervals = columns
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let s = knn(i as u64);
                grouped_jackknife_ci(
                    x,
                    &y,
                    &settings.jackknife,
                    derive_seed(seed, stream::JACKKNIFE, i as u64),
                    |a, b| knn_mutual_information(a, b, &s),
                )
                .map(|r| r.interval)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(intervals)
    } else {
        None
    };
    let names = model.variable_names();
    let warnings = names
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v < -0.05)
        .map(|(name, v)| {
            format!("mutual information of {name} is {v:.4}; the sample may be too small")
        })
        .collect();
    let normalized = values.iter().map(|&v| normalize_mi(v)).collect();
    Ok((
        MethodIndices::build(
            Method::Mi,
            &names,
            &values,
            ci.as_deref(),
            null_floor(&dummies),
        ),
        normalized,
        warnings,
    ))
}

pub fn delta_indices(
    model: &ModelDefinition,
    settings: &StudySettings,
    seed: u64,
) -> Result<MethodIndices> {
    let n = settings.sizes.delta;
    let (columns, y) = sampled_outputs(model, n, derive_seed(seed, stream::DELTA_SAMPLE, 0))?;
    let estimator = DeltaEstimator::new(&y, &settings.delta)?;
    let values: Vec<f64> = columns
        .par_iter()
        .map(|x| estimator.delta(x))
        .collect::<Result<_>>()?;
    let dummies: Vec<f64> = dummy_columns(n, settings.null_dummies, seed)
        .par_iter()
        .map(|x| estimator.delta(x))
        .collect::<Result<_>>()?;
    let ci = if settings.with_ci {
        let ci = bootstrap_ci_multi(
            n,
            &values,
            &settings.bootstrap,
            derive_seed(seed, stream::BOOTSTRAP, 1),
            |rows| {
                let counts = resample_counts(n, rows);
                let weighted = DeltaEstimator::weighted(&y, &counts, &settings.delta)?;
                columns.iter().map(|x| weighted.delta(x)).collect()
            },
        )?;
        Some(ci)
    } else {
        None
    };
    Ok(MethodIndices::build(
        Method::Delta,
        &model.variable_names(),
        &values,
        ci.as_deref(),
        null_floor(&dummies),
    ))
}

pub fn pawn_indices(
    model: &ModelDefinition,
    settings: &StudySettings,
    seed: u64,
) -> Result<MethodIndices> {
    let n = settings.sizes.pawn;
    let (columns, y) = sampled_outputs(model, n, derive_seed(seed, stream::PAWN_SAMPLE, 0))?;
    let estimator = PawnEstimator::new(&y, settings.pawn)?;
    drop(y);
    let labels: Vec<Vec<u32>> = columns
        .par_iter()
        .map(|x| estimator.intervals_of(x))
        .collect::<Result<_>>()?;
    drop(columns);
    let values: Vec<f64> = labels
        .par_iter()
        .map(|l| estimator.estimate_labels(l, None).map(|e| e.value))
        .collect::<Result<_>>()?;
    let dummies: Vec<f64> = (0..settings.null_dummies as u64)
        .into_par_iter()
        .map(|d| {
            estimator
                .estimate(&uniform_lhs_column(n, seed, d))
                .map(|e| e.value)
        })
        .collect::<Result<_>>()?;
    let ci = if settings.with_ci {
        let ordered: Vec<Vec<u32>> = labels
            .iter()
            .map(|l| estimator.ordered_labels(l))
            .collect::<Result<_>>()?;
        drop(labels);
        let ci = bootstrap_ci_multi(
            n,
            &values,
            &settings.bootstrap,
            derive_seed(seed, stream::BOOTSTRAP, 2),
            // resampled rows are uniform, so they can be read directly as
            // positions in output order
            |rows| {
                let counts = resample_counts(n, rows);
                ordered
                    .iter()
                    .map(|l| estimator.estimate_ordered(l, &counts).map(|e| e.value))
                    .collect()
            },
        )?;
        Some(ci)
    } else {
        None
    };
    Ok(MethodIndices::build(
        Method::Pawn,
        &model.variable_names(),
        &values,
        ci.as_deref(),
        null_floor(&dummies),
    ))
}

/// Runs every estimator on `model`, each on its own sample drawn from `seed`.
pub fn run_index_study(
    model: &ModelDefinition,
    settings: &StudySettings,
    seed: u64,
) -> Result<IndexStudy> {
    let [total, main] = sobol_indices(model, settings, seed)?;
    let (mi, normalized_mi, warnings) = mi_indices(model, settings, seed)?;
    let delta = delta_indices(model, settings, seed)?;
    let pawn = pawn_indices(model, settings, seed)?;
    Ok(IndexStudy {
        variables: model.variable_names(),
        methods: vec![total, main, mi, delta, pawn],
        normalized_mi,
        warnings,
    })
}

/// Index study of the fire model at one wind mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStudy {
    pub mu_wind: f64,
    /// `None` outside the open interval (2, 8) where stages are defined.
    pub stage: Option<StageLabel>,
    pub seed: u64,
    pub indices: IndexStudy,
}

pub fn run_point_study(mu_wind: f64, settings: &StudySettings, seed: u64) -> Result<PointStudy> {
    let model = settings.inputs.model(mu_wind)?;
    Ok(PointStudy {
        mu_wind,
        stage: stage_classify(mu_wind).ok(),
        seed,
        indices: run_index_study(&model, settings, seed)?,
    })
}

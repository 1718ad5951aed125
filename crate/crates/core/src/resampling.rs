//! Confidence intervals and rankings.
//!
//! Bootstrap intervals are percentile intervals over resampled row indices.
//! The grouped jackknife deletes one block of rows at a time and reports a
//! normal-approximation interval; it avoids the duplicated rows a bootstrap
//! resample would feed to nearest-neighbour estimators.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{argument, GsaError, Result};
use crate::normal::std_normal_quantile;
use crate::numeric::{mean, sorted_copy, sorted_quantile};
use crate::seed::{derived_rng, rng_from_seed, stream};

/// Smallest accepted number of bootstrap replicates.
pub const MIN_REPLICATES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    /// Percentile interval of `replicates`, widened if needed so that it
    /// contains `point`.
    pub fn percentile(replicates: &[f64], level: f64, point: f64) -> Self {
        let sorted = sorted_copy(replicates);
        let tail = 0.5 * (1.0 - level);
        Self {
            low: sorted_quantile(&sorted, tail).min(point),
            high: sorted_quantile(&sorted, 1.0 - tail).max(point),
            level,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.low <= v && v <= self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapSettings {
    pub replicates: usize,
    pub level: f64,
}

impl Default for BootstrapSettings {
    fn default() -> Self {
        Self {
            replicates: 1000,
            level: 0.95,
        }
    }
}

fn check_level(level: f64) -> Result<()> {
    if !(level > 0.0 && level < 1.0) {
        return Err(argument(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    Ok(())
}

/// Row indices drawn with replacement for replicate `b`.
pub fn resample_indices(n: usize, seed: u64, b: usize) -> Vec<usize> {
    let mut rng = derived_rng(seed, stream::BOOTSTRAP, b as u64);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Multiplicity of each row in a resample.
pub fn resample_counts(n: usize, indices: &[usize]) -> Vec<f64> {
    let mut counts = vec![0.0; n];
    for &i in indices {
        counts[i] += 1.0;
    }
    counts
}

/// Bootstrap replicates of a vector-valued statistic of the resampled rows.
///
/// Replicates run in parallel; replicate `b` draws its rows from a seed
/// derived from `(seed, b)`, so results do not depend on the thread count.
pub fn bootstrap_replicates<F>(
    n: usize,
    replicates: usize,
    seed: u64,
    statistic: F,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[usize]) -> Result<Vec<f64>> + Sync,
{
    if n == 0 {
        return Err(argument("bootstrap needs non-empty data"));
    }
    if replicates < MIN_REPLICATES {
        return Err(argument(format!(
            "bootstrap needs at least {MIN_REPLICATES} replicates, got {replicates}"
        )));
    }
    (0..replicates)
        .into_par_iter()
        .map(|b| {
            statistic(&resample_indices(n, seed, b)).map_err(|e| GsaError::Resample {
                replicate: b,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Percentile intervals for each component of a vector-valued statistic.
pub fn bootstrap_ci_multi<F>(
    n: usize,
    point: &[f64],
    settings: &BootstrapSettings,
    seed: u64,
    statistic: F,
) -> Result<Vec<ConfidenceInterval>>
where
    F: Fn(&[usize]) -> Result<Vec<f64>> + Sync,
{
    check_level(settings.level)?;
    let reps = bootstrap_replicates(n, settings.replicates, seed, statistic)?;
    Ok((0..point.len())
        .map(|c| {
            let column: Vec<f64> = reps.iter().map(|r| r[c]).collect();
            ConfidenceInterval::percentile(&column, settings.level, point[c])
        })
        .collect())
}

/// Percentile interval of a scalar statistic over `n` data rows.
pub fn bootstrap_ci<F>(
    n: usize,
    settings: &BootstrapSettings,
    seed: u64,
    statistic: F,
) -> Result<ConfidenceInterval>
where
    F: Fn(&[usize]) -> Result<f64> + Sync,
{
    let all: Vec<usize> = (0..n).collect();
    let point = statistic(&all)?;
    let ci = bootstrap_ci_multi(n, &[point], settings, seed, |rows| {
        statistic(rows).map(|v| vec![v])
    })?;
    Ok(ci[0])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JackknifeSettings {
    pub groups: usize,
    pub level: f64,
}

impl Default for JackknifeSettings {
    fn default() -> Self {
        Self {
            groups: 1000,
            level: 0.95,
        }
    }
}

/// Result of a delete-one-group jackknife.
#[derive(Debug, Clone, PartialEq)]
pub struct JackknifeResult {
    pub estimate: f64,
    pub std_error: f64,
    pub interval: ConfidenceInterval,
}

/// Delete-one-group jackknife of a bivariate statistic.
///
/// Rows are shuffled with `seed` and cut into `groups` contiguous blocks whose
/// sizes differ by at most one. The interval is `estimate +- z * se` with
/// `se^2 = (G - 1) / G * sum (theta_g - mean theta)^2`.
pub fn grouped_jackknife_ci<F>(
    x: &[f64],
    y: &[f64],
    settings: &JackknifeSettings,
    seed: u64,
    estimator: F,
) -> Result<JackknifeResult>
where
    F: Fn(&[f64], &[f64]) -> Result<f64> + Sync,
{
    check_level(settings.level)?;
    let n = x.len();
    if y.len() != n {
        return Err(argument(format!("length mismatch: {n} vs {}", y.len())));
    }
    let g = settings.groups;
    if g < 2 || n < 2 * g {
        return Err(argument(format!(
            "{n} points cannot form {g} jackknife groups of at least 2 points"
        )));
    }
    let estimate = estimator(x, y)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let bound = |j: usize| j * n / g;
    let thetas: Vec<f64> = (0..g)
        .into_par_iter()
        .map(|j| {
            let (lo, hi) = (bound(j), bound(j + 1));
            let keep = order[..lo].iter().chain(&order[hi..]);
            let xs: Vec<f64> = keep.clone().map(|&i| x[i]).collect();
            let ys: Vec<f64> = keep.map(|&i| y[i]).collect();
            estimator(&xs, &ys).map_err(|e| GsaError::Resample {
                replicate: j,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let centre = mean(&thetas);
    let ss: f64 = thetas.iter().map(|t| (t - centre).powi(2)).sum();
    let std_error = ((g as f64 - 1.0) / g as f64 * ss).sqrt();
    let z = std_normal_quantile(0.5 + 0.5 * settings.level);
    Ok(JackknifeResult {
        estimate,
        std_error,
        interval: ConfidenceInterval {
            low: estimate - z * std_error,
            high: estimate + z * std_error,
            level: settings.level,
        },
    })
}

/// Importance ranks: 1 for the largest value. Equal values keep declaration
/// order; NaN ranks last.
pub fn rank_indices(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| match (values[a].is_nan(), values[b].is_nan()) {
        (false, false) => values[b].partial_cmp(&values[a]).unwrap(),
        (x, y) => x.cmp(&y),
    });
    let mut ranks = vec![0; values.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r + 1;
    }
    ranks
}

/// Variable indices ordered from most to least important.
pub fn ranking_order(values: &[f64]) -> Vec<usize> {
    let ranks = rank_indices(values);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| ranks[i]);
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    SobolTotal,
    SobolMain,
    Mi,
    Delta,
    Pawn,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::SobolTotal,
        Method::SobolMain,
        Method::Mi,
        Method::Delta,
        Method::Pawn,
    ];

    /// The four indices compared in ranking studies.
    pub const RANKED: [Method; 4] = [Method::SobolTotal, Method::Mi, Method::Delta, Method::Pawn];

    pub fn name(self) -> &'static str {
        match self {
            Method::SobolTotal => "sobol_total",
            Method::SobolMain => "sobol_main",
            Method::Mi => "mi",
            Method::Delta => "delta",
            Method::Pawn => "pawn",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One sensitivity value with its interval and rank within its method.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEstimate {
    pub method: Method,
    pub variable: String,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub rank: usize,
}

/// Builds ranked estimates for one method. Without intervals the bounds
/// collapse onto the value.
pub fn ranked_estimates(
    method: Method,
    variables: &[String],
    values: &[f64],
    intervals: Option<&[ConfidenceInterval]>,
) -> Vec<IndexEstimate> {
    let ranks = rank_indices(values);
    variables
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let (ci_low, ci_high) =
                intervals.map_or((values[i], values[i]), |c| (c[i].low, c[i].high));
            IndexEstimate {
                method,
                variable: name.clone(),
                value: values[i],
                ci_low,
                ci_high,
                rank: ranks[i],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_follow_values_then_declaration_order() {
        assert_eq!(
            rank_indices(&[0.0090, 0.0987, 0.9203, 0.0222]),
            vec![4, 2, 1, 3]
        );
        assert_eq!(rank_indices(&[0.5; 4]), vec![1, 2, 3, 4]);
        assert_eq!(rank_indices(&[f64::NAN, 1.0]), vec![2, 1]);
        assert_eq!(
            ranking_order(&[0.0282, 0.8011, 0.6106, 0.0113]),
            vec![1, 2, 0, 3]
        );
    }

    #[test]
    fn constant_data_gives_zero_width() {
        let data = [3.5; 50];
        let ci = bootstrap_ci(50, &BootstrapSettings::default(), 1, |rows| {
            Ok(rows.iter().map(|&i| data[i]).sum::<f64>() / rows.len() as f64)
        })
        .unwrap();
        assert_eq!((ci.low, ci.high), (3.5, 3.5));
    }

    #[test]
    fn failing_statistic_reports_replicate() {
        let err = bootstrap_ci(10, &BootstrapSettings::default(), 1, |rows| {
            if rows.len() == 10 && rows[0] == rows[1] {
                Err(argument("boom"))
            } else {
                Ok(0.0)
            }
        });
        assert!(matches!(err, Err(GsaError::Resample { .. })));
    }

    #[test]
    fn rejects_bad_settings() {
        let s = BootstrapSettings {
            replicates: 10,
            level: 0.95,
        };
        assert!(bootstrap_ci(10, &s, 1, |_| Ok(0.0)).is_err());
        let x = [1.0; 10];
        let j = JackknifeSettings {
            groups: 6,
            level: 0.95,
        };
        assert!(grouped_jackknife_ci(&x, &x, &j, 1, |_, _| Ok(0.0)).is_err());
    }

    #[test]
    fn jackknife_of_mean_matches_standard_error() {
        let x: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64).collect();
        let j = JackknifeSettings {
            groups: 100,
            level: 0.95,
        };
        let res = grouped_jackknife_ci(&x, &x, &j, 5, |a, _| Ok(mean(a))).unwrap();
        let sd = crate::numeric::unbiased_variance(&x).unwrap().sqrt();
        let se = sd / (x.len() as f64).sqrt();
        assert!(
            (res.std_error / se - 1.0).abs() < 0.2,
            "{} {}",
            res.std_error,
            se
        );
        assert!(res.interval.contains(res.estimate));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::from_name(m.name()), Some(m));
        }
    }
}

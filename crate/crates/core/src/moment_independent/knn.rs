//! Nearest-neighbour estimators of differential entropy (Kozachenko-Leonenko)
//! and mutual information (Kraskov-Stoegbauer-Grassberger, first variant,
//! max-norm neighbourhoods).

use rayon::prelude::*;

use crate::error::{argument, GsaError, Result};
use crate::numeric::{digamma, mean, pairwise_sum, sorted_copy, unbiased_variance};

use super::{jittered, KnnSettings};

/// Differential entropy in nats from the k-th neighbour distances of a 1-D sample.
pub fn differential_entropy(y: &[f64], settings: &KnnSettings) -> Result<f64> {
    let k = settings.k;
    if k == 0 {
        return Err(argument("k must be positive"));
    }
    if y.len() < k + 2 {
        return Err(argument(format!(
            "entropy with k={k} needs at least {} values",
            k + 2
        )));
    }
    let noisy = jittered(y, settings.jitter_seed)?;
    let sorted = sorted_copy(&noisy);
    let n = sorted.len();
    let log_eps: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| kth_gap(&sorted, i, k).ln())
        .collect();
    if log_eps.iter().any(|v| !v.is_finite()) {
        return Err(GsaError::DegenerateData(
            "repeated values collapse neighbour distances".into(),
        ));
    }
    Ok(digamma(n as f64) - digamma(k as f64) + std::f64::consts::LN_2 + mean(&log_eps))
}

/// Distance from `sorted[i]` to its k-th nearest other element.
fn kth_gap(sorted: &[f64], i: usize, k: usize) -> f64 {
    let (mut left, mut right) = (i, i + 1);
    let mut gap = 0.0;
    for _ in 0..k {
        let dl = if left > 0 {
            sorted[i] - sorted[left - 1]
        } else {
            f64::INFINITY
        };
        let dr = if right < sorted.len() {
            sorted[right] - sorted[i]
        } else {
            f64::INFINITY
        };
        if dl <= dr {
            gap = dl;
            left -= 1;
        } else {
            gap = dr;
            right += 1;
        }
    }
    gap
}

fn standardized(v: &[f64]) -> Result<Vec<f64>> {
    let sd = unbiased_variance(v).map(f64::sqrt).unwrap_or(0.0);
    if !(sd > 0.0) {
        return Err(GsaError::DegenerateData(
            "constant variable in mutual information".into(),
        ));
    }
    let m = mean(v);
    Ok(v.iter().map(|x| (x - m) / sd).collect())
}

/// Mutual information `I(X;Y)` in nats.
///
/// Both variables are rescaled to unit variance and jittered before the
/// neighbour search. Small negative values are estimator bias and are
/// returned unchanged.
pub fn knn_mutual_information(x: &[f64], y: &[f64], settings: &KnnSettings) -> Result<f64> {
    let k = settings.k;
    if x.len() != y.len() {
        return Err(argument(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if k == 0 {
        return Err(argument("k must be positive"));
    }
    if x.len() < k + 2 {
        return Err(argument(format!(
            "mutual information with k={k} needs at least {} pairs",
            k + 2
        )));
    }
    let xs = jittered(&standardized(x)?, settings.jitter_seed)?;
    let ys = jittered(&standardized(y)?, settings.jitter_seed ^ 0x5bd1_e995)?;
    let n = xs.len();

    // points ordered by x for the neighbour sweep
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let px: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
    let py: Vec<f64> = order.iter().map(|&i| ys[i]).collect();
    let sorted_y = sorted_copy(&py);

    let terms: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|p| {
            let eps = kth_chebyshev(&px, &py, p, k);
            let nx = count_within(&px, px[p], eps);
            let ny = count_within(&sorted_y, py[p], eps);
            digamma(nx as f64 + 1.0) + digamma(ny as f64 + 1.0)
        })
        .collect();
    Ok(digamma(k as f64) + digamma(n as f64) - pairwise_sum(&terms) / n as f64)
}

/// k-th smallest max-norm distance from point `p` (points sorted by x).
fn kth_chebyshev(px: &[f64], py: &[f64], p: usize, k: usize) -> f64 {
    // best[0..k] kept sorted ascending
    let mut best = vec![f64::INFINITY; k];
    let (x0, y0) = (px[p], py[p]);
    let (mut l, mut r) = (p, p + 1);
    let (mut left_open, mut right_open) = (p > 0, r < px.len());
    while left_open || right_open {
        if left_open {
            let dx = x0 - px[l - 1];
            if dx >= best[k - 1] {
                left_open = false;
            } else {
                consider(&mut best, dx.max((y0 - py[l - 1]).abs()));
                l -= 1;
                left_open = l > 0;
            }
        }
        if right_open {
            let dx = px[r] - x0;
            if dx >= best[k - 1] {
                right_open = false;
            } else {
                consider(&mut best, dx.max((py[r] - y0).abs()));
                r += 1;
                right_open = r < px.len();
            }
        }
    }
    best[k - 1]
}

fn consider(best: &mut [f64], d: f64) {
    let k = best.len();
    if d < best[k - 1] {
        let mut j = k - 1;
        while j > 0 && best[j - 1] > d {
            best[j] = best[j - 1];
            j -= 1;
        }
        best[j] = d;
    }
}

/// Number of other points strictly within `eps` of `centre` in a sorted slice.
fn count_within(sorted: &[f64], centre: f64, eps: f64) -> usize {
    let lo = sorted.partition_point(|&v| v <= centre - eps);
    let hi = sorted.partition_point(|&v| v < centre + eps);
    (hi - lo).saturating_sub(1)
}

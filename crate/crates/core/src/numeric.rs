//! Small numeric helpers shared by the estimators.
//!
//! All reductions go through [`pairwise_sum`] so a result never depends on how
//! work was split across threads.

/// Pairwise (cascade) summation over a slice in index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if values.len() <= BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// Unbiased variance around the sample mean; `None` for fewer than two values.
pub fn unbiased_variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values);
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    Some(pairwise_sum(&sq) / (values.len() - 1) as f64)
}

/// Sample excess kurtosis (moment estimator, m4 / m2^2 - 3).
pub fn excess_kurtosis(values: &[f64]) -> f64 {
    let m = mean(values);
    let d2: Vec<f64> = values.iter().map(|v| (v - m).powi(2)).collect();
    let d4: Vec<f64> = d2.iter().map(|v| v * v).collect();
    let n = values.len() as f64;
    let m2 = pairwise_sum(&d2) / n;
    let m4 = pairwise_sum(&d4) / n;
    m4 / (m2 * m2) - 3.0
}

/// Linear-interpolation quantile (Hyndman-Fan type 7) of already sorted data.
pub fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn digamma(x: f64) -> f64 {
    statrs::function::gamma::digamma(x)
}

/// Trapezoidal rule on a (possibly non-uniform) grid.
pub fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    let parts: Vec<f64> = grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1]))
        .collect();
    pairwise_sum(&parts)
}

/// `n` evenly spaced points spanning `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Sort a copy of `values` with a total order (NaN last).
pub fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_small_and_large() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn quantile_interpolates() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(sorted_quantile(&s, 0.0), 1.0);
        assert_eq!(sorted_quantile(&s, 1.0), 4.0);
        assert!((sorted_quantile(&s, 0.5) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn variance_requires_two_values() {
        assert!(unbiased_variance(&[1.0]).is_none());
        assert_eq!(unbiased_variance(&[0.0, 2.0]), Some(2.0));
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = linspace(0.0, 2.0, 11);
        let v: Vec<f64> = g.iter().map(|x| 3.0 * x).collect();
        assert!((trapezoid(&g, &v) - 6.0).abs() < 1e-12);
    }
}

//! PAWN index: a statistic over conditioning intervals of the KS distance
//! between the conditional and the unconditional output CDF.
//!
//! The unconditional CDF is built from the full sample, so each interval's
//! KS distance carries a small positive bias of order `1/sqrt(n_j)`.

use rayon::prelude::*;

use crate::error::{argument, GsaError, Result};
use crate::partition::{partition, PartitionMode};

/// Minimum sample points per conditioning interval.
pub const MIN_POINTS_PER_INTERVAL: usize = 20;

/// Sup-distance between the empirical CDFs of two samples.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(argument("KS distance needs two non-empty samples"));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PawnStat {
    #[default]
    Mean,
    Median,
    Max,
}

impl PawnStat {
    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            PawnStat::Mean => values.iter().sum::<f64>() / values.len() as f64,
            PawnStat::Max => values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            PawnStat::Median => {
                let mut v = values.to_vec();
                v.sort_by(f64::total_cmp);
                let m = v.len() / 2;
                if v.len() % 2 == 1 {
                    v[m]
                } else {
                    0.5 * (v[m - 1] + v[m])
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PawnSettings {
    pub intervals: usize,
    pub stat: PawnStat,
    pub mode: PartitionMode,
}

impl Default for PawnSettings {
    fn default() -> Self {
        Self {
            intervals: 10,
            stat: PawnStat::Mean,
            mode: PartitionMode::EqualCount,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PawnEstimate {
    pub value: f64,
    pub per_interval_ks: Vec<f64>,
    pub stat: PawnStat,
}

/// Output ranks shared by every input column of one sample.
#[derive(Debug, Clone)]
pub struct PawnEstimator {
    settings: PawnSettings,
    /// Row indices sorted by output.
    order: Vec<usize>,
    /// Positions in `order` where a new run of equal outputs starts, plus `n`.
    group_starts: Vec<usize>,
}

impl PawnEstimator {
    pub fn new(y: &[f64], settings: PawnSettings) -> Result<Self> {
        if settings.intervals < 2 {
            return Err(argument("PAWN needs at least 2 conditioning intervals"));
        }
        let need = MIN_POINTS_PER_INTERVAL * settings.intervals;
        if y.len() < need {
            return Err(argument(format!(
                "PAWN with {} intervals needs at least {need} points, got {}",
                settings.intervals,
                y.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(GsaError::DegenerateData("non-finite output value".into()));
        }
        let mut order: Vec<usize> = (0..y.len()).collect();
        order.par_sort_by(|&a, &b| y[a].total_cmp(&y[b]));
        let mut group_starts = vec![0];
        for p in 1..order.len() {
            if y[order[p]] != y[order[p - 1]] {
                group_starts.push(p);
            }
        }
        group_starts.push(order.len());
        Ok(Self {
            settings,
            order,
            group_starts,
        })
    }

    pub fn settings(&self) -> PawnSettings {
        self.settings
    }

    /// Interval label of every row of the input column `x`.
    pub fn intervals_of(&self, x: &[f64]) -> Result<Vec<u32>> {
        if x.len() != self.order.len() {
            return Err(argument(format!(
                "length mismatch: {} vs {}",
                x.len(),
                self.order.len()
            )));
        }
        let classes = partition(x, self.settings.intervals, self.settings.mode)?;
        let mut labels = vec![0u32; x.len()];
        for (j, class) in classes.iter().enumerate() {
            for &i in class {
                labels[i] = j as u32;
            }
        }
        Ok(labels)
    }

    pub fn estimate(&self, x: &[f64]) -> Result<PawnEstimate> {
        let labels = self.intervals_of(x)?;
        self.estimate_labels(&labels, None)
    }

    /// PAWN from precomputed interval labels, optionally with row
    /// multiplicities (bootstrap counts). Intervals left empty by the
    /// weights are dropped from the statistic.
    pub fn estimate_labels(&self, labels: &[u32], weights: Option<&[f64]>) -> Result<PawnEstimate> {
        self.check_len(labels.len())?;
        if let Some(w) = weights {
            self.check_len(w.len())?;
        }
        let order = &self.order;
        match weights {
            None => self.sweep(|k| labels[order[k]], |_| 1.0),
            Some(w) => self.sweep(|k| labels[order[k]], |k| w[order[k]]),
        }
    }

    /// Labels rearranged into output order, for repeated weighted sweeps.
    pub fn ordered_labels(&self, labels: &[u32]) -> Result<Vec<u32>> {
        self.check_len(labels.len())?;
        Ok(self.order.iter().map(|&r| labels[r]).collect())
    }

    /// Like [`estimate_labels`](Self::estimate_labels), with labels and
    /// weights both indexed by position in output order.
    pub fn estimate_ordered(
        &self,
        ordered_labels: &[u32],
        ordered_weights: &[f64],
    ) -> Result<PawnEstimate> {
        self.check_len(ordered_labels.len())?;
        self.check_len(ordered_weights.len())?;
        self.sweep(|k| ordered_labels[k], |k| ordered_weights[k])
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.order.len() {
            return Err(argument(format!(
                "length mismatch: {len} vs {}",
                self.order.len()
            )));
        }
        Ok(())
    }

    fn sweep(
        &self,
        label: impl Fn(usize) -> u32,
        weight: impl Fn(usize) -> f64,
    ) -> Result<PawnEstimate> {
        let parts = self.settings.intervals;
        let mut size = vec![0.0; parts];
        for k in 0..self.order.len() {
            size[label(k) as usize] += weight(k);
        }
        let total: f64 = size.iter().sum();
        if !(total > 0.0) {
            return Err(GsaError::DegenerateData("sample carries no weight".into()));
        }
        // D_j(y) = F_j(y) - F(y) changes only at output values present in the
        // sample. Between visits to interval j, D_j decreases monotonically, so
        // its extremes occur just before and just after each visit.
        let mut count = vec![0.0; parts];
        let mut hi = vec![0.0f64; parts];
        let mut lo = vec![0.0f64; parts];
        let inv_size: Vec<f64> = size
            .iter()
            .map(|&s| if s > 0.0 { 1.0 / s } else { 0.0 })
            .collect();
        let inv_total = 1.0 / total;
        let mut cum = 0.0;
        if self.group_starts.len() == self.order.len() + 1 {
            // no tied outputs; a zero weight leaves D_j at a value it
            // already takes, so it needs no special case
            for k in 0..self.order.len() {
                let (j, wk) = (label(k) as usize, weight(k));
                lo[j] = lo[j].min(count[j] * inv_size[j] - cum * inv_total);
                count[j] += wk;
                cum += wk;
                let d = count[j] * inv_size[j] - cum * inv_total;
                hi[j] = hi[j].max(d);
                lo[j] = lo[j].min(d);
            }
            return Ok(self.finish(&size, &hi, &lo));
        }
        let mut touched: Vec<usize> = Vec::with_capacity(16);
        for g in self.group_starts.windows(2) {
            let before = cum;
            touched.clear();
            for k in g[0]..g[1] {
                let wk = weight(k);
                if wk == 0.0 {
                    continue;
                }
                let j = label(k) as usize;
                if !touched.contains(&j) {
                    touched.push(j);
                    let d = count[j] / size[j] - before / total;
                    lo[j] = lo[j].min(d);
                }
                count[j] += wk;
                cum += wk;
            }
            for &j in &touched {
                let d = count[j] / size[j] - cum / total;
                hi[j] = hi[j].max(d);
                lo[j] = lo[j].min(d);
            }
        }
        Ok(self.finish(&size, &hi, &lo))
    }

    fn finish(&self, size: &[f64], hi: &[f64], lo: &[f64]) -> PawnEstimate {
        let per_interval_ks: Vec<f64> = (0..size.len())
            .filter(|&j| size[j] > 0.0)
            .map(|j| hi[j].max(-lo[j]))
            .collect();
        PawnEstimate {
            value: self.settings.stat.apply(&per_interval_ks),
            per_interval_ks,
            stat: self.settings.stat,
        }
    }
}

/// PAWN index of the input column `x` for outputs `y`.
pub fn pawn_given_data(x: &[f64], y: &[f64], settings: PawnSettings) -> Result<PawnEstimate> {
    if x.len() != y.len() {
        return Err(argument(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    PawnEstimator::new(y, settings)?.estimate(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ks_hand_cases() {
        assert_eq!(
            ks_distance(&[1.0, 2.0, 3.0, 4.0], &[3.0, 4.0, 5.0, 6.0]).unwrap(),
            0.5
        );
        assert_eq!(ks_distance(&[1.0, 2.0], &[2.0, 1.0]).unwrap(), 0.0);
        assert_eq!(ks_distance(&[1.0, 2.0], &[3.0]).unwrap(), 1.0);
        assert!(ks_distance(&[], &[1.0]).is_err());
    }

    #[test]
    fn sweep_matches_merge_per_interval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let n = 2000;
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        // rounded outputs create many ties
        let y: Vec<f64> = x
            .iter()
            .map(|&v| {
                ((v * 3.0).sin() + rng.random::<f64>())
                    .mul_add(20.0, 0.0)
                    .round()
            })
            .collect();
        let est = PawnEstimator::new(&y, PawnSettings::default()).unwrap();
        let pawn = est.estimate(&x).unwrap();
        let classes = partition(&x, 10, PartitionMode::EqualCount).unwrap();
        for (j, class) in classes.iter().enumerate() {
            let cond: Vec<f64> = class.iter().map(|&i| y[i]).collect();
            let reference = ks_distance(&cond, &y).unwrap();
            assert!((pawn.per_interval_ks[j] - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_weights_match_expanded_sample() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 400;
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| v * v + 0.3 * rng.random::<f64>())
            .collect();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0..3) as f64).collect();
        let est = PawnEstimator::new(&y, PawnSettings::default()).unwrap();
        let labels = est.intervals_of(&x).unwrap();
        let weighted = est.estimate_labels(&labels, Some(&w)).unwrap();
        for j in 0..10u32 {
            let expand = |pred: &dyn Fn(usize) -> bool| -> Vec<f64> {
                (0..n)
                    .filter(|&i| pred(i))
                    .flat_map(|i| std::iter::repeat_n(y[i], w[i] as usize))
                    .collect()
            };
            let cond = expand(&|i| labels[i] == j);
            let all = expand(&|_| true);
            let reference = ks_distance(&cond, &all).unwrap();
            assert!((weighted.per_interval_ks[j as usize] - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn stats() {
        let v = [0.1, 0.4, 0.2, 0.3];
        assert!((PawnStat::Mean.apply(&v) - 0.25).abs() < 1e-15);
        assert!((PawnStat::Median.apply(&v) - 0.25).abs() < 1e-15);
        assert_eq!(PawnStat::Max.apply(&v), 0.4);
    }

    #[test]
    fn preconditions() {
        let y: Vec<f64> = (0..199).map(|i| i as f64).collect();
        assert!(pawn_given_data(&y, &y, PawnSettings::default()).is_err());
        let s = PawnSettings {
            intervals: 1,
            ..Default::default()
        };
        assert!(pawn_given_data(&y, &y, s).is_err());
    }
}

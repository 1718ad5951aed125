//! Given-data delta index.
//!
//! The input column is cut into `M` equal-count classes. For each class the
//! conditional output density is a Gaussian KDE; the marginal density is a
//! KDE of all outputs. Both are evaluated on a uniform grid spanning the
//! observed output range and
//!
//! ```text
//! delta = sum_m (n_m / 2N) * integral |f_Y - f_m| dy      (trapezoidal rule)
//! ```
//!
//! By default `M = min(ceil(N^(2 / (7 + tanh((1500 - N) / 500)))), 48)`, which
//! gives 18 classes at N = 5000.

use crate::error::{argument, GsaError, Result};
use crate::numeric::trapezoid;
use crate::partition::{partition, PartitionMode};

use super::kde::{kde_on_grid, silverman_bandwidth, UniformGrid};

/// Minimum points per class required by the estimator.
pub const MIN_POINTS_PER_CLASS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaSettings {
    /// Number of classes; `None` applies the sample-size rule.
    pub partitions: Option<usize>,
    pub grid_points: usize,
}

impl Default for DeltaSettings {
    fn default() -> Self {
        Self {
            partitions: None,
            grid_points: 1000,
        }
    }
}

impl DeltaSettings {
    pub fn partitions_for(&self, n: usize) -> usize {
        self.partitions.unwrap_or_else(|| delta_partitions_for(n))
    }
}

/// Sample-size rule for the number of conditioning classes.
pub fn delta_partitions_for(n: usize) -> usize {
    let n = n as f64;
    let exponent = 2.0 / (7.0 + ((1500.0 - n) / 500.0).tanh());
    (n.powf(exponent).ceil() as usize).clamp(2, 48)
}

/// Output sample prepared once (grid and marginal density) and reused for
/// every input column.
#[derive(Debug, Clone)]
pub struct DeltaEstimator {
    y: Vec<f64>,
    weights: Option<Vec<f64>>,
    grid: UniformGrid,
    grid_points: Vec<f64>,
    marginal: Vec<f64>,
    partitions: usize,
}

impl DeltaEstimator {
    pub fn new(y: &[f64], settings: &DeltaSettings) -> Result<Self> {
        Self::build(y, None, settings)
    }

    /// Same as [`DeltaEstimator::new`] with per-point multiplicities (bootstrap counts).
    pub fn weighted(y: &[f64], counts: &[f64], settings: &DeltaSettings) -> Result<Self> {
        if counts.len() != y.len() {
            return Err(argument("weights and outputs differ in length"));
        }
        Self::build(y, Some(counts.to_vec()), settings)
    }

    fn build(y: &[f64], weights: Option<Vec<f64>>, settings: &DeltaSettings) -> Result<Self> {
        let n = y.len();
        let partitions = settings.partitions_for(n);
        if partitions < 2 {
            return Err(argument("delta needs at least 2 classes"));
        }
        if n < MIN_POINTS_PER_CLASS * partitions {
            return Err(argument(format!(
                "delta with {partitions} classes needs at least {} points, got {n}",
                MIN_POINTS_PER_CLASS * partitions
            )));
        }
        if settings.grid_points < 2 {
            return Err(argument("delta grid needs at least 2 points"));
        }
        let active: Vec<f64> = match &weights {
            Some(w) => expand(y, w),
            None => y.to_vec(),
        };
        let (lo, hi) = active
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        if !(hi > lo) {
            return Err(GsaError::DegenerateData("output sample is constant".into()));
        }
        let bandwidth = silverman_bandwidth(&active).unwrap();
        let grid = UniformGrid::spanning(lo, hi, settings.grid_points);
        let marginal = kde_on_grid(y, weights.as_deref(), bandwidth, grid);
        Ok(Self {
            y: y.to_vec(),
            weights,
            grid,
            grid_points: grid.points(),
            marginal,
            partitions,
        })
    }

    pub fn partitions(&self) -> usize {
        self.partitions
    }

    /// Delta index of the input column `x` (same rows as the outputs).
    pub fn delta(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.y.len() {
            return Err(argument(format!(
                "length mismatch: {} vs {}",
                x.len(),
                self.y.len()
            )));
        }
        let classes = match &self.weights {
            None => partition(x, self.partitions, PartitionMode::EqualCount)?,
            Some(w) => weighted_classes(x, w, self.partitions),
        };
        let total: f64 = self
            .weights
            .as_ref()
            .map_or(self.y.len() as f64, |w| w.iter().sum());
        let mut delta = 0.0;
        for class in &classes {
            let ys: Vec<f64> = class.iter().map(|&i| self.y[i]).collect();
            let ws: Option<Vec<f64>> = self
                .weights
                .as_ref()
                .map(|w| class.iter().map(|&i| w[i]).collect());
            let mass: f64 = ws.as_ref().map_or(ys.len() as f64, |w| w.iter().sum());
            if mass == 0.0 {
                continue;
            }
            let expanded = match &ws {
                Some(w) => expand(&ys, w),
                None => ys.clone(),
            };
            let l1 = match silverman_bandwidth(&expanded) {
                Some(h) if h > 0.0 => {
                    let cond = kde_on_grid(&ys, ws.as_deref(), h, self.grid);
                    let diff: Vec<f64> = self
                        .marginal
                        .iter()
                        .zip(&cond)
                        .map(|(a, b)| (a - b).abs())
                        .collect();
                    trapezoid(&self.grid_points, &diff)
                }
                // point mass: disjoint from the smooth marginal
                _ => trapezoid(&self.grid_points, &self.marginal) + 1.0,
            };
            delta += mass / (2.0 * total) * l1;
        }
        Ok(delta)
    }
}

fn expand(values: &[f64], counts: &[f64]) -> Vec<f64> {
    values
        .iter()
        .zip(counts)
        .flat_map(|(&v, &c)| std::iter::repeat_n(v, c as usize))
        .collect()
}

/// Equal-mass classes over rows with integer multiplicities, cut at the same
/// positions as the unweighted partition. Rows with zero weight are skipped,
/// a row never straddles two classes and tied values share a class.
fn weighted_classes(x: &[f64], w: &[f64], parts: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..x.len()).filter(|&i| w[i] > 0.0).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let total: f64 = order.iter().map(|&i| w[i]).sum();
    let cuts: Vec<f64> = (1..parts)
        .map(|j| (j as f64 * total / parts as f64).round())
        .collect();
    let mut classes = vec![Vec::new(); parts];
    let mut acc = 0.0;
    let mut class = 0;
    let mut previous = f64::NAN;
    for i in order {
        if x[i] != previous {
            class = class.max(cuts.iter().filter(|&&c| c <= acc).count());
        }
        classes[class].push(i);
        acc += w[i];
        previous = x[i];
    }
    classes
}

/// Delta index of one input column.
pub fn delta_given_data(x: &[f64], y: &[f64], settings: &DeltaSettings) -> Result<f64> {
    DeltaEstimator::new(y, settings)?.delta(x)
}

//! Index studies over a grid of wind means.

use rayon::prelude::*;

use crate::error::{argument, Result};
use crate::resampling::Method;
use crate::seed::{derive_seed, stream};

use super::study::{run_point_study, PointStudy, StudySettings};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub points: Vec<PointStudy>,
    pub settings: StudySettings,
    pub seed: u64,
}

/// `start, start + step, ..., end` with values rounded to 1e-9 so that grid
/// points print cleanly. `end` is included when it lies on the grid.
pub fn sweep_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(argument(format!("sweep step must be positive, got {step}")));
    }
    if !(end >= start) {
        return Err(argument(format!("sweep range [{start}, {end}] is empty")));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + step * i as f64) * 1e9).round() / 1e9)
        .collect())
}

/// Seed of the study at wind mean `mu`, keyed by the value in 0.001 km/h
/// units so that a point gets the same seed in any grid containing it.
pub fn sweep_point_seed(master: u64, mu: f64) -> u64 {
    derive_seed(
        master,
        stream::SWEEP_POINT,
        (mu * 1000.0).round() as i64 as u64,
    )
}

pub fn sweep_mu(
    start: f64,
    end: f64,
    step: f64,
    settings: &StudySettings,
    seed: u64,
) -> Result<SweepResult> {
    let grid = sweep_grid(start, end, step)?;
    let points = grid
        .par_iter()
        .map(|&mu| run_point_study(mu, settings, sweep_point_seed(seed, mu)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        grid,
        points,
        settings: settings.clone(),
        seed,
    })
}

impl SweepResult {
    /// Index of `variable` for `method` at every grid point.
    pub fn series(&self, method: Method, variable: &str) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|p| {
                let i = p.indices.variable_index(variable)?;
                Ok(p.indices.method(method).estimates[i].value)
            })
            .collect()
    }
}

/// First wind mean at which `index(a) - index(b)` changes sign, refined by
/// linear interpolation between the bracketing grid points.
pub fn detect_crossover(
    sweep: &SweepResult,
    method: Method,
    var_a: &str,
    var_b: &str,
) -> Result<Option<f64>> {
    let a = sweep.series(method, var_a)?;
    let b = sweep.series(method, var_b)?;
    let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    Ok(crossover_of(&sweep.grid, &diff))
}

/// First sign change of `diff` over `grid`.
pub fn crossover_of(grid: &[f64], diff: &[f64]) -> Option<f64> {
    for k in 0..diff.len().saturating_sub(1) {
        let (d0, d1) = (diff[k], diff[k + 1]);
        if d0 == 0.0 {
            continue;
        }
        if d1 == 0.0 {
            // a touch at the next point only counts if the sign then flips
            if diff[k + 2..]
                .iter()
                .find(|v| **v != 0.0)
                .is_some_and(|v| v.signum() != d0.signum())
            {
                return Some(grid[k + 1]);
            }
            continue;
        }
        if d0.signum() != d1.signum() {
            return Some(grid[k] + (grid[k + 1] - grid[k]) * d0 / (d0 - d1));
        }
    }
    None
}

/// Grid value where `variable` reaches its largest index for `method`.
pub fn peak_location(sweep: &SweepResult, method: Method, variable: &str) -> Result<Option<f64>> {
    let s = sweep.series(method, variable)?;
    Ok(s.iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((i, v)),
        })
        .map(|(i, _)| sweep.grid[i]))
}

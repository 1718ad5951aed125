//! Gaussian kernel density estimation with the normal-reference (Silverman)
//! bandwidth `h = (4/3)^(1/5) * sd * n^(-1/5)`.

use crate::error::{argument, GsaError, Result};
use crate::numeric::{linspace, trapezoid, unbiased_variance};

/// Kernel contributions beyond this many bandwidths are dropped (exp(-32) ~ 1e-14).
const CUTOFF: f64 = 8.0;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Density values on an ordered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityEstimate {
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }
}

pub fn silverman_bandwidth(data: &[f64]) -> Option<f64> {
    let sd = unbiased_variance(data)?.sqrt();
    Some((4.0 / 3.0f64).powf(0.2) * sd * (data.len() as f64).powf(-0.2))
}

/// Direct evaluation of the KDE at one point (O(n)).
pub fn kde_at(data: &[f64], bandwidth: f64, x: f64) -> f64 {
    let s: f64 = data
        .iter()
        .map(|d| {
            let u = (x - d) / bandwidth;
            (-0.5 * u * u).exp()
        })
        .sum();
    s * INV_SQRT_2PI / (bandwidth * data.len() as f64)
}

/// A uniform evaluation grid `start + i * step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn spanning(lo: f64, hi: f64, len: usize) -> Self {
        Self {
            start: lo,
            step: (hi - lo) / (len - 1) as f64,
            len,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(
            self.start,
            self.start + self.step * (self.len - 1) as f64,
            self.len,
        )
    }
}

/// Exact Gaussian KDE on a uniform grid; each data point scatters into the
/// grid cells within the kernel cutoff. Weights may repeat points.
pub fn kde_on_grid(
    data: &[f64],
    weights: Option<&[f64]>,
    bandwidth: f64,
    grid: UniformGrid,
) -> Vec<f64> {
    let mut out = vec![0.0; grid.len];
    let reach = CUTOFF * bandwidth;
    let mut total = 0.0;
    for (idx, &d) in data.iter().enumerate() {
        let w = weights.map_or(1.0, |w| w[idx]);
        if w == 0.0 {
            continue;
        }
        total += w;
        let first = ((d - reach - grid.start) / grid.step).ceil().max(0.0) as usize;
        let last = ((d + reach - grid.start) / grid.step).floor();
        if last < 0.0 {
            continue;
        }
        let last = (last as usize).min(grid.len - 1);
        for (g, slot) in out.iter_mut().enumerate().take(last + 1).skip(first) {
            let u = (grid.start + grid.step * g as f64 - d) / bandwidth;
            *slot += w * (-0.5 * u * u).exp();
        }
    }
    let norm = INV_SQRT_2PI / (bandwidth * total);
    out.iter_mut().for_each(|v| *v *= norm);
    out
}

/// KDE curve on `points` grid nodes spanning the data padded by 3 bandwidths,
/// computed by linear binning followed by discrete convolution. Suited to
/// large samples where the exact sum is too costly.
pub fn binned_density(data: &[f64], points: usize) -> Result<DensityEstimate> {
    if points < 2 {
        return Err(argument("density grid needs at least 2 points"));
    }
    let bandwidth =
        silverman_bandwidth(data).ok_or_else(|| argument("density needs at least 2 points"))?;
    if !(bandwidth > 0.0) {
        return Err(GsaError::DegenerateData("all values identical".into()));
    }
    let (lo, hi) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let grid = UniformGrid::spanning(lo - 3.0 * bandwidth, hi + 3.0 * bandwidth, points);
    let mut counts = vec![0.0; points];
    for &d in data {
        let pos = (d - grid.start) / grid.step;
        let i = (pos.floor() as usize).min(points - 2);
        let frac = pos - i as f64;
        counts[i] += 1.0 - frac;
        counts[i + 1] += frac;
    }
    let reach = ((CUTOFF * bandwidth / grid.step).ceil() as usize).min(points - 1);
    let kernel: Vec<f64> = (0..=reach)
        .map(|l| {
            let u = l as f64 * grid.step / bandwidth;
            (-0.5 * u * u).exp()
        })
        .collect();
    let norm = INV_SQRT_2PI / (bandwidth * data.len() as f64);
    let density = (0..points)
        .map(|g| {
            let lo = g.saturating_sub(reach);
            let hi = (g + reach).min(points - 1);
            (lo..=hi)
                .map(|j| counts[j] * kernel[g.abs_diff(j)])
                .sum::<f64>()
                * norm
        })
        .collect();
    Ok(DensityEstimate {
        grid: grid.points(),
        density,
        bandwidth,
    })
}

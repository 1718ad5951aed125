//! Model definitions: the segmented dry eucalypt spread-rate model and the
//! analytic test functions used to validate the estimators.
//!
//! Spread rate `R` (m/h) switches formula at a wind speed of 5 km/h:
//!
//! ```text
//! R = 30 * phi                                              U <= 5
//! R = (30 + 1.03 * 1.531 (U-5)^0.858 FHS_s^0.93 (FHS_ns H_ns)^0.637) * phi   U > 5
//! phi    = 18.35 (2.76 + 0.124 RH - 0.0187 T)^-1.495
//! FHS_s  = 3.39  (1 - exp(-0.03  * 12 FA))
//! FHS_ns = 2.5   (1 - exp(-0.22  * 12 FA))
//! H_ns   = 23.33 (1 - exp(-0.025 * 12 FA))
//! ```
//!
//! The 1.03 factor scales the wind term only, so both branches agree at U = 5.

use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{argument, domain, Result};
use crate::sampling::RandomVariableSpec;

/// Wind speed (km/h) at which the spread-rate formula switches.
pub const WIND_THRESHOLD: f64 = 5.0;

/// Column order of the fire model inputs.
pub const FIRE_VARIABLES: [&str; 4] = ["T", "RH", "U", "FA"];
/// Index of the wind speed (segment indicator) among [`FIRE_VARIABLES`].
pub const WIND_INDEX: usize = 2;

type EvalFn = dyn Fn(&[f64]) -> Result<f64> + Send + Sync;

/// Marks which input switches the model between segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentIndicator {
    pub index: usize,
    pub threshold: f64,
}

/// A deterministic scalar model over independent truncated-normal inputs.
#[derive(Clone)]
pub struct ModelDefinition {
    pub name: String,
    pub input_specs: Vec<RandomVariableSpec>,
    pub indicator: Option<SegmentIndicator>,
    evaluate: Arc<EvalFn>,
}

impl fmt::Debug for ModelDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelDefinition")
            .field("name", &self.name)
            .field("input_specs", &self.input_specs)
            .field("indicator", &self.indicator)
            .finish_non_exhaustive()
    }
}

impl ModelDefinition {
    pub fn new<F>(
        name: impl Into<String>,
        input_specs: Vec<RandomVariableSpec>,
        evaluate: F,
    ) -> Self
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            input_specs,
            indicator: None,
            evaluate: Arc::new(evaluate),
        }
    }

    pub fn with_indicator(mut self, index: usize, threshold: f64) -> Result<Self> {
        let spec = self
            .input_specs
            .get(index)
            .ok_or_else(|| argument(format!("indicator index {index} out of range")))?;
        if !spec.contains(threshold) {
            return Err(argument(format!(
                "threshold {threshold} outside acceptable range of {}",
                spec.name
            )));
        }
        self.indicator = Some(SegmentIndicator { index, threshold });
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.input_specs.len()
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.input_specs.iter().map(|s| s.name.clone()).collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(argument(format!(
                "model {} expects {} inputs, got {}",
                self.name,
                self.dimension(),
                x.len()
            )));
        }
        (self.evaluate)(x)
    }

    /// Evaluate every row of `inputs` (rows are independent, evaluated in parallel).
    pub fn evaluate_rows(&self, inputs: &Array2<f64>) -> Result<Vec<f64>> {
        if inputs.ncols() != self.dimension() {
            return Err(argument(format!(
                "model {} expects {} inputs, got {}",
                self.name,
                self.dimension(),
                inputs.ncols()
            )));
        }
        let rows: Vec<_> = inputs.outer_iter().collect();
        rows.par_iter()
            .map(|row| match row.as_slice() {
                Some(s) => self.evaluate(s),
                None => self.evaluate(&row.to_vec()),
            })
            .collect()
    }

    /// Same model with every output multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let inner = Arc::clone(&self.evaluate);
        Self {
            name: format!("{}*{factor}", self.name),
            input_specs: self.input_specs.clone(),
            indicator: self.indicator,
            evaluate: Arc::new(move |x| inner(x).map(|y| y * factor)),
        }
    }
}

/// Fuel moisture function `phi` of temperature (deg C) and relative humidity (%).
pub fn fuel_moisture_coeff(temperature: f64, humidity: f64) -> Result<f64> {
    let base = 2.76 + 0.124 * humidity - 0.0187 * temperature;
    if !(base > 0.0) {
        return Err(domain(format!(
            "moisture base {base} not positive (T={temperature}, RH={humidity})"
        )));
    }
    Ok(18.35 * base.powf(-1.495))
}

/// Fuel hazard terms for a fuel age in years.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuelHazard {
    pub surface: f64,
    pub near_surface: f64,
    pub near_surface_height: f64,
}

/// Fuel-age growth curves; `12 * FA` converts years to months.
pub fn fuel_hazard(fuel_age: f64) -> FuelHazard {
    let months = 12.0 * fuel_age;
    FuelHazard {
        surface: 3.39 * (1.0 - (-0.03 * months).exp()),
        near_surface: 2.5 * (1.0 - (-0.22 * months).exp()),
        near_surface_height: 23.33 * (1.0 - (-0.025 * months).exp()),
    }
}

/// Segmented spread rate (m/h) for temperature, humidity, wind speed and fuel age.
pub fn dry_eucalypt_rate(temperature: f64, humidity: f64, wind: f64, fuel_age: f64) -> Result<f64> {
    let phi = fuel_moisture_coeff(temperature, humidity)?;
    if wind <= WIND_THRESHOLD {
        return Ok(30.0 * phi);
    }
    let h = fuel_hazard(fuel_age);
    let wind_term = 1.531
        * (wind - WIND_THRESHOLD).powf(0.858)
        * h.surface.powf(0.93)
        * (h.near_surface * h.near_surface_height).powf(0.637)
        * 1.03;
    Ok((30.0 + wind_term) * phi)
}

pub fn ishigami(x1: f64, x2: f64, x3: f64, a: f64, b: f64) -> f64 {
    x1.sin() + a * x2.sin().powi(2) + b * x3.powi(4) * x1.sin()
}

pub fn linear_gaussian(x: &[f64], coeffs: &[f64]) -> f64 {
    x.iter().zip(coeffs).map(|(x, c)| x * c).sum()
}

/// Input laws of the fire model. The wind mean is set per study, so the mean
/// stored in `wind` is only a default.
#[derive(Debug, Clone, PartialEq)]
pub struct FireInputs {
    pub temperature: RandomVariableSpec,
    pub humidity: RandomVariableSpec,
    pub wind: RandomVariableSpec,
    pub fuel_age: RandomVariableSpec,
}

impl FireInputs {
    /// Specs in model column order with the wind mean replaced by `mu_wind`.
    pub fn specs(&self, mu_wind: f64) -> Result<Vec<RandomVariableSpec>> {
        let mut wind = self.wind.clone();
        wind.mean = mu_wind;
        let specs = vec![
            self.temperature.clone(),
            self.humidity.clone(),
            wind,
            self.fuel_age.clone(),
        ];
        for s in &specs {
            s.validate()?;
        }
        Ok(specs)
    }

    pub fn model(&self, mu_wind: f64) -> Result<ModelDefinition> {
        dry_eucalypt_model(self.specs(mu_wind)?)
    }
}

impl Default for FireInputs {
    fn default() -> Self {
        let spec = |name: &str, mean, sd, lo, hi| {
            RandomVariableSpec::new(name, mean, sd, lo, hi).expect("valid default")
        };
        Self {
            temperature: spec("T", 25.0, 4.0, 10.0, 40.0),
            humidity: spec("RH", 20.0, 2.0, 14.0, 26.0),
            wind: spec("U", 4.7, 0.5, 0.5, 9.5),
            fuel_age: spec("FA", 4.0, 0.8, 1.5, 6.5),
        }
    }
}

/// Default input laws of the fire model with wind mean `mu_wind`.
pub fn dry_eucalypt_specs(mu_wind: f64) -> Result<Vec<RandomVariableSpec>> {
    FireInputs::default().specs(mu_wind)
}

/// Fire model over the given specs (ordered T, RH, U, FA).
pub fn dry_eucalypt_model(specs: Vec<RandomVariableSpec>) -> Result<ModelDefinition> {
    if specs.len() != 4 {
        return Err(argument("dry eucalypt model takes exactly 4 inputs"));
    }
    ModelDefinition::new("dry_eucalypt", specs, |x| {
        dry_eucalypt_rate(x[0], x[1], x[2], x[3])
    })
    .with_indicator(WIND_INDEX, WIND_THRESHOLD)
}

/// Ishigami function on three inputs that are uniform on [-pi, pi] for all
/// practical purposes (normal with a huge standard deviation, truncated).
pub fn ishigami_model(a: f64, b: f64) -> ModelDefinition {
    let pi = std::f64::consts::PI;
    let specs = (1..=3)
        .map(|i| RandomVariableSpec::new(format!("x{i}"), 0.0, 1e8, -pi, pi).unwrap())
        .collect();
    ModelDefinition::new("ishigami", specs, move |x| {
        Ok(ishigami(x[0], x[1], x[2], a, b))
    })
}

/// Linear model over standard-normal inputs (truncated at +-10 sd).
pub fn linear_gaussian_model(coeffs: Vec<f64>) -> ModelDefinition {
    let specs = (1..=coeffs.len())
        .map(|i| RandomVariableSpec::new(format!("x{i}"), 0.0, 1.0, -10.0, 10.0).unwrap())
        .collect();
    ModelDefinition::new("linear_gaussian", specs, move |x| {
        Ok(linear_gaussian(x, &coeffs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moisture_coefficient_hand_values() {
        assert!((fuel_moisture_coeff(25.0, 20.0).unwrap() - 1.774).abs() < 1e-3);
        assert!((fuel_moisture_coeff(10.0, 14.0).unwrap() - 2.066).abs() < 1e-3);
        assert!((fuel_moisture_coeff(40.0, 26.0).unwrap() - 1.543).abs() < 2e-3);
    }

    #[test]
    fn moisture_coefficient_rejects_non_positive_base() {
        assert!(fuel_moisture_coeff(200.0, 0.0).is_err());
    }

    #[test]
    fn fuel_hazard_limits_and_hand_values() {
        let h = fuel_hazard(1e6);
        assert_eq!(
            (h.surface, h.near_surface, h.near_surface_height),
            (3.39, 2.5, 23.33)
        );
        let h = fuel_hazard(1e-12);
        assert!(h.surface < 1e-11 && h.near_surface < 1e-10 && h.near_surface_height < 1e-10);
        let h = fuel_hazard(4.0);
        assert!((h.surface - 2.587).abs() < 1e-3);
        assert!((h.near_surface - 2.500).abs() < 1e-3);
        assert!((h.near_surface_height - 16.31).abs() < 1e-2);
    }

    #[test]
    fn spread_rate_hand_values() {
        assert!((dry_eucalypt_rate(25.0, 20.0, 4.0, 4.0).unwrap() - 53.2).abs() < 0.05);
        assert!((dry_eucalypt_rate(25.0, 20.0, 6.0, 4.0).unwrap() - 125.0).abs() < 0.1);
    }

    #[test]
    fn spread_rate_continuous_at_threshold() {
        for &(t, rh, fa) in &[(25.0, 20.0, 4.0), (10.0, 14.0, 1.5), (40.0, 26.0, 6.5)] {
            let at = dry_eucalypt_rate(t, rh, 5.0, fa).unwrap();
            let eps: f64 = 1e-6;
            let above = dry_eucalypt_rate(t, rh, 5.0 + eps, fa).unwrap();
            // wind term grows like eps^0.858; bound it generously
            assert!((above - at).abs() < 100.0 * eps.powf(0.858), "{at} {above}");
        }
    }

    #[test]
    fn ishigami_fixed_points() {
        use std::f64::consts::FRAC_PI_2;
        assert_eq!(ishigami(0.0, 0.0, 0.0, 7.0, 0.1), 0.0);
        assert!((ishigami(FRAC_PI_2, 0.0, 0.0, 7.0, 0.1) - 1.0).abs() < 1e-15);
        assert!((ishigami(FRAC_PI_2, FRAC_PI_2, 1.0, 7.0, 0.1) - 8.1).abs() < 1e-12);
    }

    #[test]
    fn linear_fixed_points() {
        assert_eq!(linear_gaussian(&[3.0, 9.0], &[1.0, 0.0]), 3.0);
        assert_eq!(linear_gaussian(&[3.0, 9.0], &[0.0, 0.0]), 0.0);
        assert_eq!(linear_gaussian(&[1.0, 1.0], &[2.0, 1.0]), 3.0);
    }

    #[test]
    fn indicator_threshold_must_be_in_range() {
        let specs = dry_eucalypt_specs(4.7).unwrap();
        let m = ModelDefinition::new("m", specs, |_| Ok(0.0));
        assert!(m.clone().with_indicator(2, 12.0).is_err());
        assert!(m.clone().with_indicator(7, 5.0).is_err());
        assert!(m.with_indicator(2, 5.0).is_ok());
    }

    #[test]
    fn row_evaluation_checks_width() {
        let m = dry_eucalypt_model(dry_eucalypt_specs(4.7).unwrap()).unwrap();
        assert!(m.evaluate_rows(&Array2::zeros((3, 2))).is_err());
    }
}

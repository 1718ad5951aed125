//! `key = value` run configuration.
//!
//! One setting per line, `#` starts a comment, unknown keys are rejected.
//! Omitted keys keep their defaults. [`RunConfig::serialize`] writes every key,
//! so a serialized config parses back to the same value.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gsa_core::experiments::{ConditionalSettings, SampleSizes, StudySettings};
use gsa_core::models::{FireInputs, FIRE_VARIABLES};
use gsa_core::moment_independent::DeltaSettings;
use gsa_core::partition::PartitionMode;
use gsa_core::pawn::{PawnSettings, PawnStat};
use gsa_core::resampling::{BootstrapSettings, JackknifeSettings};
use gsa_core::sampling::RandomVariableSpec;

use crate::error::CliError;

/// Divisor applied to sample sizes and replicate counts by the fast profile.
pub const FAST_DIVISOR: usize = 10;

/// Smallest per-method sample size on the convergence grid.
pub const MIN_CONVERGENCE_SIZE: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Paper,
    Fast,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Paper => "paper",
            Profile::Fast => "fast",
        }
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Profile::Paper),
            "fast" => Ok(Profile::Fast),
            other => Err(format!(
                "unknown profile `{other}` (expected paper or fast)"
            )),
        }
    }
}

/// Truncated-normal law of one input as it appears in the config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputLaw {
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
}

impl InputLaw {
    fn of(spec: &RandomVariableSpec) -> Self {
        Self {
            mean: spec.mean,
            sd: spec.std_dev,
            lower: spec.lower,
            upper: spec.upper,
        }
    }

    fn spec(&self, name: &str) -> Result<RandomVariableSpec, String> {
        RandomVariableSpec::new(name, self.mean, self.sd, self.lower, self.upper)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: String,
    pub profile: Profile,
    pub seed: u64,
    pub out: PathBuf,
    pub mu_wind: f64,
    /// Laws of T, RH, U and FA. The wind mean is taken from `mu_wind`.
    pub inputs: [InputLaw; 4],
    pub sobol_n: usize,
    pub mi_n: usize,
    pub delta_n: usize,
    pub pawn_n: usize,
    pub conditional_n: usize,
    pub knn_k: usize,
    /// `None` picks the class count from the sample size.
    pub delta_partitions: Option<usize>,
    pub delta_grid: usize,
    pub pawn_intervals: usize,
    pub pawn_stat: PawnStat,
    pub pawn_partition: PartitionMode,
    pub bootstrap_replicates: usize,
    pub jackknife_groups: usize,
    pub ci_level: f64,
    pub confidence_intervals: bool,
    pub null_dummies: usize,
    pub sweep_start: f64,
    pub sweep_end: f64,
    pub sweep_step: f64,
    pub sweep_confidence_intervals: bool,
    pub conditional_variables: Vec<String>,
    pub curve_points: usize,
    pub convergence_scales: Vec<f64>,
    pub convergence_repetitions: usize,
    pub timing_sizes: Vec<usize>,
    pub timing_runs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let inputs = FireInputs::default();
        let sizes = SampleSizes::REFERENCE;
        let study = StudySettings::default();
        let conditional = ConditionalSettings::default();
        Self {
            model: "dry_eucalypt".into(),
            profile: Profile::Paper,
            seed: 1,
            out: PathBuf::from("results"),
            mu_wind: 4.7,
            inputs: [
                InputLaw::of(&inputs.temperature),
                InputLaw::of(&inputs.humidity),
                InputLaw::of(&inputs.wind),
                InputLaw::of(&inputs.fuel_age),
            ],
            sobol_n: sizes.sobol,
            mi_n: sizes.mi,
            delta_n: sizes.delta,
            pawn_n: sizes.pawn,
            conditional_n: conditional.samples,
            knn_k: study.knn_k,
            delta_partitions: study.delta.partitions,
            delta_grid: study.delta.grid_points,
            pawn_intervals: study.pawn.intervals,
            pawn_stat: study.pawn.stat,
            pawn_partition: study.pawn.mode,
            bootstrap_replicates: study.bootstrap.replicates,
            jackknife_groups: study.jackknife.groups,
            ci_level: study.bootstrap.level,
            confidence_intervals: true,
            null_dummies: study.null_dummies,
            sweep_start: 2.0,
            sweep_end: 8.0,
            sweep_step: 0.1,
            sweep_confidence_intervals: false,
            conditional_variables: FIRE_VARIABLES.iter().map(|s| s.to_string()).collect(),
            curve_points: conditional.curve_points,
            convergence_scales: vec![0.05, 0.1, 0.25, 0.5, 1.0],
            convergence_repetitions: 100,
            timing_sizes: vec![1000, 2000, 5000, 10_000, 20_000, 50_000],
            timing_runs: 5,
        }
    }
}

/// A failed cross-value check and the keys that can fix it.
struct Violation {
    keys: Vec<String>,
    message: String,
}

const INPUT_PREFIXES: [&str; 4] = ["t", "rh", "u", "fa"];

fn parse_value<T: FromStr>(raw: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| format!("cannot parse `{raw}`: {e}"))
}

fn parse_list<T: FromStr>(raw: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    raw.split(',')
        .map(|item| parse_value(item.trim()))
        .collect()
}

fn parse_bool(raw: &str) -> Result<bool, String> {
    match raw {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false, got `{other}`")),
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn stat_name(stat: PawnStat) -> &'static str {
    match stat {
        PawnStat::Mean => "mean",
        PawnStat::Median => "median",
        PawnStat::Max => "max",
    }
}

fn partition_name(mode: PartitionMode) -> &'static str {
    match mode {
        PartitionMode::EqualCount => "equal_count",
        PartitionMode::EqualWidth => "equal_width",
    }
}

impl RunConfig {
    /// Reads and validates a config file.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        let mut lines: HashMap<String, usize> = HashMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config {
                line: Some(line_no),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if lines.insert(key.to_string(), line_no).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
            config
                .set(key, value)
                .map_err(|m| err(format!("{key}: {m}")))?;
        }
        config.check().map_err(|v| CliError::Config {
            line: v
                .keys
                .iter()
                .filter_map(|k| lines.get(k.as_str()).copied())
                .min(),
            message: v.message,
        })?;
        Ok(config)
    }

    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        if let Some((prefix, field)) = key.split_once('_') {
            if let Some(k) = INPUT_PREFIXES.iter().position(|p| *p == prefix) {
                let law = &mut self.inputs[k];
                let slot = match field {
                    "mean" if k != 2 => &mut law.mean,
                    "sd" => &mut law.sd,
                    "lower" => &mut law.lower,
                    "upper" => &mut law.upper,
                    _ => return Err("unknown key".into()),
                };
                *slot = parse_value(value)?;
                return Ok(());
            }
        }
        match key {
            "model" => self.model = value.to_string(),
            "profile" => self.profile = value.parse()?,
            "seed" => self.seed = parse_value(value)?,
            "out" => self.out = PathBuf::from(value),
            "mu_wind" => self.mu_wind = parse_value(value)?,
            "sobol_n" => self.sobol_n = parse_value(value)?,
            "mi_n" => self.mi_n = parse_value(value)?,
            "delta_n" => self.delta_n = parse_value(value)?,
            "pawn_n" => self.pawn_n = parse_value(value)?,
            "conditional_n" => self.conditional_n = parse_value(value)?,
            "knn_k" => self.knn_k = parse_value(value)?,
            "delta_partitions" => {
                self.delta_partitions = match value {
                    "auto" => None,
                    v => Some(parse_value(v)?),
                }
            }
            "delta_grid" => self.delta_grid = parse_value(value)?,
            "pawn_intervals" => self.pawn_intervals = parse_value(value)?,
            "pawn_stat" => {
                self.pawn_stat = match value {
                    "mean" => PawnStat::Mean,
                    "median" => PawnStat::Median,
                    "max" => PawnStat::Max,
                    other => return Err(format!("unknown statistic `{other}`")),
                }
            }
            "pawn_partition" => {
                self.pawn_partition = match value {
                    "equal_count" => PartitionMode::EqualCount,
                    "equal_width" => PartitionMode::EqualWidth,
                    other => return Err(format!("unknown partition mode `{other}`")),
                }
            }
            "bootstrap_replicates" => self.bootstrap_replicates = parse_value(value)?,
            "jackknife_groups" => self.jackknife_groups = parse_value(value)?,
            "ci_level" => self.ci_level = parse_value(value)?,
            "confidence_intervals" => self.confidence_intervals = parse_bool(value)?,
            "null_dummies" => self.null_dummies = parse_value(value)?,
            "sweep_start" => self.sweep_start = parse_value(value)?,
            "sweep_end" => self.sweep_end = parse_value(value)?,
            "sweep_step" => self.sweep_step = parse_value(value)?,
            "sweep_confidence_intervals" => self.sweep_confidence_intervals = parse_bool(value)?,
            "conditional_variables" => {
                self.conditional_variables =
                    value.split(',').map(|v| v.trim().to_string()).collect()
            }
            "curve_points" => self.curve_points = parse_value(value)?,
            "convergence_scales" => self.convergence_scales = parse_list(value)?,
            "convergence_repetitions" => self.convergence_repetitions = parse_value(value)?,
            "timing_sizes" => self.timing_sizes = parse_list(value)?,
            "timing_runs" => self.timing_runs = parse_value(value)?,
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Checks the invariants that span values; see [`Violation`].
    pub fn validate(&self) -> Result<(), CliError> {
        self.check().map_err(|v| CliError::Config {
            line: None,
            message: v.message,
        })
    }

    fn check(&self) -> Result<(), Violation> {
        let fail = |keys: Vec<String>, message: String| Err(Violation { keys, message });
        let one = |k: &str| vec![k.to_string()];
        if self.model != "dry_eucalypt" {
            return fail(
                one("model"),
                format!(
                    "unknown model `{}` (only dry_eucalypt is available)",
                    self.model
                ),
            );
        }
        let counts = [
            ("sobol_n", self.sobol_n),
            ("mi_n", self.mi_n),
            ("delta_n", self.delta_n),
            ("pawn_n", self.pawn_n),
            ("conditional_n", self.conditional_n),
            ("knn_k", self.knn_k),
            ("delta_grid", self.delta_grid),
            ("pawn_intervals", self.pawn_intervals),
            ("bootstrap_replicates", self.bootstrap_replicates),
            ("jackknife_groups", self.jackknife_groups),
            ("curve_points", self.curve_points),
            ("convergence_repetitions", self.convergence_repetitions),
            ("timing_runs", self.timing_runs),
        ];
        if let Some((key, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return fail(one(key), format!("{key} must be positive"));
        }
        if self.delta_partitions == Some(0) {
            return fail(
                one("delta_partitions"),
                "delta_partitions must be positive or auto".into(),
            );
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return fail(
                one("ci_level"),
                format!("ci_level {} must lie in (0, 1)", self.ci_level),
            );
        }
        if !(self.sweep_step > 0.0) || !(self.sweep_start <= self.sweep_end) {
            return fail(
                vec![
                    "sweep_start".into(),
                    "sweep_end".into(),
                    "sweep_step".into(),
                ],
                "sweep needs sweep_step > 0 and sweep_start <= sweep_end".into(),
            );
        }
        if self.convergence_scales.is_empty() || self.convergence_scales.iter().any(|s| !(*s > 0.0))
        {
            return fail(
                one("convergence_scales"),
                "convergence_scales must be positive".into(),
            );
        }
        if self.timing_sizes.is_empty() || self.timing_sizes.contains(&0) {
            return fail(one("timing_sizes"), "timing_sizes must be positive".into());
        }
        if let Some(v) = self
            .conditional_variables
            .iter()
            .find(|v| !FIRE_VARIABLES.contains(&v.as_str()))
        {
            return fail(
                one("conditional_variables"),
                format!("unknown conditional variable `{v}`"),
            );
        }
        for (k, prefix) in INPUT_PREFIXES.iter().enumerate() {
            let law = if k == 2 {
                InputLaw {
                    mean: self.mu_wind,
                    ..self.inputs[k]
                }
            } else {
                self.inputs[k]
            };
            if let Err(message) = law.spec(FIRE_VARIABLES[k]) {
                let mut keys: Vec<String> = ["mean", "sd", "lower", "upper"]
                    .iter()
                    .map(|f| format!("{prefix}_{f}"))
                    .collect();
                if k == 2 {
                    keys.push("mu_wind".into());
                }
                return fail(keys, message);
            }
        }
        Ok(())
    }

    /// Every key with its current value, in a stable order.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = vec![
            ("model".into(), self.model.clone()),
            ("profile".into(), self.profile.name().into()),
            ("seed".into(), self.seed.to_string()),
            ("out".into(), self.out.display().to_string()),
            ("mu_wind".into(), self.mu_wind.to_string()),
        ];
        for (prefix, law) in INPUT_PREFIXES.iter().zip(&self.inputs) {
            if *prefix != "u" {
                out.push((format!("{prefix}_mean"), law.mean.to_string()));
            }
            out.push((format!("{prefix}_sd"), law.sd.to_string()));
            out.push((format!("{prefix}_lower"), law.lower.to_string()));
            out.push((format!("{prefix}_upper"), law.upper.to_string()));
        }
        let rest: Vec<(&str, String)> = vec![
            ("sobol_n", self.sobol_n.to_string()),
            ("mi_n", self.mi_n.to_string()),
            ("delta_n", self.delta_n.to_string()),
            ("pawn_n", self.pawn_n.to_string()),
            ("conditional_n", self.conditional_n.to_string()),
            ("knn_k", self.knn_k.to_string()),
            (
                "delta_partitions",
                self.delta_partitions
                    .map_or("auto".into(), |m| m.to_string()),
            ),
            ("delta_grid", self.delta_grid.to_string()),
            ("pawn_intervals", self.pawn_intervals.to_string()),
            ("pawn_stat", stat_name(self.pawn_stat).into()),
            ("pawn_partition", partition_name(self.pawn_partition).into()),
            (
                "bootstrap_replicates",
                self.bootstrap_replicates.to_string(),
            ),
            ("jackknife_groups", self.jackknife_groups.to_string()),
            ("ci_level", self.ci_level.to_string()),
            (
                "confidence_intervals",
                self.confidence_intervals.to_string(),
            ),
            ("null_dummies", self.null_dummies.to_string()),
            ("sweep_start", self.sweep_start.to_string()),
            ("sweep_end", self.sweep_end.to_string()),
            ("sweep_step", self.sweep_step.to_string()),
            (
                "sweep_confidence_intervals",
                self.sweep_confidence_intervals.to_string(),
            ),
            (
                "conditional_variables",
                self.conditional_variables.join(","),
            ),
            ("curve_points", self.curve_points.to_string()),
            ("convergence_scales", join(&self.convergence_scales)),
            (
                "convergence_repetitions",
                self.convergence_repetitions.to_string(),
            ),
            ("timing_sizes", join(&self.timing_sizes)),
            ("timing_runs", self.timing_runs.to_string()),
        ];
        out.extend(rest.into_iter().map(|(k, v)| (k.to_string(), v)));
        out
    }

    pub fn serialize(&self) -> String {
        self.entries()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    fn divisor(&self) -> usize {
        match self.profile {
            Profile::Paper => 1,
            Profile::Fast => FAST_DIVISOR,
        }
    }

    pub fn fire_inputs(&self) -> Result<FireInputs, String> {
        let [t, rh, u, fa] = &self.inputs;
        Ok(FireInputs {
            temperature: t.spec("T")?,
            humidity: rh.spec("RH")?,
            wind: InputLaw {
                mean: self.mu_wind,
                ..*u
            }
            .spec("U")?,
            fuel_age: fa.spec("FA")?,
        })
    }

    /// Sample sizes after the profile is applied.
    pub fn sample_sizes(&self) -> SampleSizes {
        SampleSizes {
            sobol: self.sobol_n,
            mi: self.mi_n,
            delta: self.delta_n,
            pawn: self.pawn_n,
        }
        .divided_by(self.divisor())
    }

    pub fn study_settings(&self, with_ci: bool) -> Result<StudySettings, CliError> {
        let d = self.divisor();
        Ok(StudySettings {
            inputs: self.fire_inputs().map_err(CliError::config)?,
            sizes: self.sample_sizes(),
            knn_k: self.knn_k,
            delta: DeltaSettings {
                partitions: self.delta_partitions,
                grid_points: self.delta_grid,
            },
            pawn: PawnSettings {
                intervals: self.pawn_intervals,
                stat: self.pawn_stat,
                mode: self.pawn_partition,
            },
            bootstrap: BootstrapSettings {
                replicates: (self.bootstrap_replicates / d)
                    .max(gsa_core::resampling::MIN_REPLICATES),
                level: self.ci_level,
            },
            jackknife: JackknifeSettings {
                groups: (self.jackknife_groups / d).max(2),
                level: self.ci_level,
            },
            with_ci,
            null_dummies: self.null_dummies,
        })
    }

    pub fn conditional_settings(&self) -> Result<ConditionalSettings, CliError> {
        Ok(ConditionalSettings {
            inputs: self.fire_inputs().map_err(CliError::config)?,
            samples: self.conditional_n / self.divisor(),
            knn_k: self.knn_k,
            curve_points: self.curve_points,
        })
    }

    /// Convergence grid after the profile is applied, with every size raised
    /// to at least [`MIN_CONVERGENCE_SIZE`].
    pub fn convergence_grid(&self) -> Vec<SampleSizes> {
        let base = self.sample_sizes();
        let floor = |n: usize| n.max(MIN_CONVERGENCE_SIZE);
        self.convergence_scales
            .iter()
            .map(|&s| {
                let g = base.scaled(s);
                SampleSizes {
                    sobol: floor(g.sobol),
                    mi: floor(g.mi),
                    delta: floor(g.delta),
                    pawn: floor(g.pawn),
                }
            })
            .collect()
    }

    pub fn timing_sizes(&self) -> Vec<usize> {
        self.timing_sizes
            .iter()
            .map(|n| n / self.divisor())
            .collect()
    }
}

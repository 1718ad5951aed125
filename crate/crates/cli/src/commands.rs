//! The five study commands. Each writes its tables into the output directory
//! and finishes with `manifest_<command>.json`.

use gsa_core::experiments::{
    conditional_profile, convergence_study, detect_crossover, peak_location, run_point_study,
    sweep_mu, timing_study, OutputSummary,
};
use gsa_core::resampling::{IndexEstimate, Method};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{format_number as num, Artifacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Indices,
    Sweep,
    Conditional,
    Convergence,
    Timing,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Indices => "indices",
            Command::Sweep => "sweep",
            Command::Conditional => "conditional",
            Command::Convergence => "convergence",
            Command::Timing => "timing",
        }
    }
}

/// Variable pairs whose crossovers are reported by `sweep`.
pub const CROSSOVER_PAIRS: [(&str, &str); 2] = [("U", "RH"), ("FA", "U")];

/// Case labels of a conditional profile, matching the fix offsets.
pub const CASES: [&str; 5] = ["m2sd", "m1sd", "mean", "p1sd", "p2sd"];

/// Runs `command` and returns the names of the files written.
pub fn run(command: Command, config: &RunConfig) -> Result<Vec<String>, CliError> {
    let mut out = Artifacts::create(&config.out)?;
    let (seeds, deterministic) = match command {
        Command::Indices => (indices(config, &mut out)?, true),
        Command::Sweep => (sweep(config, &mut out)?, true),
        Command::Conditional => (conditional(config, &mut out)?, true),
        Command::Convergence => (convergence(config, &mut out)?, true),
        Command::Timing => (timing(config, &mut out)?, false),
    };
    out.finish(command.name(), config, seeds, deterministic)
}

fn estimate_row(prefix: &[String], e: &IndexEstimate) -> Vec<String> {
    let mut row = prefix.to_vec();
    row.extend([
        e.method.name().to_string(),
        e.variable.clone(),
        num(e.value),
        num(e.ci_low),
        num(e.ci_high),
        e.rank.to_string(),
    ]);
    row
}

fn indices(config: &RunConfig, out: &mut Artifacts) -> Result<Value, CliError> {
    let settings = config.study_settings(config.confidence_intervals)?;
    let point = run_point_study(config.mu_wind, &settings, config.seed)?;
    let study = &point.indices;
    for w in &study.warnings {
        eprintln!("warning: {w}");
    }

    let rows: Vec<Vec<String>> = study
        .methods
        .iter()
        .flat_map(|m| m.estimates.iter().map(|e| estimate_row(&[], e)))
        .collect();
    out.csv(
        "indices.csv",
        &["method", "variable", "value", "ci_low", "ci_high", "rank"],
        &rows,
    )?;

    let floors: Vec<Vec<String>> = study
        .methods
        .iter()
        .map(|m| vec![m.method.name().to_string(), num(m.null_floor)])
        .collect();
    out.csv(
        "indices_null_levels.csv",
        &["method", "null_level"],
        &floors,
    )?;

    let mi = study.values(Method::Mi);
    let normalized: Vec<Vec<String>> = study
        .variables
        .iter()
        .zip(&mi)
        .zip(&study.normalized_mi)
        .map(|((v, eta), n)| vec![v.clone(), num(*eta), num(n.rho), n.clamped.to_string()])
        .collect();
    out.csv(
        "indices_normalized_mi.csv",
        &["variable", "eta", "rho", "clamped"],
        &normalized,
    )?;

    for m in &study.methods {
        let comments = vec![
            format!("{} at mu_wind = {}", m.method, num(config.mu_wind)),
            format!("x: input number ({})", study.variables.join(", ")),
            "y: index value".to_string(),
        ];
        let points: Vec<(f64, f64)> = m
            .estimates
            .iter()
            .enumerate()
            .map(|(i, e)| ((i + 1) as f64, e.value))
            .collect();
        out.dat(&format!("indices_{}.dat", m.method), &comments, &points)?;
    }
    Ok(json!({ "master": config.seed, "mu_wind": config.mu_wind }))
}

fn sweep(config: &RunConfig, out: &mut Artifacts) -> Result<Value, CliError> {
    let settings = config.study_settings(config.sweep_confidence_intervals)?;
    let sweep = sweep_mu(
        config.sweep_start,
        config.sweep_end,
        config.sweep_step,
        &settings,
        config.seed,
    )?;

    let mut rows = Vec::new();
    for p in &sweep.points {
        let prefix = [
            num(p.mu_wind),
            p.stage.map_or("none", |s| s.name()).to_string(),
        ];
        for m in &p.indices.methods {
            rows.extend(m.estimates.iter().map(|e| estimate_row(&prefix, e)));
        }
    }
    out.csv(
        "sweep.csv",
        &[
            "mu_wind", "stage", "method", "variable", "value", "ci_low", "ci_high", "rank",
        ],
        &rows,
    )?;

    let mut crossings = Vec::new();
    for (a, b) in CROSSOVER_PAIRS {
        for m in Method::ALL {
            let c = detect_crossover(&sweep, m, a, b)?;
            crossings.push(vec![
                m.name().to_string(),
                a.to_string(),
                b.to_string(),
                c.map(num).unwrap_or_default(),
            ]);
        }
    }
    out.csv(
        "sweep_crossovers.csv",
        &["method", "variable_a", "variable_b", "mu_wind"],
        &crossings,
    )?;

    let variables = sweep.points[0].indices.variables.clone();
    let mut peaks = Vec::new();
    for m in Method::ALL {
        for v in &variables {
            let at = peak_location(&sweep, m, v)?;
            peaks.push(vec![
                m.name().to_string(),
                v.clone(),
                at.map(num).unwrap_or_default(),
            ]);
        }
    }
    out.csv(
        "sweep_peaks.csv",
        &["method", "variable", "peak_mu_wind"],
        &peaks,
    )?;

    let agreement: Vec<Vec<String>> = sweep
        .points
        .iter()
        .map(|p| {
            vec![
                num(p.mu_wind),
                p.indices.rankings_identical().to_string(),
                p.indices.screened_rankings_agree().to_string(),
            ]
        })
        .collect();
    out.csv(
        "sweep_agreement.csv",
        &["mu_wind", "rankings_identical", "screened_agree"],
        &agreement,
    )?;

    for m in Method::ALL {
        for v in &variables {
            let series = sweep.series(m, v)?;
            let points: Vec<(f64, f64)> = sweep.grid.iter().copied().zip(series).collect();
            let comments = vec![
                format!("{m} of {v}"),
                "x: mu_wind".to_string(),
                "y: index value".to_string(),
            ];
            out.dat(&format!("sweep_{m}_{v}.dat"), &comments, &points)?;
        }
    }

    let points: Vec<Value> = sweep
        .points
        .iter()
        .map(|p| json!({ "mu_wind": p.mu_wind, "seed": p.seed }))
        .collect();
    Ok(json!({ "master": config.seed, "points": points }))
}

fn summary_row(variable: &str, case: &str, fix: Option<f64>, s: &OutputSummary) -> Vec<String> {
    vec![
        variable.to_string(),
        case.to_string(),
        fix.map(num).unwrap_or_default(),
        num(s.variance),
        num(s.entropy),
        num(s.excess_kurtosis),
    ]
}

fn curves(
    out: &mut Artifacts,
    variable: &str,
    case: &str,
    s: &OutputSummary,
) -> Result<(), CliError> {
    let pdf: Vec<(f64, f64)> = s
        .pdf
        .grid
        .iter()
        .copied()
        .zip(s.pdf.density.iter().copied())
        .collect();
    let comments = vec![
        format!("output density, {variable} {case}"),
        "x: rate of spread".to_string(),
        "y: density".to_string(),
    ];
    out.dat(
        &format!("conditional_pdf_{variable}_{case}.dat"),
        &comments,
        &pdf,
    )?;
    let cdf: Vec<(f64, f64)> = s
        .pdf
        .grid
        .iter()
        .copied()
        .zip(s.cdf.iter().copied())
        .collect();
    let comments = vec![
        format!("output CDF, {variable} {case}"),
        "x: rate of spread".to_string(),
        "y: cumulative probability".to_string(),
    ];
    out.dat(
        &format!("conditional_cdf_{variable}_{case}.dat"),
        &comments,
        &cdf,
    )
}

fn conditional(config: &RunConfig, out: &mut Artifacts) -> Result<Value, CliError> {
    let settings = config.conditional_settings()?;
    let mut rows = Vec::new();
    for variable in &config.conditional_variables {
        let p = conditional_profile(variable, config.mu_wind, &settings, config.seed)?;
        rows.push(summary_row(variable, "baseline", None, &p.baseline));
        curves(out, variable, "baseline", &p.baseline)?;
        for ((case, fix), s) in CASES.iter().zip(&p.fix_values).zip(&p.fixed) {
            rows.push(summary_row(variable, case, Some(*fix), s));
            curves(out, variable, case, s)?;
        }
    }
    out.csv(
        "conditional.csv",
        &[
            "variable",
            "case",
            "fix_value",
            "variance",
            "entropy",
            "excess_kurtosis",
        ],
        &rows,
    )?;
    Ok(json!({ "master": config.seed, "mu_wind": config.mu_wind }))
}

fn convergence(config: &RunConfig, out: &mut Artifacts) -> Result<Value, CliError> {
    let settings = config.study_settings(false)?;
    let grid = config.convergence_grid();
    let result = convergence_study(
        config.mu_wind,
        &grid,
        config.convergence_repetitions,
        &settings,
        config.seed,
    )?;

    let mut rows = Vec::new();
    for c in &result.cells {
        let prefix =
            [c.sizes.sobol, c.sizes.mi, c.sizes.delta, c.sizes.pawn].map(|n| n.to_string());
        for ((v, value), rank) in result.variables.iter().zip(&c.mean_values).zip(&c.ranks) {
            let mut row = prefix.to_vec();
            row.extend([
                c.method.name().to_string(),
                v.clone(),
                num(*value),
                rank.to_string(),
                num(c.disagreement),
            ]);
            rows.push(row);
        }
    }
    out.csv(
        "convergence.csv",
        &[
            "sobol_n",
            "mi_n",
            "delta_n",
            "pawn_n",
            "method",
            "variable",
            "mean_value",
            "rank",
            "disagreement",
        ],
        &rows,
    )?;

    let instability: Vec<Vec<String>> = Method::ALL
        .iter()
        .map(|&m| vec![m.name().to_string(), num(result.instability_rate(m))])
        .collect();
    out.csv(
        "convergence_instability.csv",
        &["method", "instability_rate"],
        &instability,
    )?;

    for m in Method::ALL {
        let cells = result.cells_for(m);
        for (i, v) in result.variables.iter().enumerate() {
            let points: Vec<(f64, f64)> = cells
                .iter()
                .map(|c| (c.sizes.get(m) as f64, c.mean_values[i]))
                .collect();
            let comments = vec![
                format!("{m} of {v}, mean over {} repetitions", result.repetitions),
                "x: sample size".to_string(),
                "y: mean index value".to_string(),
            ];
            out.dat(&format!("convergence_{m}_{v}.dat"), &comments, &points)?;
        }
    }
    Ok(json!({
        "master": config.seed,
        "mu_wind": config.mu_wind,
        "repetitions": config.convergence_repetitions,
    }))
}

fn timing(config: &RunConfig, out: &mut Artifacts) -> Result<Value, CliError> {
    let settings = config.study_settings(false)?;
    let cells = timing_study(
        config.mu_wind,
        &config.timing_sizes(),
        config.timing_runs,
        &settings,
        config.seed,
    )?;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            vec![
                c.method.name().to_string(),
                c.samples.to_string(),
                num(c.median_seconds),
                c.runs.len().to_string(),
            ]
        })
        .collect();
    out.csv(
        "timing.csv",
        &["method", "samples", "median_seconds", "runs"],
        &rows,
    )?;
    for m in Method::RANKED {
        let points: Vec<(f64, f64)> = cells
            .iter()
            .filter(|c| c.method == m)
            .map(|c| (c.samples as f64, c.median_seconds))
            .collect();
        let comments = vec![
            format!("{m} wall-clock time"),
            "x: sample size".to_string(),
            "y: median seconds".to_string(),
        ];
        out.dat(&format!("timing_{m}.dat"), &comments, &points)?;
    }
    Ok(json!({ "master": config.seed, "mu_wind": config.mu_wind }))
}

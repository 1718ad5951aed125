//! Command-line driver: config loading, thread setup and the five study
//! commands that write CSV tables, plot data and a manifest.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

pub use commands::{run, Command};
pub use config::{Profile, RunConfig};
pub use error::CliError;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "GSA_THREADS";

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub profile: Option<Profile>,
}

pub fn load_config(overrides: &Overrides) -> Result<RunConfig, CliError> {
    let mut config = match &overrides.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(out) = &overrides.out {
        config.out = out.clone();
    }
    if let Some(profile) = overrides.profile {
        config.profile = profile;
    }
    config.validate()?;
    Ok(config)
}

/// Sizes the global rayon pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::config(format!(
                "{THREADS_ENV} must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot set up {threads} threads: {e}")))
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gsa_cli::{
    configure_threads, load_config, run, CliError, Command, Overrides, Profile, THREADS_ENV,
};

/// Sensitivity studies of the dry-eucalypt fire-spread model.
#[derive(Parser)]
#[command(name = "gsa", version, after_help = format!("Set {THREADS_ENV} to cap the number of worker threads."))]
struct Cli {
    /// Key = value config file; omitted keys keep their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed, overrides the config file.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Output directory, overrides the config file.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// `paper` or `fast` (sample sizes divided by 10).
    #[arg(long, global = true, value_name = "PROFILE")]
    profile: Option<Profile>,
    #[command(subcommand)]
    command: Action,
}

#[derive(Subcommand)]
enum Action {
    /// All indices at one wind mean, with intervals and null levels.
    Indices,
    /// Index study over a grid of wind means.
    Sweep,
    /// Output variance, entropy and density with one input held fixed.
    Conditional,
    /// Mean indices and ranking stability over a grid of sample sizes.
    Convergence,
    /// Wall-clock cost of each method.
    Timing,
}

fn execute(cli: Cli) -> Result<Vec<String>, CliError> {
    let overrides = Overrides {
        config: cli.config,
        seed: cli.seed,
        out: cli.out,
        profile: cli.profile,
    };
    let config = load_config(&overrides)?;
    configure_threads()?;
    let command = match cli.command {
        Action::Indices => Command::Indices,
        Action::Sweep => Command::Sweep,
        Action::Conditional => Command::Conditional,
        Action::Convergence => Command::Convergence,
        Action::Timing => Command::Timing,
    };
    let files = run(command, &config)?;
    println!("wrote {} files to {}", files.len(), config.out.display());
    Ok(files)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gsa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

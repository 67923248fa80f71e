//! `fracsym`: command-line driver for the concentration comparison experiments.

mod commands;
mod config;
mod selftest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ConfigError, ExperimentConfig};

#[derive(Debug, Parser)]
#[command(name = "fracsym", version, about = "Mass-concentration comparisons for spectral fractional Laplacians")]
#[command(after_help = "Any config key may also be given as --key=value; it overrides the config file.")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Seed for `random` presets.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Power of γ in the ball's time stepping.
    #[arg(long, global = true, value_name = "sigma|half")]
    gamma_exponent: Option<String>,

    /// Compare the two median parts separately when the median does not move with y.
    #[arg(long, global = true)]
    split_mode: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stationary comparison of the domain solution against the ball solution.
    EllipticCompare,
    /// Per-step comparison of the implicit time discretisation.
    ParabolicCompare,
    /// Dirichlet-to-Neumann residuals and per-mode flux of the extension.
    ExtensionCheck,
    /// Decreasing rearrangement of a `measure,value` CSV.
    Rearrange {
        /// CSV with one `measure,value` row per cell; a header row is optional.
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
    /// Quick internal consistency suites.
    Selftest,
}

/// Flags the argument parser owns; other `--key=value` pairs are config overrides.
const FLAGS: &[&str] = &["config", "out", "seed", "gamma-exponent", "split-mode", "input", "help", "version"];

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) | Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Numerical(m) => write!(f, "{m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::Config(e.0)
    }
}

impl From<fracsym::Error> for Failure {
    fn from(e: fracsym::Error) -> Failure {
        use fracsym::Error as E;
        match e {
            E::Numerical(_) | E::GridMismatch => Failure::Numerical(e.to_string()),
            E::InvalidParameter { .. }
            | E::LengthMismatch { .. }
            | E::IncompatibleData { .. }
            | E::DominanceViolated { .. }
            | E::SupportTooLarge { .. } => Failure::Config(e.to_string()),
        }
    }
}

fn load_config(cli: &Cli, overrides: Vec<(String, String)>) -> Result<ExperimentConfig, Failure> {
    let mut map = match &cli.config {
        Some(path) => config::read_file(path)?,
        None => Default::default(),
    };
    map.extend(overrides);
    if let Some(seed) = cli.seed {
        map.insert("seed".into(), seed.to_string());
    }
    if let Some(g) = &cli.gamma_exponent {
        map.insert("gamma_exponent".into(), g.clone());
    }
    if cli.split_mode {
        map.insert("split_mode".into(), "true".into());
    }
    if let Some(out) = &cli.out {
        map.insert("out".into(), out.display().to_string());
    }
    Ok(ExperimentConfig::from_map(&map)?)
}

fn run(cli: &Cli, overrides: Vec<(String, String)>) -> Result<bool, Failure> {
    let cfg = load_config(cli, overrides)?;
    match &cli.command {
        Command::EllipticCompare => commands::elliptic(&cfg),
        Command::ParabolicCompare => commands::parabolic(&cfg),
        Command::ExtensionCheck => commands::extension(&cfg),
        Command::Rearrange { input } => commands::rearrange(&cfg, input),
        Command::Selftest => selftest::run(&cfg),
    }
}

fn main() -> ExitCode {
    let (args, overrides) = config::split_overrides(std::env::args().collect(), FLAGS);
    let cli = Cli::parse_from(args);
    match run(&cli, overrides) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fracsym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line front end for `brillouin-tap`: reads a flat key=value
//! configuration, runs one of the sweeps and writes a CSV or JSON dataset
//! that records every parameter it was produced with.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{read_config_file, split_pair, Format, RunConfig};
use output::Dataset;

#[derive(Debug, Parser)]
#[command(name = "brillouin-tap", version, about = "Eavesdropper detection limits for a Brillouin-probed fiber")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat key=value configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Override one configuration key (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_name = "csv|json")]
    pub format: Option<Format>,

    /// Monte Carlo seed.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Stein, photon-threshold and heterodyne exponents over the ρ sweep.
    Exponents,
    /// Minimum detectable tap, probe budget and leaked data over the ρ sweep.
    Scaling,
    /// Monte Carlo estimator variance per scheme against the Cramér–Rao floors.
    Estimate,
    /// Couplings and channel matrices of a single segment.
    Segment,
}

impl Cli {
    /// Merges file, `--set` and flag settings, in that order.
    pub fn run_config(&self) -> Result<RunConfig> {
        let mut pairs = match &self.config {
            Some(path) => read_config_file(path)?,
            None => Vec::new(),
        };
        for s in &self.set {
            pairs.push(split_pair(s)?);
        }
        if let Some(p) = &self.out {
            pairs.push(("out".into(), p.display().to_string()));
        }
        if let Some(f) = self.format {
            pairs.push(("format".into(), f.to_string()));
        }
        if let Some(s) = self.seed {
            pairs.push(("seed".into(), s.to_string()));
        }
        if let Some(n) = self.threads {
            pairs.push(("threads".into(), n.to_string()));
        }
        RunConfig::from_pairs(&pairs)
    }
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Dataset> {
    match command {
        Command::Exponents => commands::exponents(cfg),
        Command::Scaling => commands::scaling(cfg),
        Command::Estimate => commands::estimate(cfg),
        Command::Segment => commands::segment(cfg),
    }
}

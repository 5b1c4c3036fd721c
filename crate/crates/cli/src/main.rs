use std::process::ExitCode;

use anyhow::Result;
use brillouin_tap_cli::{run_command, Cli};
use clap::Parser;

fn run(cli: &Cli) -> Result<bool> {
    let cfg = cli.run_config()?;
    if let Some(n) = cfg.threads {
        // sweeps use the global pool; Monte Carlo gets the count directly
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let ds = run_command(cli.command, &cfg)?;
    ds.write(cfg.format, cfg.out.as_deref())?;
    for f in &ds.failures {
        eprintln!("warning: {f}");
    }
    Ok(ds.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

//! `qadd <experiment> [--param k=v ...] --out PATH --seed N`

mod experiments;
mod output;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use serde_json::json;

use experiments::Experiment;
use output::{config_path, write_file};
use params::Params;
use qadd_core::Error;

#[derive(Parser, Debug)]
#[command(name = "qadd", version, about = "Quantum channel additivity experiments")]
struct Cli {
    #[arg(value_enum)]
    experiment: Experiment,
    /// Experiment parameter `key=value`; repeatable.
    #[arg(long = "param", short = 'p', value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// User-correctable failures exit with 2, everything else with 1.
fn is_precondition(err: &anyhow::Error) -> bool {
    matches!(
        err.downcast_ref::<Error>(),
        Some(Error::Precondition(_) | Error::InvalidParameter(_) | Error::Parse(_) | Error::DimensionMismatch(_))
    )
}

fn write_config(cli: &Cli, params: Option<&Params>, status: &str) -> Result<()> {
    let config = json!({
        "experiment": cli.experiment,
        "params": params.map(|p| p.resolved().clone()),
        "raw_params": cli.params,
        "seed": cli.seed,
        "out": cli.out,
        "status": status,
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_file(&config_path(&cli.out), &format!("{}\n", serde_json::to_string_pretty(&config)?))
}

fn execute(cli: &Cli) -> Result<()> {
    let mut params = Params::parse(&cli.params)?;
    match experiments::run(cli.experiment, &mut params, cli.seed) {
        Ok(out) => {
            write_file(&cli.out, &out.render()?)?;
            write_config(cli, Some(&params), "ok")
        }
        Err(err) => {
            if is_precondition(&err) && cli.experiment.is_json() {
                let report = json!({ "experiment": cli.experiment, "error": err.to_string(), "kind": "precondition" });
                write_file(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
            }
            write_config(cli, Some(&params), "error")?;
            Err(err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qadd: {err:#}");
            ExitCode::from(if is_precondition(&err) { 2 } else { 1 })
        }
    }
}

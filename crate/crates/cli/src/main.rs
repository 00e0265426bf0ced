use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geoharmonic_cli::acceptance::{flatten, selftest};
use geoharmonic_cli::config::{ExperimentConfig, ExperimentId, Format, DEFAULT_SEED};
use geoharmonic_cli::emit::{emit_results, render};
use geoharmonic_cli::experiments::{defaults, describe, run_experiment};
use geoharmonic_cli::record::{all_pass, ResultRecord};
use geoharmonic_cli::{HarnessError, Result};

#[derive(Parser)]
#[command(name = "geoharmonic", version, about = "Run geoharmonic verification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output file; defaults to `output.path` in the config, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        seed: Option<u64>,
        /// Override a config field, e.g. `--set N=16` or `--set integrator.h=1e-3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List experiments and their parameters.
    List,
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the CSV records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_records(records: &[ResultRecord], format: Format, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(path) => emit_results(records, format, path),
        None => std::io::stdout()
            .write_all(render(records, format)?.as_bytes())
            .map_err(|e| HarnessError::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out, format, seed, mut overrides } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", config.display())))?;
            if let Some(seed) = seed {
                overrides.push(format!("seed={seed}"));
            }
            let config = ExperimentConfig::from_json_with_overrides(&text, &overrides)?;
            let records = run_experiment(&config)?;
            let format = format.unwrap_or(config.output.format);
            write_records(&records, format, out.as_ref().or(config.output.path.as_ref()))?;
            Ok(all_pass(&records))
        }
        Command::List => {
            for id in ExperimentId::ALL {
                let params: Vec<String> = defaults(id).iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<18} {}", id.name(), describe(id));
                if !params.is_empty() {
                    println!("{:<18} defaults: {}", "", params.join(" "));
                }
            }
            Ok(true)
        }
        Command::Selftest { seed, out } => {
            let criteria = selftest(seed)?;
            for c in &criteria {
                eprintln!("{}", c.summary());
            }
            write_records(&flatten(&criteria), Format::Csv, out.as_ref())?;
            Ok(criteria.iter().all(|c| c.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

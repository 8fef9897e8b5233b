use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use msolv_cli::{emit_report, run_experiment, ExperimentConfig, ExperimentError, Registry};

#[derive(Parser, Debug)]
#[command(name = "msolv", version, about = "Exact finite-level checks for m-step solvable quotients")]
struct Cli {
    /// Experiment name, or `suite` for all of them; `list` prints the names
    experiment: String,
    /// TOML file with the same keys as the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: ExperimentConfig,
}

fn run(cli: Cli) -> Result<bool, ExperimentError> {
    let base = match &cli.config {
        Some(path) => ExperimentConfig::from_toml_file(path)?,
        None => ExperimentConfig::default(),
    };
    let cfg = base.overlay(cli.flags);
    let start = Instant::now();
    let reports = run_experiment(&cli.experiment, &cfg)?;
    let bytes = emit_report(&reports);
    match &cfg.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| ExperimentError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes).and_then(|_| out.write_all(b"\n")).map_err(|e| ExperimentError::Failure(e.to_string()))?;
        }
    }
    for r in &reports {
        eprintln!("{:<18} {}", r.name, if r.passed() { "pass" } else { "FAIL" });
    }
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    Ok(reports.iter().all(|r| r.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.experiment == "list" {
        for e in Registry::standard().iter() {
            println!("{:<18} {}", e.name(), e.summary());
        }
        return ExitCode::SUCCESS;
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

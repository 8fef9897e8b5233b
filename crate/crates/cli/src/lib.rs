//! Command-line harness: the group description language, experiment
//! configuration, the experiment registry and canonical JSON reports.

pub mod config;
pub mod dsl;
pub mod experiments;
pub mod report;

pub use config::ExperimentConfig;
pub use experiments::{Experiment, ExperimentError, Outcome, Registry};
pub use report::{emit_report, ExperimentReport};

/// Runs `name` on a pool of `cfg.jobs` workers (rayon's default when unset).
pub fn run_experiment(name: &str, cfg: &ExperimentConfig) -> Result<Vec<ExperimentReport>, ExperimentError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| ExperimentError::Config(e.to_string()))?;
    let registry = Registry::standard();
    pool.install(|| registry.run(name, cfg))
}

//! Named experiments behind a common trait, looked up at runtime.

use std::fmt;

use msolv_core::constructions::{group_corpus, ConstructionError};
use msolv_core::crowell::CrowellError;
use msolv_core::fingroup::{FiniteGroup, GroupError};
use msolv_core::foxcalc::FoxError;
use msolv_core::grpring::RingError;
use msolv_core::models::ModelError;
use msolv_core::zmodlin::LinAlgError;
use rayon::prelude::*;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::config::ExperimentConfig;
use crate::dsl::{parse_and_build, DslError, ParseError};
use crate::report::ExperimentReport;

mod algebra;
mod calculus;
mod groups;
mod models;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("computation failed: {0}")]
    Failure(String),
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) | ExperimentError::Parse(_) => 2,
            ExperimentError::Failure(_) => 1,
        }
    }
}

impl From<DslError> for ExperimentError {
    fn from(e: DslError) -> Self {
        match e {
            DslError::Parse(p) => ExperimentError::Parse(p),
            DslError::Invalid(s) => ExperimentError::Config(s),
        }
    }
}

macro_rules! classify {
    ($ty:ty, $($config:pat),*) => {
        impl From<$ty> for ExperimentError {
            fn from(e: $ty) -> Self {
                match e {
                    $( $config => ExperimentError::Config(e.to_string()), )*
                    #[allow(unreachable_patterns)]
                    _ => ExperimentError::Failure(e.to_string()),
                }
            }
        }
    };
}

classify!(ConstructionError, ConstructionError::PreconditionViolated(_));
classify!(ModelError, ModelError::InvalidArgument(_), ModelError::PreconditionViolated(_));
classify!(RingError, RingError::PreconditionViolated(_), RingError::LevelMismatch(_));
classify!(FoxError, FoxError::Parse(_), FoxError::BadGeneratorIndex { .. }, FoxError::WordTooLong(_), FoxError::RankMismatch { .. });
classify!(GroupError, GroupError::InvalidElement(_));
classify!(CrowellError, CrowellError::ModulusTooLarge(_), CrowellError::RelatorNotInKernel(_));
classify!(LinAlgError, LinAlgError::BadModulus(_));

/// Verdicts, data and failure witnesses gathered by one experiment.
#[derive(Debug, Default)]
pub struct Outcome {
    verdicts: Vec<(String, bool)>,
    data: Map<String, Value>,
    witnesses: Vec<Value>,
}

impl Outcome {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds `ok` into the verdict `name`; the first failure of each verdict
    /// keeps its witness.
    pub fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        let slot = match self.verdicts.iter().position(|(n, _)| n == name) {
            Some(i) => i,
            None => {
                self.verdicts.push((name.to_string(), true));
                self.verdicts.len() - 1
            }
        };
        if !ok && self.verdicts[slot].1 {
            let mut w = Map::new();
            w.insert("verdict".into(), Value::String(name.to_string()));
            w.insert("detail".into(), witness());
            self.witnesses.push(Value::Object(w));
        }
        self.verdicts[slot].1 &= ok;
        ok
    }

    pub fn assert(&mut self, name: &str, ok: bool) -> bool {
        self.check(name, ok, || Value::Null)
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, ok)| *ok)
    }

    pub fn verdicts(&self) -> &[(String, bool)] {
        &self.verdicts
    }

    fn into_report(self, name: &str, config: Value) -> ExperimentReport {
        ExperimentReport {
            name: name.to_string(),
            config,
            verdicts: self.verdicts,
            data: Value::Object(self.data),
            witnesses: self.witnesses,
        }
    }
}

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError>;
}

pub struct Registry {
    entries: Vec<Box<dyn Experiment>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { entries: Vec::new() }
    }

    pub fn register(&mut self, e: Box<dyn Experiment>) {
        assert!(self.get(e.name()).is_none(), "duplicate experiment {}", e.name());
        self.entries.push(e);
    }

    /// Every built-in experiment, in suite order.
    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(groups::Counterexample));
        r.register(Box::new(algebra::ReductionLemma));
        r.register(Box::new(algebra::GTilde));
        r.register(Box::new(calculus::Fox));
        r.register(Box::new(calculus::Crowell));
        r.register(Box::new(calculus::Magnus));
        r.register(Box::new(algebra::KernelProjection));
        r.register(Box::new(groups::Transfer));
        r.register(Box::new(groups::QuotientIso));
        r.register(Box::new(models::SolvModel));
        r.register(Box::new(groups::DerivedSeries));
        r.register(Box::new(groups::MsolvQuotient));
        r.register(Box::new(groups::Centralizer));
        r.register(Box::new(groups::CenterfreeScan));
        r.register(Box::new(calculus::Surface));
        r
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.iter().find(|e| e.name() == name).map(|e| e.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> {
        self.entries.iter().map(|e| e.as_ref())
    }

    /// Runs `name` (or every experiment for `suite`). Configuration and parse
    /// errors abort; computation errors become a failed report carrying the
    /// error as witness.
    pub fn run(&self, name: &str, cfg: &ExperimentConfig) -> Result<Vec<ExperimentReport>, ExperimentError> {
        cfg.validate()?;
        let selected: Vec<&dyn Experiment> = if name == "suite" {
            self.iter().collect()
        } else {
            vec![self
                .get(name)
                .ok_or_else(|| ExperimentError::Config(format!("unknown experiment `{name}`")))?]
        };
        let echo = serde_json::to_value(cfg).expect("config serializes");
        selected
            .par_iter()
            .map(|e| {
                let outcome = match e.run(cfg) {
                    Ok(o) => o,
                    Err(ExperimentError::Failure(msg)) => {
                        let mut o = Outcome::new();
                        o.check("completed", false, || Value::String(msg));
                        o
                    }
                    Err(other) => return Err(other),
                };
                Ok(outcome.into_report(e.name(), echo.clone()))
            })
            .collect()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// The configured group under the name `custom`, or the standard corpus.
pub(crate) fn groups_of(cfg: &ExperimentConfig) -> Result<Vec<(String, FiniteGroup)>, ExperimentError> {
    match &cfg.group {
        Some(text) => Ok(vec![("custom".to_string(), parse_and_build(text)?)]),
        None => Ok(group_corpus()?),
    }
}

pub(crate) fn word_value(w: &msolv_core::foxcalc::FreeWord) -> Value {
    Value::String(w.to_string())
}

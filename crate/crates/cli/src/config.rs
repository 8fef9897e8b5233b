use std::path::{Path, PathBuf};

use clap::Args;
use msolv_core::grpring::PrimeSet;
use serde::{Deserialize, Serialize};

use crate::experiments::ExperimentError;

pub const DEFAULT_SEED: u64 = 20240601;

/// Parameters shared by every experiment. Flags override keys of the same
/// name in the `--config` TOML file; unset fields fall back to each
/// experiment's default sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    /// Prime set Σ, comma separated [default: 2,3]
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Worker threads
    #[arg(long)]
    #[serde(skip_serializing)]
    pub jobs: Option<usize>,
    /// Report file (stdout when absent)
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,

    /// Group description, e.g. "perm 3 : (0 1 2), (0 1)"
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Element of the group, e.g. "(0 1 2)"
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    /// The prime ℓ
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<u32>,
    /// Solvability length
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Rank of the free group
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Exponent of the model tower
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    /// Coefficient modulus
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Generator index, 1-based
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<usize>,
    /// Element cap for group enumeration
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Word in the free group, e.g. "x1 x2^-1 x1^3"
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// Relator words separated by ';'
    #[arg(long, value_delimiter = ';')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relators: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub punctures: Option<u64>,
    /// Number of random samples
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Upper tower level kM
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<u64>,
    /// Lower tower level M
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<u64>,
    /// Order of the cyclic coefficient group H in A = (Z/n)[H]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    /// `self` with every field set in `top` replaced.
    pub fn overlay(mut self, top: ExperimentConfig) -> Self {
        overlay!(
            self, top, primes, seed, jobs, out, group, x, n, l, sigma, m, r, e, modulus, generator, cap, word, relators,
            genus, punctures, count, upper, lower, coefficients
        );
        self
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.prime_set()?;
        if self.cap == Some(0) {
            return Err(ExperimentError::Config("cap must be positive".into()));
        }
        if self.modulus.is_some_and(|m| m < 2) {
            return Err(ExperimentError::Config("modulus must be at least 2".into()));
        }
        if self.jobs == Some(0) {
            return Err(ExperimentError::Config("jobs must be positive".into()));
        }
        Ok(())
    }

    pub fn prime_set(&self) -> Result<PrimeSet, ExperimentError> {
        match &self.primes {
            None => Ok(PrimeSet::default()),
            Some(p) => PrimeSet::new(p.iter().copied()).map_err(|e| ExperimentError::Config(e.to_string())),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_flags_merge() {
        let file = ExperimentConfig::from_toml("group = \"builtin S3\"\nn = 2\nprimes = [2, 5]\n").unwrap();
        let flags = ExperimentConfig { n: Some(-1), ..Default::default() };
        let cfg = file.overlay(flags);
        assert_eq!(cfg.n, Some(-1));
        assert_eq!(cfg.group.as_deref(), Some("builtin S3"));
        assert_eq!(cfg.prime_set().unwrap().primes().collect::<Vec<_>>(), vec![2, 5]);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
        assert!(ExperimentConfig { primes: Some(vec![4]), ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { primes: Some(vec![]), ..Default::default() }.validate().is_err());
        assert!(ExperimentConfig { cap: Some(0), ..Default::default() }.validate().is_err());
    }
}

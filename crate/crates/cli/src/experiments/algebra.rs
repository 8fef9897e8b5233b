use msolv_core::constructions::{gtilde_experiment, reduction_lemma_random, reduction_lemma_sweep, GTildeInstance, SweepSummary};
use msolv_core::fingroup::{builtin, FiniteGroup};
use msolv_core::grpring::{kernel_projection_check, CyclicTower, MulTable, PrimeSet};
use msolv_core::zmodlin::ResidueRing;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Experiment, ExperimentError, Outcome};
use crate::config::ExperimentConfig;
use crate::dsl::{parse_and_build, parse_element};
use crate::report::{big, int, ints};

fn summary_value(s: &SweepSummary) -> Value {
    json!({
        "instances": int(s.instances),
        "passes": int(s.passes),
        "vacuous": int(s.vacuous),
        "failures": int(s.failures),
    })
}

pub struct ReductionLemma;

impl Experiment for ReductionLemma {
    fn name(&self) -> &'static str {
        "reduction-lemma"
    }

    fn summary(&self) -> &'static str {
        "ñE = 0 over Z/ℓ^σ with σ > ord_ℓ(ñ) forces E ≡ 0 mod ℓ"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let ells: Vec<u64> = cfg.l.map_or_else(|| vec![2, 3], |l| vec![l]);
        let sigma_max = cfg.sigma.unwrap_or(3);
        let n_max = cfg.n.map_or(12, |n| n.abs());
        if n_max == 0 {
            return Err(ExperimentError::Config("n must be nonzero".into()));
        }
        let u_max = cfg.r.unwrap_or(2);
        let exhaustive = reduction_lemma_sweep(u_max, &ells, sigma_max, n_max)?;
        let random = reduction_lemma_random(cfg.count.unwrap_or(1000), 6, cfg.seed())?;
        let mut o = Outcome::new();
        o.check("exhaustive_no_failures", exhaustive.failures == 0, || summary_value(&exhaustive));
        o.check("exhaustive_not_vacuous", exhaustive.passes > 0, || summary_value(&exhaustive));
        o.check("random_no_failures", random.failures == 0, || summary_value(&random));
        o.put("exhaustive", summary_value(&exhaustive));
        o.put("random", summary_value(&random));
        o.put("u_max", u_max);
        Ok(o)
    }
}

pub struct GTilde;

impl GTilde {
    /// The default instances: `S3` with a 3-cycle and `C6` with an element of
    /// order 3, both at `ℓ = 3`, `σ = 2`, `n = 1`.
    pub fn default_instances() -> Vec<(String, GTildeInstance)> {
        let s3 = builtin::symmetric(3);
        let x = s3.generators()[0];
        let c6 = builtin::cyclic(6);
        let y = c6.pow(c6.generators()[0], 2);
        vec![
            ("S3".into(), GTildeInstance { group: s3, x, n: 1, ell: 3, sigma: 2 }),
            ("C6".into(), GTildeInstance { group: c6, x: y, n: 1, ell: 3, sigma: 2 }),
        ]
    }
}

fn custom_instance(cfg: &ExperimentConfig, text: &str) -> Result<GTildeInstance, ExperimentError> {
    let group: FiniteGroup = parse_and_build(text)?;
    let x = cfg.x.as_deref().ok_or_else(|| ExperimentError::Config("--x is required with --group".into()))?;
    let x = parse_element(x, &group)?;
    let n = cfg.n.unwrap_or(1);
    if n <= 0 {
        return Err(ExperimentError::Config("n must be positive".into()));
    }
    Ok(GTildeInstance { group, x, n: n as u64, ell: cfg.l.unwrap_or(3), sigma: cfg.sigma.unwrap_or(2) })
}

impl Experiment for GTilde {
    fn name(&self) -> &'static str {
        "gtilde"
    }

    fn summary(&self) -> &'static str {
        "feasible pairs (A, C) for the lifted regular representation"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let instances = match &cfg.group {
            Some(text) => vec![("custom".to_string(), custom_instance(cfg, text)?)],
            None => GTilde::default_instances(),
        };
        let mut o = Outcome::new();
        let mut rows = Vec::new();
        for (name, inst) in &instances {
            let rep = gtilde_experiment(inst)?;
            let pairs: Vec<Value> = rep.feasible_pairs.iter().map(|&(a, c)| json!([a, c])).collect();
            o.check("feasible_set_is_diagonal", rep.exactly_diagonal, || json!({ "instance": name, "feasible_pairs": pairs }));
            o.check("witnesses_verified", rep.witnesses_verified, || json!(name));
            o.check("reduction_injective", rep.reduction_injective, || json!(name));
            rows.push(json!({
                "instance": name,
                "order": inst.group.order(),
                "x": inst.x,
                "n": inst.n,
                "l": inst.ell,
                "sigma": inst.sigma,
                "u": rep.u,
                "s": rep.s,
                "pairs_checked": rep.pairs_checked,
                "feasible_pairs": pairs,
            }));
        }
        o.put("instances", rows);
        Ok(o)
    }
}

/// A coefficient algebra `A = (Z/n)[C_h]`.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    modulus: u64,
    cyclic: usize,
}

impl Coefficients {
    fn label(&self) -> String {
        if self.cyclic == 1 {
            format!("Z/{}", self.modulus)
        } else {
            format!("(Z/{})[C{}]", self.modulus, self.cyclic)
        }
    }
}

pub const TOWER_LEVEL_LIMIT: u64 = 27;

pub struct KernelProjection;

impl Experiment for KernelProjection {
    fn name(&self) -> &'static str {
        "kernel-projection"
    }

    fn summary(&self) -> &'static str {
        "generators of ker(x̄^n − 1) on A[C_kM] project into k·A[C_M]"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let sigma: PrimeSet = cfg.prime_set()?;
        let algebras = match cfg.modulus {
            Some(m) => vec![Coefficients { modulus: m, cyclic: cfg.coefficients.unwrap_or(1) }],
            None => vec![
                Coefficients { modulus: 4, cyclic: 1 },
                Coefficients { modulus: 9, cyclic: 1 },
                Coefficients { modulus: 9, cyclic: 3 },
            ],
        };
        let ns: Vec<i64> = cfg.n.map_or_else(|| vec![1, 2, 3, 6], |n| vec![n]);
        if ns.contains(&0) {
            return Err(ExperimentError::Config("n must be nonzero".into()));
        }
        let levels: Vec<u64> = match (cfg.upper, cfg.lower) {
            (Some(u), Some(l)) => vec![u, l],
            (None, None) => (1..=TOWER_LEVEL_LIMIT).filter(|&k| sigma.is_sigma_number(k)).collect(),
            _ => return Err(ExperimentError::Config("--upper and --lower go together".into())),
        };
        let mut tasks = Vec::new();
        for ai in 0..algebras.len() {
            for &upper in &levels {
                for &lower in &levels {
                    let pair_ok = match (cfg.upper, cfg.lower) {
                        (Some(u), Some(l)) => upper == u && lower == l,
                        _ => upper % lower == 0,
                    };
                    if !pair_ok {
                        continue;
                    }
                    for &n in &ns {
                        let (n_sigma, _) = sigma.split(n.unsigned_abs());
                        if lower % n_sigma == 0 || cfg.upper.is_some() {
                            tasks.push((ai, upper, lower, n));
                        }
                    }
                }
            }
        }
        let towers: Vec<CyclicTower> = algebras
            .iter()
            .map(|a| CyclicTower::new(ResidueRing::new(a.modulus)?, MulTable::cyclic(a.cyclic), &levels))
            .collect::<Result<_, _>>()?;
        let results: Vec<_> = tasks
            .par_iter()
            .map(|&(ai, upper, lower, n)| kernel_projection_check(&towers[ai], &sigma, n, upper, lower).map(|r| (ai, r)))
            .collect();
        let mut o = Outcome::new();
        let mut rows = Vec::new();
        for res in results {
            let (ai, rep) = res?;
            let row = json!({
                "algebra": algebras[ai].label(),
                "n": rep.n,
                "upper_level": rep.upper_level,
                "lower_level": rep.lower_level,
                "kernel_generators": rep.kernel_generators,
                "kernel_size": big(&rep.kernel_size),
            });
            o.check("projection_lands_in_k_multiple", rep.passed, || {
                let mut w = row.clone();
                w["generator"] = rep.witness.as_deref().map_or(Value::Null, ints);
                w
            });
            rows.push(row);
        }
        o.put("checks", int(rows.len() as u64));
        o.put("rows", rows);
        Ok(o)
    }
}

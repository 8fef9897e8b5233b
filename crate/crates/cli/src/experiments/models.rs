use msolv_core::models::{build_solv_extension, centralizer_experiment, model_soundness, SolvModel as Model};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{Experiment, ExperimentError, Outcome};
use crate::config::ExperimentConfig;
use crate::report::{big, ints};

/// Models up to this order are enumerated element by element.
pub const DEFAULT_MODEL_CAP: usize = 1_000_000;
/// `|W(2,2,2)|` found by enumeration.
pub const W222_ORDER: u64 = 128;

fn build(r: usize, e: u64, m: usize, cap: usize) -> Result<Model, ExperimentError> {
    let shell = build_solv_extension(r, e, m, cap, false)?;
    if shell.order <= BigUint::from(cap) {
        Ok(build_solv_extension(r, e, m, cap, true)?)
    } else {
        Ok(shell)
    }
}

fn opt<T: Into<Value>>(v: Option<T>) -> Value {
    v.map_or(Value::Null, Into::into)
}

pub struct SolvModel;

impl Experiment for SolvModel {
    fn name(&self) -> &'static str {
        "solv-model"
    }

    fn summary(&self) -> &'static str {
        "finite free m-step solvable models and centralizers of generator powers"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let cap = cfg.cap.unwrap_or(DEFAULT_MODEL_CAP);
        let params: Vec<(usize, u64, usize)> = match (cfg.r, cfg.e, cfg.m) {
            (None, None, None) => vec![(2, 2, 2), (2, 3, 2), (2, 2, 3)],
            (r, e, m) => vec![(r.unwrap_or(2), e.unwrap_or(2), m.unwrap_or(2))],
        };
        let models: Vec<Model> = params.par_iter().map(|&(r, e, m)| build(r, e, m, cap)).collect::<Result<_, _>>()?;
        let mut o = Outcome::new();
        let mut rows = Vec::new();
        for model in &models {
            let tag = format!("({}, {}, {})", model.rank, model.exponent, model.level);
            let sound = model_soundness(model)?;
            o.check("module_is_relation_module", sound.module_is_relation_module, || json!(tag));
            o.check("conjugation_formula", sound.conjugation_formula, || json!(tag));
            for (name, v) in [
                ("abelianization_sound", sound.abelianization_sound),
                ("module_normal", sound.module_normal),
                ("order_consistent", sound.order_consistent),
            ] {
                if let Some(ok) = v {
                    o.check(name, ok, || json!(tag));
                }
            }
            if (model.rank, model.exponent, model.level) == (2, 2, 2) {
                o.check("w222_order_regression", model.order == BigUint::from(W222_ORDER), || big(&model.order));
            }

            let e = model.exponent as i64;
            let generators: Vec<usize> = cfg.generator.map_or_else(|| (1..=model.rank).collect(), |i| vec![i]);
            let powers: Vec<i64> = cfg.n.map_or_else(|| vec![1, e + 1], |n| vec![n]);
            let mut cents = Vec::new();
            for &i in &generators {
                for &n in &powers {
                    let c = centralizer_experiment(model, i, n)?;
                    let row = json!({
                        "generator": i,
                        "n": n,
                        "kernel_ring_route": big(&c.kernel_ring_route),
                        "kernel_group_route": big(&c.kernel_group_route),
                        "kernel_brute_force": c.kernel_brute_force.as_ref().map_or(Value::Null, big),
                        "centralizer_order": big(&c.centralizer_order),
                        "centralizer_brute_force": opt(c.centralizer_brute_force),
                        "cyclic_order": c.cyclic_order,
                    });
                    o.check("ring_and_group_routes_agree", c.routes_agree, || json!({ "model": tag, "row": row }));
                    if let Some(ok) = c.brute_force_agrees {
                        o.check("brute_force_kernel_agrees", ok, || json!({ "model": tag, "row": row }));
                    }
                    o.check("centralizer_is_cyclic_times_kernel", c.product_formula, || json!({ "model": tag, "row": row }));
                    if let Some(ok) = c.product_formula_brute_force {
                        o.check("brute_force_centralizer_agrees", ok, || json!({ "model": tag, "row": row }));
                    }
                    cents.push(row);
                }
            }
            rows.push(json!({
                "r": model.rank,
                "e": model.exponent,
                "m": model.level,
                "order": big(&model.order),
                "enumerated": model.group.is_some(),
                "base_order": model.base.order(),
                "module_order": big(&model.module.span_size()),
                "derived_length": opt(sound.derived_length),
                "abelian_invariants": sound.abelian_invariants.as_deref().map_or(Value::Null, ints),
                "centralizers": cents,
            }));
        }
        o.put("models", rows);
        Ok(o)
    }
}

use std::collections::BTreeSet;

use msolv_core::constructions::{build_counterexample, counterexample_action};
use msolv_core::fingroup::{
    abelian_invariants, centralizer, derived_series, m_step_quotient, normal_subgroups, quotient, quotient_iso_check,
    transfer_identity_check, transfer_map, transfer_map_with, CosetTable, FiniteGroup, Subgroup,
};
use msolv_core::models::centerfree_scan;
use msolv_core::oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{groups_of, Experiment, ExperimentError, Outcome};
use crate::config::ExperimentConfig;
use crate::dsl::{parse_and_build, parse_element};
use crate::report::{int, ints, usizes};

pub const COUNTEREXAMPLE_SEMIDIRECT: &str =
    "semidirect(builtin C3^2, builtin D8, action=[[[0,2],[1,0]], [[1,0],[0,2]]])";
pub const COUNTEREXAMPLE_ACTION: &str = "mat 3 : [[0,2],[1,0]], [[1,0],[0,2]]";

fn set_of(s: &Subgroup) -> BTreeSet<usize> {
    s.elements().iter().copied().collect()
}

pub struct Counterexample;

impl Experiment for Counterexample {
    fn name(&self) -> &'static str {
        "counterexample"
    }

    fn summary(&self) -> &'static str {
        "the order-72 center-free group whose second solvable quotient is D8"
    }

    fn run(&self, _cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let b = build_counterexample()?;
        let mut o = Outcome::new();
        o.check("order_is_72", b.group.order() == 72, || json!({ "order": b.group.order() }));
        o.check("center_trivial", b.center_order == 1, || json!({ "center_order": b.center_order }));
        o.check("quotient_isomorphic_to_d8", b.iso.is_injective() && b.iso.is_surjective(), || Value::Null);
        o.check("quotient_center_order_2", b.quotient_center_order == 2, || {
            json!({ "quotient_center_order": b.quotient_center_order })
        });

        let action = parse_and_build(COUNTEREXAMPLE_ACTION)?;
        o.check("action_image_order_8", action.order() == 8, || json!({ "order": action.order() }));
        let dsl = parse_and_build(COUNTEREXAMPLE_SEMIDIRECT)?;
        let dsl_quotient = m_step_quotient(&dsl, 2)?;
        let dsl_data = (dsl.order(), dsl.center().order(), dsl_quotient.group.order(), dsl_quotient.group.center().order());
        o.check("dsl_form_agrees", dsl_data == (72, 1, 8, 2), || usizes(&[dsl_data.0, dsl_data.1, dsl_data.2, dsl_data.3]));

        let matrices: Vec<Value> = counterexample_action()
            .iter()
            .map(|m| Value::Array(m.row_vectors().iter().map(|r| ints(r)).collect()))
            .collect();
        o.put(
            "group",
            json!({
                "order": b.group.order(),
                "center_order": b.center_order,
                "derived_orders": usizes(&b.derived_orders),
            }),
        );
        o.put("quotient", json!({ "order": b.quotient.group.order(), "center_order": b.quotient_center_order }));
        o.put("action", json!({ "modulus": 3, "matrices": matrices }));
        Ok(o)
    }
}

pub struct DerivedSeries;

impl Experiment for DerivedSeries {
    fn name(&self) -> &'static str {
        "derived-series"
    }

    fn summary(&self) -> &'static str {
        "derived series and abelianization, checked against all-pairs closure"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let corpus = groups_of(cfg)?;
        let rows: Vec<(Value, bool)> = corpus
            .par_iter()
            .map(|(name, g)| {
                let engine: Vec<BTreeSet<usize>> = derived_series(g).iter().map(set_of).collect();
                let brute = oracle::derived_series(g);
                let orders: Vec<usize> = engine.iter().map(|s| s.len()).collect();
                let row = json!({
                    "name": name,
                    "order": g.order(),
                    "series_orders": usizes(&orders),
                    "derived_length": g.derived_length(),
                    "abelian_invariants": ints(&abelian_invariants(g)),
                });
                (row, engine == brute)
            })
            .collect();
        let mut o = Outcome::new();
        for (row, ok) in &rows {
            o.check("engine_matches_oracle", *ok, || row["name"].clone());
        }
        o.put("groups", rows.into_iter().map(|(r, _)| r).collect::<Vec<_>>());
        Ok(o)
    }
}

pub struct MsolvQuotient;

impl Experiment for MsolvQuotient {
    fn name(&self) -> &'static str {
        "msolv-quotient"
    }

    fn summary(&self) -> &'static str {
        "maximal m-step solvable quotients and their centers"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let corpus = groups_of(cfg)?;
        let ms: Vec<usize> = cfg.m.map_or_else(|| (0..=3).collect(), |m| vec![m]);
        let tasks: Vec<(usize, usize)> = (0..corpus.len()).flat_map(|g| ms.iter().map(move |&m| (g, m))).collect();
        let rows: Vec<Result<(Value, bool), ExperimentError>> = tasks
            .par_iter()
            .map(|&(gi, m)| {
                let (name, g) = &corpus[gi];
                let q = m_step_quotient(g, m)?;
                let engine = (q.group.order(), q.group.center().order());
                let brute = oracle::m_step_quotient_data(g, m);
                let row = json!({
                    "name": name,
                    "m": m,
                    "quotient_order": engine.0,
                    "quotient_center_order": engine.1,
                });
                Ok((row, engine == brute))
            })
            .collect();
        let mut o = Outcome::new();
        let mut out = Vec::new();
        for r in rows {
            let (row, ok) = r?;
            o.check("engine_matches_oracle", ok, || row.clone());
            out.push(row);
        }
        o.put("quotients", out);
        Ok(o)
    }
}

pub struct Centralizer;

impl Experiment for Centralizer {
    fn name(&self) -> &'static str {
        "centralizer"
    }

    fn summary(&self) -> &'static str {
        "element centralizers and centers, checked against brute force"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let corpus = groups_of(cfg)?;
        let chosen = match (&cfg.x, corpus.first()) {
            (Some(x), Some((_, g))) if cfg.group.is_some() => Some(parse_element(x, g)?),
            (Some(_), _) => return Err(ExperimentError::Config("--x needs --group".into())),
            _ => None,
        };
        let rows: Vec<(Value, Option<usize>, bool)> = corpus
            .par_iter()
            .map(|(name, g)| {
                let elems: Vec<usize> = chosen.map_or_else(|| (0..g.order()).collect(), |x| vec![x]);
                let mut bad = None;
                let mut orders = Vec::with_capacity(elems.len());
                for &x in &elems {
                    let c = centralizer(g, &[x]);
                    orders.push(c.order());
                    if bad.is_none() && set_of(&c) != oracle::centralizer(g, &[x]) {
                        bad = Some(x);
                    }
                }
                let center = g.center();
                let center_ok = set_of(&center) == oracle::center(g);
                let row = json!({
                    "name": name,
                    "order": g.order(),
                    "center_order": center.order(),
                    "elements": usizes(&elems),
                    "centralizer_orders": usizes(&orders),
                });
                (row, bad, center_ok)
            })
            .collect();
        let mut o = Outcome::new();
        for (row, bad, center_ok) in &rows {
            o.check("centralizers_match_oracle", bad.is_none(), || json!({ "group": row["name"], "element": bad }));
            o.check("center_matches_oracle", *center_ok, || row["name"].clone());
        }
        o.put("groups", rows.into_iter().map(|(r, _, _)| r).collect::<Vec<_>>());
        Ok(o)
    }
}

/// `G/N` pairs the transfer sweep must contain, as (group, |N|).
const REQUIRED_TRANSFER_PAIRS: [(&str, usize); 4] = [("C4", 2), ("S3", 3), ("D8", 4), ("counterexample", 9)];
pub const TRANSFER_ORDER_LIMIT: usize = 200;

fn random_transversal<E: msolv_core::fingroup::GroupElement>(
    g: &FiniteGroup<E>,
    n: &Subgroup,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let all: Vec<usize> = (0..g.order()).collect();
    let cosets = CosetTable::new(g, &all, n);
    cosets
        .representatives()
        .iter()
        .map(|&r| g.mul(r, n.elements()[rng.gen_range(0..n.order())]))
        .collect()
}

pub struct Transfer;

impl Experiment for Transfer {
    fn name(&self) -> &'static str {
        "transfer"
    }

    fn summary(&self) -> &'static str {
        "transfer identities for every normal subgroup, with a random second transversal"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let corpus: Vec<(String, FiniteGroup)> =
            groups_of(cfg)?.into_iter().filter(|(_, g)| g.order() <= TRANSFER_ORDER_LIMIT).collect();
        let seed = cfg.seed();
        let per_group: Vec<Result<Vec<(Value, [bool; 3])>, ExperimentError>> = corpus
            .par_iter()
            .enumerate()
            .map(|(gi, (name, g))| {
                let mut rows = Vec::new();
                for (ni, n) in normal_subgroups(g).iter().enumerate() {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((gi as u64) << 32) ^ ni as u64);
                    let t = transfer_map(g, n)?;
                    let rep = transfer_identity_check(g, n, &t);
                    let other = transfer_map_with(g, n, &random_transversal(g, n, &mut rng))?;
                    let rep2 = transfer_identity_check(g, n, &other);
                    let independent = (0..g.order()).all(|x| t.transfer_of(x) == other.transfer_of(x));
                    let row = json!({
                        "group": name,
                        "normal_order": n.order(),
                        "index": rep.index,
                        "invariant_count": rep.invariant_count,
                    });
                    let verdicts = [
                        rep.conjugation_sum_holds && rep2.conjugation_sum_holds,
                        rep.index_multiplication_holds && rep2.index_multiplication_holds,
                        independent,
                    ];
                    rows.push((row, verdicts));
                }
                Ok(rows)
            })
            .collect();
        let mut o = Outcome::new();
        let mut table = Vec::new();
        for rows in per_group {
            for (row, [conj, index, indep]) in rows? {
                o.check("conjugation_sum", conj, || row.clone());
                o.check("index_multiplication_on_invariants", index, || row.clone());
                o.check("transversal_independent", indep, || row.clone());
                table.push(row);
            }
        }
        if cfg.group.is_none() {
            for (g, k) in REQUIRED_TRANSFER_PAIRS {
                let found = table.iter().any(|r| r["group"] == g && r["normal_order"] == k);
                o.check("required_pairs_present", found, || json!({ "group": g, "normal_order": k }));
            }
        }
        o.put("pairs", int(table.len() as u64));
        o.put("rows", table);
        Ok(o)
    }
}

/// Subgroups of `Q` used as `H`: trivial, all cyclic subgroups, `Q` itself.
fn test_subgroups(q: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |s: Subgroup| {
        let key: Vec<usize> = s.elements().to_vec();
        if seen.insert(key) {
            out.push(s);
        }
    };
    for x in 0..q.order() {
        push(Subgroup::generated(q, &[x]));
    }
    push(q.whole());
    out
}

pub struct QuotientIso;

impl Experiment for QuotientIso {
    fn name(&self) -> &'static str {
        "quotient-iso"
    }

    fn summary(&self) -> &'static str {
        "n-step quotients of f⁻¹(H) and H agree whenever ker f lies in (f⁻¹H)^[n]"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let corpus = groups_of(cfg)?;
        let steps: Vec<usize> = cfg.m.map_or_else(|| vec![1, 2], |m| vec![m]);
        type Row = (String, usize, usize, usize, bool, bool);
        let per_group: Vec<Result<Vec<Row>, ExperimentError>> = corpus
            .par_iter()
            .map(|(name, g)| {
                let mut rows = Vec::new();
                for kernel in normal_subgroups(g) {
                    let q = quotient(g, &kernel)?;
                    for h in test_subgroups(&q.group) {
                        for &n in &steps {
                            let rep = quotient_iso_check(g, &q.group, &q.projection, &h, n)?;
                            rows.push((name.clone(), kernel.order(), h.order(), n, rep.hypothesis_holds, rep.bijective));
                        }
                    }
                }
                Ok(rows)
            })
            .collect();
        let mut o = Outcome::new();
        let (mut triples, mut hypothesis, mut nontrivial) = (0u64, 0u64, 0u64);
        for rows in per_group {
            for (name, k, h, n, hyp, bij) in rows? {
                triples += 1;
                if hyp {
                    hypothesis += 1;
                    nontrivial += (k > 1) as u64;
                    o.check("hypothesis_implies_bijection", bij, || {
                        json!({ "group": name, "kernel_order": k, "subgroup_order": h, "n": n })
                    });
                }
            }
        }
        o.assert("nontrivial_kernels_covered", nontrivial > 0);
        o.put("triples", int(triples));
        o.put("hypothesis_holds", int(hypothesis));
        o.put("hypothesis_holds_nontrivial_kernel", int(nontrivial));
        Ok(o)
    }
}

pub struct CenterfreeScan;

impl Experiment for CenterfreeScan {
    fn name(&self) -> &'static str {
        "centerfree-scan"
    }

    fn summary(&self) -> &'static str {
        "center-free groups whose m-step solvable quotient has a center"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let corpus = groups_of(cfg)?;
        let m = cfg.m.unwrap_or(2);
        let rows = centerfree_scan(&corpus, m)?;
        let mut o = Outcome::new();
        let mut table = Vec::new();
        for (row, (_, g)) in rows.iter().zip(&corpus) {
            let brute = oracle::m_step_quotient_data(g, m);
            o.check("quotient_data_matches_oracle", brute == (row.quotient_order, row.quotient_center_order), || {
                json!(row.name)
            });
            let faithfulness: Vec<Value> = row.faithfulness.iter().map(|&(k, f)| json!([k, f])).collect();
            table.push(json!({
                "name": row.name,
                "order": row.order,
                "center_order": row.center_order,
                "quotient_order": row.quotient_order,
                "quotient_center_order": row.quotient_center_order,
                "flagged": row.flagged,
                "faithfulness": faithfulness,
                "center_in_derived": row.center_in_derived,
            }));
        }
        if cfg.group.is_none() && m == 2 {
            let hit = rows.iter().any(|r| r.name == "counterexample" && r.flagged);
            o.assert("counterexample_flagged", hit);
        }
        let flagged: Vec<&str> = rows.iter().filter(|r| r.flagged).map(|r| r.name.as_str()).collect();
        o.put("flagged", flagged);
        o.put("rows", table);
        Ok(o)
    }
}

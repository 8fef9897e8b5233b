use msolv_core::constructions::group_corpus;
use msolv_core::crowell::{build_complex, exactness_check, magnus_fox_consistent, magnus_image, relation_module_check, relator_kernel_check};
use msolv_core::fingroup::{builtin, FiniteGroup, GroupElement};
use msolv_core::foxcalc::{expansion_check, fox_row, FreeWord, Letter, QuotientContext};
use msolv_core::models::{euler_char, presentation_abelianization, surface_presentation};
use msolv_core::zmodlin::ResidueRing;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{word_value, Experiment, ExperimentError, Outcome};
use crate::config::ExperimentConfig;
use crate::dsl::parse_and_build;
use crate::report::{big, int, ints};

pub const EXHAUSTIVE_LENGTH: usize = 6;
pub const RANDOM_WORD_LENGTH: usize = 40;
pub const RANDOM_PAIR_LENGTH: usize = 20;
const RANDOM_MODULI: [u64; 4] = [2, 3, 4, 9];

/// Every reduced word of length at most `max_len` in `x_1, …, x_rank`.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<FreeWord> {
    let letters: Vec<Letter> =
        (0..rank).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut out = vec![FreeWord::empty(rank)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last().is_some_and(|&p| p == l.inverted()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| FreeWord::from_letters(rank, v).expect("valid letters")));
        layer = next;
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let raw: Vec<(usize, i32)> =
        (0..len).map(|_| (rng.gen_range(1..=rank), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    FreeWord::reduce(rank, &raw).expect("valid generators")
}

struct NamedContext {
    name: String,
    ctx: QuotientContext,
}

fn label(c: &NamedContext) -> String {
    c.name.clone()
}

/// `C2×C2` and `S3` on their two standard generators, over `Z/2` and `Z/9`.
fn exhaustive_contexts() -> Result<Vec<NamedContext>, ExperimentError> {
    let mut out = Vec::new();
    for (name, q) in [("C2xC2", builtin::abelian(&[2, 2])), ("S3", builtin::symmetric(3))] {
        for n in [2, 9] {
            let ctx = QuotientContext::from_generators(&q, ResidueRing::new(n)?)?;
            out.push(NamedContext { name: format!("{name} over Z/{n}"), ctx });
        }
    }
    Ok(out)
}

/// Solvable corpus groups of order at most `limit`, on their generators, over
/// each of the random moduli.
fn solvable_contexts(limit: usize) -> Result<Vec<NamedContext>, ExperimentError> {
    let mut out = Vec::new();
    for (name, q) in group_corpus()? {
        if q.order() > limit || q.generators().is_empty() || q.derived_length().is_none() {
            continue;
        }
        for n in RANDOM_MODULI {
            let ctx = QuotientContext::from_generators(&q, ResidueRing::new(n)?)?;
            out.push(NamedContext { name: format!("{name} over Z/{n}"), ctx });
        }
    }
    Ok(out)
}

fn custom_context(cfg: &ExperimentConfig, default_modulus: u64) -> Result<Option<NamedContext>, ExperimentError> {
    let Some(text) = &cfg.group else { return Ok(None) };
    let q = parse_and_build(text)?;
    let n = cfg.modulus.unwrap_or(default_modulus);
    let ctx = QuotientContext::from_generators(&q, ResidueRing::new(n)?)?;
    Ok(Some(NamedContext { name: format!("custom over Z/{n}"), ctx }))
}

fn parse_word(text: &str, ctx: &QuotientContext) -> Result<FreeWord, ExperimentError> {
    Ok(FreeWord::parse(text, Some(ctx.rank()))?)
}

pub struct Fox;

impl Experiment for Fox {
    fn name(&self) -> &'static str {
        "fox"
    }

    fn summary(&self) -> &'static str {
        "fundamental formula w − 1 = Σ ∂_i(w)(x_i − 1) in finite group rings"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let mut o = Outcome::new();
        if let Some(c) = custom_context(cfg, 2)? {
            let text = cfg.word.as_deref().ok_or_else(|| ExperimentError::Config("--word is required with --group".into()))?;
            let w = parse_word(text, &c.ctx)?;
            let rep = expansion_check(&c.ctx, &w)?;
            o.check("expansion_identity", rep.holds, || json!({ "lhs": ints(&rep.lhs), "rhs": ints(&rep.rhs) }));
            let derivatives: Vec<Value> = fox_row(&c.ctx, &w)?.iter().map(|d| ints(d.coeffs())).collect();
            o.put("word", word_value(&w));
            o.put("derivatives", derivatives);
            return Ok(o);
        }

        let contexts = exhaustive_contexts()?;
        let words = reduced_words(2, EXHAUSTIVE_LENGTH);
        let mut exhaustive = 0u64;
        for c in &contexts {
            let bad = words.par_iter().find_first(|w| !expansion_check(&c.ctx, w).map(|r| r.holds).unwrap_or(false));
            exhaustive += words.len() as u64;
            o.check("expansion_identity_exhaustive", bad.is_none(), || json!({ "context": label(c), "word": bad.map(word_value) }));
        }

        let pool = solvable_contexts(72)?;
        let count = cfg.count.unwrap_or(1000);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
        let samples: Vec<(usize, FreeWord)> = (0..count)
            .map(|_| {
                let k = rng.gen_range(0..pool.len());
                (k, random_word(&mut rng, pool[k].ctx.rank(), RANDOM_WORD_LENGTH))
            })
            .collect();
        let bad = samples
            .par_iter()
            .find_first(|(k, w)| !expansion_check(&pool[*k].ctx, w).map(|r| r.holds).unwrap_or(false));
        o.check("expansion_identity_random", bad.is_none(), || {
            let (k, w) = bad.expect("failure");
            json!({ "context": label(&pool[*k]), "word": word_value(w) })
        });
        o.put("exhaustive_checks", int(exhaustive));
        o.put("exhaustive_contexts", contexts.iter().map(label).collect::<Vec<_>>());
        o.put("random_checks", int(samples.len() as u64));
        o.put("random_context_pool", int(pool.len() as u64));
        Ok(o)
    }
}

pub struct Magnus;

impl Experiment for Magnus {
    fn name(&self) -> &'static str {
        "magnus"
    }

    fn summary(&self) -> &'static str {
        "the Magnus representation carries Fox rows and is multiplicative"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let mut o = Outcome::new();
        let contexts = match custom_context(cfg, 2)? {
            Some(c) => vec![c],
            None => exhaustive_contexts()?,
        };
        let mut consistency = 0u64;
        for c in &contexts {
            // the exhaustive length is kept for rank 2; wider ranks stop at 4 letters
            let len = if c.ctx.rank() <= 2 { EXHAUSTIVE_LENGTH } else { 4 };
            let words = reduced_words(c.ctx.rank(), len);
            let bad = words.par_iter().find_first(|w| !magnus_fox_consistent(&c.ctx, w).unwrap_or(false));
            consistency += words.len() as u64;
            o.check("top_right_equals_fox_row", bad.is_none(), || json!({ "context": label(c), "word": bad.map(word_value) }));
        }

        let pool = if cfg.group.is_some() { contexts } else { solvable_contexts(72)? };
        let count = cfg.count.unwrap_or(500);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed().wrapping_add(1));
        let pairs: Vec<(usize, FreeWord, FreeWord)> = (0..count)
            .map(|_| {
                let k = rng.gen_range(0..pool.len());
                let r = pool[k].ctx.rank();
                (k, random_word(&mut rng, r, RANDOM_PAIR_LENGTH), random_word(&mut rng, r, RANDOM_PAIR_LENGTH))
            })
            .collect();
        let bad = pairs.par_iter().find_first(|(k, u, v)| {
            let ctx = &pool[*k].ctx;
            let law = || -> Result<bool, ExperimentError> {
                let uv = magnus_image(ctx, &u.concat(v)?)?;
                let (mu, mv) = (magnus_image(ctx, u)?, magnus_image(ctx, v)?);
                Ok(uv == mu.compose(&mv) && magnus_image(ctx, &u.inverse())? == mu.inverse())
            };
            !law().unwrap_or(false)
        });
        o.check("homomorphism_law", bad.is_none(), || {
            let (k, u, v) = bad.expect("failure");
            json!({ "context": label(&pool[*k]), "u": word_value(u), "v": word_value(v) })
        });
        o.put("consistency_checks", int(consistency));
        o.put("random_pairs", int(pairs.len() as u64));
        Ok(o)
    }
}

/// Presentations `(group, relators)` of groups whose builtin generators
/// satisfy exactly these relations.
fn known_presentations() -> Vec<(&'static str, FiniteGroup, Vec<&'static str>)> {
    vec![
        ("C4", builtin::cyclic(4), vec!["x1^4"]),
        ("C6", builtin::cyclic(6), vec!["x1^6"]),
        ("C2xC2", builtin::abelian(&[2, 2]), vec!["x1^2", "x2^2", "x1 x2 x1^-1 x2^-1"]),
        ("S3", builtin::symmetric(3), vec!["x1^3", "x2^2", "x1 x2 x1 x2"]),
        ("D8", builtin::dihedral(4), vec!["x1^4", "x2^2", "x1 x2 x1 x2"]),
        ("Q8", builtin::quaternion(), vec!["x1^4", "x1^2 x2^-2", "x2^-1 x1 x2 x1"]),
    ]
}

/// `w^{ord π(w)}` for a few short words `w`; these always lie in the kernel.
fn power_relators(ctx: &QuotientContext, q: &FiniteGroup) -> Result<Vec<FreeWord>, ExperimentError> {
    let r = ctx.rank();
    let mut base = Vec::new();
    for i in 1..=r {
        base.push(FreeWord::generator(r, i)?);
        for j in 1..=r {
            if i != j {
                let (a, b) = (FreeWord::generator(r, i)?, FreeWord::generator(r, j)?);
                base.push(a.concat(&b)?);
                base.push(FreeWord::commutator(&a, &b)?);
                base.push(a.concat(&b.inverse())?.concat(&a)?);
            }
        }
    }
    base.into_iter()
        .map(|w| {
            let k = q.element_order(ctx.evaluate(&w)?);
            Ok(w.pow(k as i64)?)
        })
        .collect()
}

/// Padding for extra generator images beyond the group's own generators.
fn padded_images(q: &FiniteGroup, r: usize) -> Vec<usize> {
    let mut images = q.generators().to_vec();
    let mut j = 0;
    while images.len() < r {
        images.push((j * 5 + 1) % q.order());
        j += 1;
    }
    images
}

pub struct Crowell;

impl Experiment for Crowell {
    fn name(&self) -> &'static str {
        "crowell"
    }

    fn summary(&self) -> &'static str {
        "exactness of R^r → R → Z/n and relator rows in ker f"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let mut o = Outcome::new();
        if let Some(c) = custom_context(cfg, 2)? {
            let complex = build_complex(&c.ctx);
            let ex = exactness_check(&complex);
            o.check("image_equals_kernel", ex.image_equals_kernel && ex.s_surjective, || Value::Null);
            o.check("composite_zero", ex.composite_zero, || Value::Null);
            o.put("kernel_f_size", big(&ex.kernel_f_size));
            o.put("image_f_size", big(&ex.image_f_size));
            if let Some(texts) = &cfg.relators {
                let rels: Vec<FreeWord> = texts.iter().map(|t| parse_word(t, &c.ctx)).collect::<Result<_, _>>()?;
                o.assert("relators_in_kernel", relator_kernel_check(&complex, &rels)?);
                let rm = relation_module_check(&complex, &rels)?;
                o.put("relator_span_size", big(&rm.relator_span_size));
                o.put("relation_module_equals_kernel", rm.equal);
            }
            return Ok(o);
        }

        let corpus: Vec<(String, FiniteGroup)> = group_corpus()?
            .into_iter()
            .filter(|(_, q)| q.order() <= 24 && q.derived_length().is_some())
            .collect();
        let mut tasks: Vec<(&str, &FiniteGroup, usize, u64)> = Vec::new();
        for (name, q) in &corpus {
            for r in q.generators().len().max(1)..=3 {
                for n in RANDOM_MODULI {
                    tasks.push((name, q, r, n));
                }
            }
        }
        let results: Vec<Result<(Value, [bool; 3]), ExperimentError>> = tasks
            .par_iter()
            .map(|(name, q, r, n)| {
                let ctx = QuotientContext::new(q, padded_images(q, *r), ResidueRing::new(*n)?)?;
                let complex = build_complex(&ctx);
                let ex = exactness_check(&complex);
                let rels = power_relators(&ctx, q)?;
                let in_kernel = relator_kernel_check(&complex, &rels)?;
                let row = json!({ "group": name, "r": r, "n": n, "kernel_f_size": big(&ex.kernel_f_size) });
                Ok((row, [ex.image_equals_kernel && ex.s_surjective, ex.composite_zero, in_kernel]))
            })
            .collect();
        let mut rows = Vec::new();
        for res in results {
            let (row, [exact, zero, kernel]) = res?;
            o.check("image_f_equals_kernel_s", exact, || row.clone());
            o.check("s_after_f_is_zero", zero, || row.clone());
            o.check("relator_rows_in_kernel_f", kernel, || row.clone());
            rows.push(row);
        }

        let mut presentations = Vec::new();
        for (name, q, rels) in known_presentations() {
            for n in RANDOM_MODULI {
                let ctx = QuotientContext::from_generators(&q, ResidueRing::new(n)?)?;
                let complex = build_complex(&ctx);
                let words: Vec<FreeWord> = rels.iter().map(|t| parse_word(t, &ctx)).collect::<Result<_, _>>()?;
                let rm = relation_module_check(&complex, &words)?;
                o.check("relation_module_equals_kernel", rm.equal, || json!({ "group": name, "n": n }));
                presentations.push(json!({ "group": name, "n": n, "kernel_f_size": big(&rm.kernel_f_size) }));
            }
        }
        o.put("instances", int(rows.len() as u64));
        o.put("sweep", rows);
        o.put("presentations", presentations);
        Ok(o)
    }
}

/// The (Z/2)^{2g} quotient is enumerated, so the genus stays small.
pub const SURFACE_GENUS_LIMIT: usize = 4;

pub struct Surface;

impl Experiment for Surface {
    fn name(&self) -> &'static str {
        "surface"
    }

    fn summary(&self) -> &'static str {
        "closed surface groups: abelianization, Euler characteristic and Fox calculus of the relator"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
        let genera: Vec<usize> = cfg.genus.map_or_else(|| vec![1, 2, 3], |g| vec![g]);
        if let Some(&g) = genera.iter().find(|&&g| g > SURFACE_GENUS_LIMIT) {
            return Err(ExperimentError::Config(format!("genus {g} exceeds {SURFACE_GENUS_LIMIT}")));
        }
        let punctures = cfg.punctures.unwrap_or(0);
        let modulus = ResidueRing::new(cfg.modulus.unwrap_or(3))?;
        let mut o = Outcome::new();
        let mut rows = Vec::new();
        for g in genera {
            let p = surface_presentation(g)?;
            let ab = presentation_abelianization(&p)?;
            o.check("abelianization_free_of_rank_2g", ab.torsion_free() && ab.free_rank == 2 * g, || {
                json!({ "genus": g, "free_rank": ab.free_rank })
            });
            let rel = &p.relators[0];
            // abelian quotient (Z/2)^{2g} on the standard generators
            let q = builtin::abelian(&vec![2; 2 * g]);
            let mut contexts = vec![QuotientContext::from_generators(&q, modulus)?];
            let s3 = builtin::symmetric(3);
            if g >= 2 {
                // a_1 ↦ t, b_1 ↦ s, a_2 ↦ s, b_2 ↦ t, so [a_1,b_1][a_2,b_2] ↦ 1
                let (t, s) = (s3.generators()[0], s3.generators()[1]);
                let mut images = vec![t, s, s, t];
                images.resize(2 * g, s3.identity());
                contexts.push(QuotientContext::new(&s3, images, modulus)?);
            }
            for ctx in &contexts {
                let complex = build_complex(ctx);
                o.check("relator_in_kernel_f", relator_kernel_check(&complex, std::slice::from_ref(rel))?, || json!(g));
                o.check("expansion_identity", expansion_check(ctx, rel)?.holds, || json!(g));
                o.check("exact", exactness_check(&complex).passed, || json!(g));
            }
            let (chi, hyperbolic) = euler_char(g as u64, punctures);
            rows.push(json!({
                "genus": g,
                "punctures": punctures,
                "euler_characteristic": chi,
                "hyperbolic": hyperbolic,
                "relator": word_value(rel),
                "abelianization_rank": ab.free_rank,
                "torsion": ab.torsion.iter().map(big).collect::<Vec<_>>(),
            }));
        }
        o.put("surfaces", rows);
        Ok(o)
    }
}

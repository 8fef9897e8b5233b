//! Finite Magnus-matrix models of free solvable groups, centralizer
//! experiments in them, surface presentations and the center-freeness scan.
//!
//! Level `j` of a model is the group `W_j` generated by `[[q_i, e_i], [0, 1]]`
//! over `(Z/e)[W_{j−1}]`, where `q_i` is the `i`-th generator of `W_{j−1}` and
//! `W_0` is trivial. These groups have derived length at most `j`; they are
//! finite quotients of the free solvable group and are not claimed to be
//! relatively free.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::crowell::{build_complex, CrowellError, MagnusMatrix};
use crate::fingroup::{
    abelian_invariants, centralizer, conj_action_faithful, derived_series, m_step_quotient, normal_subgroups,
    FiniteGroup, GroupElement, GroupError, Subgroup,
};
use crate::foxcalc::{FoxError, FreeWord, QuotientContext};
use crate::grpring::{mult_matrix, GroupRing, MulTable};
use crate::zmodlin::{howell_form, kernel_basis, smith_normal_form_int, HowellForm, IntMatrix, LinAlgError, RMatrix, ResidueRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid model parameters: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Crowell(#[from] CrowellError),
    #[error(transparent)]
    Fox(#[from] FoxError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Largest base level used as a ring; its multiplication table is stored in full.
pub const BASE_ORDER_LIMIT: usize = 4096;

fn prime_power(e: u64) -> bool {
    if e < 2 {
        return false;
    }
    let p = (2..=e).find(|d| e.is_multiple_of(*d)).expect("e ≥ 2");
    let mut x = e;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

/// A model of level `m`: the enumerated level `W_{m−1}`, the Magnus
/// generators of level `m`, and the module part `K_m` as a `Z/e`-span.
#[derive(Debug)]
pub struct SolvModel {
    pub rank: usize,
    pub exponent: u64,
    pub level: usize,
    /// `W_{m−1}`
    pub base: FiniteGroup<MagnusMatrix>,
    /// `π: F_r → W_{m−1}` with ring `(Z/e)[W_{m−1}]`.
    pub ctx: QuotientContext,
    /// `μ(x_1), …, μ(x_r)`
    pub generators: Vec<MagnusMatrix>,
    /// `W_m` when it was enumerated within the cap.
    pub group: Option<FiniteGroup<MagnusMatrix>>,
    /// Howell basis of `K_m = W_m ∩ {top-left = 1}`, spanned by Schreier vectors.
    pub module: HowellForm,
    /// `t_q` with `top(t_q) = q` for every `q ∈ W_{m−1}`.
    pub transversal: Vec<MagnusMatrix>,
    pub order: BigUint,
}

fn level_generators(ctx: &QuotientContext) -> Result<Vec<MagnusMatrix>, ModelError> {
    Ok((0..ctx.rank()).map(|i| MagnusMatrix::generator(ctx, i)).collect::<Result<_, _>>()?)
}

fn level_context(rank: usize, base: &FiniteGroup<MagnusMatrix>, coeffs: ResidueRing) -> Result<QuotientContext, ModelError> {
    if base.order() > BASE_ORDER_LIMIT {
        return Err(ModelError::InvalidArgument(format!("level of order {} is too large to serve as a ring", base.order())));
    }
    let ring = GroupRing::from_group(coeffs, base);
    let images = if base.order() == 1 { vec![0; rank] } else { base.generators().to_vec() };
    Ok(QuotientContext::with_ring(ring, images)?)
}

/// Enumerates `W_0, …, W_top` with the given element cap.
fn enumerate_levels(r: usize, e: u64, top: usize, cap: usize) -> Result<Vec<FiniteGroup<MagnusMatrix>>, ModelError> {
    let coeffs = ResidueRing::new(e)?;
    let trivial = GroupRing::new(coeffs, MulTable::trivial());
    let w0 = FiniteGroup::generate(MagnusMatrix::identity(&trivial, 0)?, &[], cap)?;
    let mut levels = vec![w0];
    for _ in 0..top {
        let ctx = level_context(r, levels.last().expect("non-empty"), coeffs)?;
        let gens = level_generators(&ctx)?;
        let id = MagnusMatrix::identity(ctx.ring(), r)?;
        levels.push(FiniteGroup::generate(id, &gens, cap)?);
    }
    Ok(levels)
}

fn validate(r: usize, e: u64, m: usize) -> Result<(), ModelError> {
    if r == 0 || m == 0 {
        return Err(ModelError::InvalidArgument("rank and level must be positive".into()));
    }
    if !prime_power(e) {
        return Err(ModelError::InvalidArgument(format!("{e} is not a prime power")));
    }
    Ok(())
}

/// Builds level `m` on top of an enumerated `W_{m−1}`. `W_m` itself is only
/// enumerated when `materialize` is set.
pub fn build_solv_extension(r: usize, e: u64, m: usize, cap: usize, materialize: bool) -> Result<SolvModel, ModelError> {
    validate(r, e, m)?;
    let mut levels = enumerate_levels(r, e, m - 1, cap)?;
    let base = levels.pop().expect("level m−1");
    let ctx = level_context(r, &base, ResidueRing::new(e)?)?;
    let generators = level_generators(&ctx)?;
    let table = ctx.ring().table();
    let d = base.order();
    // transversal by breadth-first search over right multiplication by q_i
    let mut transversal: Vec<Option<MagnusMatrix>> = vec![None; d];
    transversal[0] = Some(MagnusMatrix::identity(ctx.ring(), r)?);
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let q = queue[head];
        head += 1;
        for (k, g) in generators.iter().enumerate() {
            let next = table.mul(q, ctx.images()[k]);
            if transversal[next].is_none() {
                transversal[next] = Some(transversal[q].as_ref().expect("visited").compose(g));
                queue.push(next);
            }
        }
    }
    let transversal: Vec<MagnusMatrix> = transversal.into_iter().map(|t| t.expect("images generate")).collect();
    // Schreier generators t_q μ_k t_{q q_k}⁻¹ generate K_m
    let mut rows = Vec::with_capacity(d * r);
    for q in 0..d {
        for (k, g) in generators.iter().enumerate() {
            let next = table.mul(q, ctx.images()[k]);
            let s = transversal[q].compose(g).compose(&transversal[next].inverse());
            debug_assert!(s.is_translation());
            rows.push(s.right_flat());
        }
    }
    let module = howell_form(&RMatrix::from_residue_rows(ctx.ring().base(), r * d, rows)?);
    let order = BigUint::from(d) * module.span_size();
    let group = if materialize {
        let id = MagnusMatrix::identity(ctx.ring(), r)?;
        Some(FiniteGroup::generate(id, &generators, cap)?)
    } else {
        None
    };
    Ok(SolvModel { rank: r, exponent: e, level: m, base, ctx, generators, group, module, transversal, order })
}

/// Fully enumerated model; fails with `CapExceeded` when `W_m` does not fit.
pub fn build_solv_model(r: usize, e: u64, m: usize, cap: usize) -> Result<SolvModel, ModelError> {
    build_solv_extension(r, e, m, cap, true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSoundness {
    pub order: BigUint,
    /// Schreier span equals `ker f` of the Crowell complex of `W_{m−1}`.
    pub module_is_relation_module: bool,
    /// Conjugating `(1, v)` by `μ(x_i)` gives `(1, x̄_i v)` on every basis vector.
    pub conjugation_formula: bool,
    /// `None` when `W_m` is not enumerated.
    pub derived_length: Option<usize>,
    pub abelian_invariants: Option<Vec<u64>>,
    /// Exactly `r` invariant factors, each dividing `e^m`.
    pub abelianization_sound: Option<bool>,
    /// `K_m` is closed under conjugation by the generators (enumerated models).
    pub module_normal: Option<bool>,
    /// Enumerated order agrees with `|W_{m−1}|·|K_m|`.
    pub order_consistent: Option<bool>,
}

pub fn model_soundness(model: &SolvModel) -> Result<ModelSoundness, ModelError> {
    let complex = build_complex(&model.ctx);
    let module_is_relation_module = complex.kernel_f().matrix() == model.module.matrix();
    let ring = model.ctx.ring();
    let mut conjugation_formula = true;
    for (i, mu) in model.generators.iter().enumerate() {
        let q = model.ctx.images()[i];
        for row in model.module.matrix().row_vectors() {
            let v = MagnusMatrix::new(ring, 0, &row)?;
            let conj = mu.compose(&v).compose(&mu.inverse());
            let mut expected = vec![0u32; row.len()];
            let row32: Vec<u32> = row.iter().map(|&c| c as u32).collect();
            crate::crowell::translate_flat(ring, q, &row32, &mut expected);
            let expected: Vec<u64> = expected.into_iter().map(|c| c as u64).collect();
            conjugation_formula &= conj.is_translation() && conj.right_flat() == expected;
        }
    }
    let (derived_length, abelian, module_normal, order_consistent) = match &model.group {
        Some(w) => {
            let series = derived_series(w);
            let dl = series.last().expect("non-empty").is_trivial().then(|| series.len() - 1);
            let module: Vec<usize> = (0..w.order()).filter(|&x| w.element(x).is_translation()).collect();
            let members: std::collections::HashSet<usize> = module.iter().copied().collect();
            let normal = module
                .iter()
                .all(|&k| w.generators().iter().all(|&g| members.contains(&w.conj(g, k))));
            (dl, Some(abelian_invariants(w)), Some(normal), Some(BigUint::from(w.order()) == model.order))
        }
        None => (None, None, None, None),
    };
    let bound = (model.exponent as u128).checked_pow(model.level as u32);
    let abelianization_sound = abelian.as_ref().map(|f| {
        f.len() == model.rank && f.iter().all(|&d| bound.is_none_or(|b| b % d as u128 == 0))
    });
    Ok(ModelSoundness {
        order: model.order.clone(),
        abelianization_sound,
        module_is_relation_module,
        conjugation_formula,
        derived_length,
        abelian_invariants: abelian,
        module_normal,
        order_consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerReport {
    pub generator: usize,
    pub n: i64,
    pub model_order: BigUint,
    pub module_order: BigUint,
    /// `|K∩|` from the kernel of `(x̄^n − 1)·` on `K_m`.
    pub kernel_ring_route: BigUint,
    /// `|K∩|` from conjugating basis vectors by `μ(x_i)^n` in the group.
    pub kernel_group_route: BigUint,
    pub routes_agree: bool,
    /// `|C ∩ K_m|` by enumerating the centralizer, when `W_m` is enumerated.
    pub kernel_brute_force: Option<BigUint>,
    pub brute_force_agrees: Option<bool>,
    /// `|C|` from the fibre computation over `W_{m−1}`.
    pub centralizer_order: BigUint,
    pub centralizer_brute_force: Option<usize>,
    /// Order of `μ(x_i)`.
    pub cyclic_order: usize,
    /// Fibres of `C` lie exactly over `⟨q_i⟩`, i.e. `C = ⟨μ(x_i)⟩·K∩`.
    pub product_formula: bool,
    pub product_formula_brute_force: Option<bool>,
    pub passed: bool,
}

/// `v ↦ λ·v` on each of the `r` components, as a block diagonal matrix.
fn block_diagonal(block: &RMatrix, r: usize) -> RMatrix {
    let d = block.rows();
    let mut m = RMatrix::zeros(block.ring(), r * d, r * d);
    for c in 0..r {
        for i in 0..d {
            for j in 0..d {
                m.set(c * d + i, c * d + j, block.get(i, j));
            }
        }
    }
    m
}

fn span_of(ring: ResidueRing, width: usize, coeffs: &RMatrix, basis: &RMatrix) -> Result<HowellForm, ModelError> {
    if coeffs.rows() == 0 {
        return Ok(howell_form(&RMatrix::zeros(ring, 0, width)));
    }
    Ok(howell_form(&coeffs.mul(basis)?))
}

/// Centralizer of `μ(x_i)^n` (one-based `i`) in `W_m`.
pub fn centralizer_experiment(model: &SolvModel, i: usize, n: i64) -> Result<CentralizerReport, ModelError> {
    if i == 0 || i > model.rank {
        return Err(ModelError::InvalidArgument(format!("generator {i} outside 1..={}", model.rank)));
    }
    if n == 0 || n % model.exponent as i64 == 0 {
        return Err(ModelError::PreconditionViolated(format!(
            "x_{i}^{n} is trivial in the abelianization (Z/{})^{}",
            model.exponent, model.rank
        )));
    }
    let ring = model.ctx.ring();
    let base = ring.base();
    let table = ring.table();
    let r = model.rank;
    let width = r * ring.dimension();
    let mu = &model.generators[i - 1];
    let p = mu.pow(n);
    let pt = p.top();
    let pv: Vec<u32> = p.right_flat().into_iter().map(|c| c as u32).collect();
    let basis = model.module.matrix();

    // ring route: B · diag(x̄^n − 1)
    let op = ring.embed(pt).sub(&ring.one()).expect("same ring");
    let bl = basis.mul(&block_diagonal(&mult_matrix(&op), r))?;
    let kernel_ring = span_of(base, width, &kernel_basis(&bl), basis)?;

    // group route: p (1, b) p⁻¹ − (1, b)
    let p_inv = p.inverse();
    let mut diffs = Vec::with_capacity(basis.rows());
    for row in basis.row_vectors() {
        let c = p.compose(&MagnusMatrix::new(ring, 0, &row)?).compose(&p_inv);
        diffs.push(c.right_flat().iter().zip(&row).map(|(&a, &b)| base.sub(a, b)).collect());
    }
    let diff = RMatrix::from_residue_rows(base, width, diffs)?;
    let kernel_group = span_of(base, width, &kernel_basis(&diff), basis)?;
    let routes_agree = kernel_ring.matrix() == kernel_group.matrix();

    // fibres: (q, v₀ + k) commutes with p iff qp_t = p_t q and (p_t − 1)·k = q·p_v − p_v − (p_t − 1)·v₀
    let bl_howell = howell_form(&bl);
    let mut translated = vec![0u32; width];
    let mut feasible = Vec::new();
    for q in 0..ring.dimension() {
        if table.mul(q, pt) != table.mul(pt, q) {
            continue;
        }
        let t = &model.transversal[q];
        let v0: Vec<u32> = t.right_flat().into_iter().map(|c| c as u32).collect();
        let mut rhs = vec![0u64; width];
        crate::crowell::translate_flat(ring, q, &pv, &mut translated);
        for (k, x) in rhs.iter_mut().enumerate() {
            *x = base.sub(translated[k] as u64, pv[k] as u64);
        }
        crate::crowell::translate_flat(ring, pt, &v0, &mut translated);
        for (k, x) in rhs.iter_mut().enumerate() {
            *x = base.sub(*x, base.sub(translated[k] as u64, v0[k] as u64));
        }
        if bl_howell.contains(&rhs) {
            feasible.push(q);
        }
    }
    let q_i = model.ctx.images()[i - 1];
    let mut cyclic_tops = vec![0usize];
    let mut x = q_i;
    while x != 0 {
        cyclic_tops.push(x);
        x = table.mul(x, q_i);
    }
    cyclic_tops.sort_unstable();
    let product_formula = feasible == cyclic_tops;
    let centralizer_order = BigUint::from(feasible.len()) * kernel_ring.span_size();
    let cyclic_order = {
        let id = MagnusMatrix::identity(ring, r)?;
        let mut acc = mu.clone();
        let mut k = 1;
        while acc != id {
            acc = acc.compose(mu);
            k += 1;
        }
        k
    };

    let (kernel_brute_force, brute_force_agrees, centralizer_brute_force, product_formula_brute_force) = match &model.group {
        Some(w) => {
            let p_idx = w.index_of(&p).expect("power lies in the group");
            let c = centralizer(w, &[p_idx]);
            let in_module: Vec<usize> = c.elements().iter().copied().filter(|&x| w.element(x).is_translation()).collect();
            let vectors: Vec<Vec<u64>> = in_module.iter().map(|&x| w.element(x).right_flat()).collect();
            let brute = howell_form(&RMatrix::from_residue_rows(base, width, vectors)?);
            let agrees = brute.matrix() == kernel_ring.matrix() && BigUint::from(in_module.len()) == kernel_ring.span_size();
            let mut gens = vec![w.index_of(mu).expect("generator")];
            for row in kernel_ring.matrix().row_vectors() {
                gens.push(w.index_of(&MagnusMatrix::new(ring, 0, &row)?).expect("kernel vector lies in the group"));
            }
            let product = Subgroup::generated(w, &gens);
            (Some(BigUint::from(in_module.len())), Some(agrees), Some(c.order()), Some(product.elements() == c.elements()))
        }
        None => (None, None, None, None),
    };
    let passed = routes_agree
        && product_formula
        && brute_force_agrees.unwrap_or(true)
        && product_formula_brute_force.unwrap_or(true)
        && centralizer_brute_force.is_none_or(|c| BigUint::from(c) == centralizer_order);
    Ok(CentralizerReport {
        generator: i,
        n,
        model_order: model.order.clone(),
        module_order: model.module.span_size(),
        kernel_ring_route: kernel_ring.span_size(),
        kernel_group_route: kernel_group.span_size(),
        routes_agree,
        kernel_brute_force,
        brute_force_agrees,
        centralizer_order,
        centralizer_brute_force,
        cyclic_order,
        product_formula,
        product_formula_brute_force,
        passed,
    })
}

/// `χ = 2 − 2g − r` and whether the type is hyperbolic (`χ < 0`).
pub fn euler_char(genus: u64, punctures: u64) -> (i64, bool) {
    let chi = 2 - 2 * genus as i64 - punctures as i64;
    (chi, chi < 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationData {
    pub rank: usize,
    pub relators: Vec<FreeWord>,
    /// Relators × generators.
    pub exponent_sums: Vec<Vec<i64>>,
}

impl PresentationData {
    pub fn new(rank: usize, relators: Vec<FreeWord>) -> Result<Self, ModelError> {
        if let Some(w) = relators.iter().find(|w| w.rank() > rank) {
            return Err(ModelError::InvalidArgument(format!("relator {w} uses more than {rank} generators")));
        }
        let exponent_sums = relators
            .iter()
            .map(|w| {
                let mut s = w.exponent_sums();
                s.resize(rank, 0);
                s
            })
            .collect();
        Ok(PresentationData { rank, relators, exponent_sums })
    }
}

/// `⟨a_1, b_1, …, a_g, b_g | Π [a_i, b_i]⟩` with `a_i = x_{2i−1}`, `b_i = x_{2i}`.
pub fn surface_presentation(genus: usize) -> Result<PresentationData, ModelError> {
    if genus == 0 {
        return Err(ModelError::InvalidArgument("genus must be at least 1".into()));
    }
    let rank = 2 * genus;
    let mut rel = FreeWord::empty(rank);
    for i in 0..genus {
        let a = FreeWord::generator(rank, 2 * i + 1)?;
        let b = FreeWord::generator(rank, 2 * i + 2)?;
        rel = rel.concat(&FreeWord::commutator(&a, &b)?)?;
    }
    PresentationData::new(rank, vec![rel])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    /// Invariant factors greater than 1.
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl Abelianization {
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

pub fn presentation_abelianization(p: &PresentationData) -> Result<Abelianization, ModelError> {
    if p.relators.is_empty() {
        return Ok(Abelianization { torsion: Vec::new(), free_rank: p.rank });
    }
    let snf = smith_normal_form_int(&IntMatrix::from_rows(&p.exponent_sums, p.rank)?)?;
    let torsion = snf
        .torsion()
        .into_iter()
        .map(|d| d.magnitude().clone())
        .filter(|d| !d.is_one())
        .collect();
    Ok(Abelianization { torsion, free_rank: snf.cokernel_free_rank() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterfreeRow {
    pub name: String,
    pub order: usize,
    pub center_order: usize,
    pub quotient_order: usize,
    pub quotient_center_order: usize,
    /// `Z(G) = 1` and `Z(G^(m)) ≠ 1`.
    pub flagged: bool,
    /// `(|N|, faithful)` for every normal `N ⊇ G^[m−1]`; empty for `m = 0`.
    pub faithfulness: Vec<(usize, bool)>,
    /// `Z(G^(m))` lies in the image of `G^[m−1]`.
    pub center_in_derived: Option<bool>,
}

pub fn centerfree_row<E: GroupElement>(name: &str, g: &FiniteGroup<E>, m: usize) -> Result<CenterfreeRow, ModelError> {
    let q = m_step_quotient(g, m)?;
    let center_order = g.center().order();
    let qz = q.group.center();
    let (faithfulness, center_in_derived) = if m == 0 {
        (Vec::new(), None)
    } else {
        let series = derived_series(g);
        let prev = &series[(m - 1).min(series.len() - 1)];
        let mut rows = Vec::new();
        for n in normal_subgroups(g) {
            if prev.is_subset_of(&n) {
                rows.push((n.order(), conj_action_faithful(g, &n)?.faithful));
            }
        }
        let image: std::collections::HashSet<usize> = prev.elements().iter().map(|&x| q.projection.image(x)).collect();
        (rows, Some(qz.elements().iter().all(|z| image.contains(z))))
    };
    Ok(CenterfreeRow {
        name: name.to_string(),
        order: g.order(),
        center_order,
        quotient_order: q.group.order(),
        quotient_center_order: qz.order(),
        flagged: center_order == 1 && qz.order() != 1,
        faithfulness,
        center_in_derived,
    })
}

/// Rows in corpus order; members are processed in parallel.
pub fn centerfree_scan<E: GroupElement>(corpus: &[(String, FiniteGroup<E>)], m: usize) -> Result<Vec<CenterfreeRow>, ModelError> {
    corpus.par_iter().map(|(name, g)| centerfree_row(name, g, m)).collect()
}

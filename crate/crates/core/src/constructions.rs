//! Explicit constructions: the order-72 counterexample, the matrix reduction
//! lemma, left regular representations and the block-triangular centralizer
//! experiment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::fingroup::{
    closure, iso_test_small, m_step_quotient, FiniteGroup, GroupElem, GroupElement, GroupError, Homomorphism, Perm,
    Quotient, Subgroup, DEFAULT_CAP,
};
use crate::zmodlin::{howell_form, is_prime, ord_p, solve_linear, LinAlgError, RMatrix, ResidueRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `(Z/n)^k ⋊ H` where generator `i` of `H` acts on column vectors by
/// `actions[i]`.
#[derive(Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    /// Whether `H → GL_k(Z/n)` is injective. Faithful actions are realized as
    /// affine maps of `(Z/n)^k`, others as the left regular action on `N × H`.
    pub faithful: bool,
    pub degree: usize,
}

fn encode(v: &[u64], n: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * n as usize + c as usize)
}

fn decode(mut x: usize, n: u64, k: usize) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let c = (x % n as usize) as u64;
            x /= n as usize;
            c
        })
        .collect()
}

fn act(a: &RMatrix, v: &[u64]) -> Vec<u64> {
    let r = a.ring();
    (0..a.rows()).map(|i| (0..a.cols()).fold(0, |acc, j| r.add(acc, r.mul(a.get(i, j), v[j])))).collect()
}

pub const SEMIDIRECT_POINT_LIMIT: usize = 1 << 16;

pub fn semidirect_product(
    modulus: u64,
    dim: usize,
    h: &FiniteGroup,
    actions: &[RMatrix],
) -> Result<SemidirectProduct, ConstructionError> {
    let ring = ResidueRing::new(modulus)?;
    if actions.len() != h.generators().len() {
        return Err(ConstructionError::PreconditionViolated(format!(
            "{} action matrices for {} generators",
            actions.len(),
            h.generators().len()
        )));
    }
    for a in actions {
        if a.rows() != dim || a.cols() != dim || a.ring() != ring {
            return Err(ConstructionError::PreconditionViolated(format!("action matrices must be {dim}x{dim} over Z/{modulus}")));
        }
    }
    let points = (modulus as usize).checked_pow(dim as u32).filter(|&p| p <= SEMIDIRECT_POINT_LIMIT);
    let Some(npoints) = points else {
        return Err(ConstructionError::PreconditionViolated("normal subgroup too large".into()));
    };
    let mats: Vec<GroupElem> = actions.iter().map(|a| GroupElem::matrix(a.clone())).collect::<Result<_, _>>()?;
    let image = if mats.is_empty() {
        closure(&[GroupElem::Matrix(RMatrix::identity(ring, dim))], DEFAULT_CAP)?
    } else {
        closure(&mats, DEFAULT_CAP)?
    };
    let gen_images: Vec<usize> = if mats.is_empty() { Vec::new() } else { image.generators().to_vec() };
    let phi = Homomorphism::from_generator_images(h, &image, &gen_images)
        .map_err(|_| ConstructionError::PreconditionViolated("action matrices do not define a homomorphism".into()))?;
    let faithful = phi.is_injective();
    let vectors: Vec<Vec<u64>> = (0..npoints).map(|x| decode(x, modulus, dim)).collect();
    let hs = h.order();
    let degree = if faithful { npoints } else { npoints * hs };
    if degree > SEMIDIRECT_POINT_LIMIT {
        return Err(ConstructionError::PreconditionViolated("permutation degree too large".into()));
    }
    let mut gens = Vec::new();
    for j in 0..dim {
        let shift = |v: &[u64]| {
            let mut w = v.to_vec();
            w[j] = ring.add(w[j], 1);
            encode(&w, modulus)
        };
        let images: Vec<u32> = if faithful {
            vectors.iter().map(|v| shift(v) as u32).collect()
        } else {
            (0..degree).map(|p| (shift(&vectors[p / hs]) * hs + p % hs) as u32).collect()
        };
        gens.push(GroupElem::Perm(Perm::from_images(images)?));
    }
    for (&g, a) in h.generators().iter().zip(actions) {
        let images: Vec<u32> = if faithful {
            vectors.iter().map(|v| encode(&act(a, v), modulus) as u32).collect()
        } else {
            (0..degree)
                .map(|p| (encode(&act(a, &vectors[p / hs]), modulus) * hs + h.mul(g, p % hs)) as u32)
                .collect()
        };
        gens.push(GroupElem::Perm(Perm::from_images(images)?));
    }
    let group = closure(&gens, DEFAULT_CAP)?;
    if group.order() != npoints * hs {
        return Err(ConstructionError::PreconditionViolated(format!(
            "semidirect product has order {} instead of {}",
            group.order(),
            npoints * hs
        )));
    }
    Ok(SemidirectProduct { group, faithful, degree })
}

/// The two matrices of the dihedral action on `F_3²`, for the generators
/// `r` (rotation) and `s` (reflection) of the builtin `D8`.
pub fn counterexample_action() -> [RMatrix; 2] {
    let f3 = ResidueRing::new(3).expect("prime");
    [
        RMatrix::from_rows(f3, &[[0, -1], [1, 0]]).expect("2x2"),
        RMatrix::from_rows(f3, &[[1, 0], [0, -1]]).expect("2x2"),
    ]
}

#[derive(Debug)]
pub struct CounterexampleBundle {
    pub group: FiniteGroup,
    pub quotient: Quotient,
    pub d8: FiniteGroup,
    /// `G/G^[2] → D8`
    pub iso: Homomorphism,
    pub center_order: usize,
    pub quotient_center_order: usize,
    pub derived_orders: Vec<usize>,
}

pub fn build_counterexample() -> Result<CounterexampleBundle, ConstructionError> {
    let d8 = crate::fingroup::builtin::dihedral(4);
    let sp = semidirect_product(3, 2, &d8, &counterexample_action())?;
    let group = sp.group;
    let quotient = m_step_quotient(&group, 2)?;
    let iso = iso_test_small(&quotient.group, &d8)?
        .ok_or_else(|| ConstructionError::PreconditionViolated("second solvable quotient is not D8".into()))?;
    let derived_orders = crate::fingroup::derived_series(&group).iter().map(|s| s.order()).collect();
    Ok(CounterexampleBundle {
        center_order: group.center().order(),
        quotient_center_order: quotient.group.center().order(),
        group,
        quotient,
        d8,
        iso,
        derived_orders,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOutcome {
    /// `ñE = 0` and `E ≡ 0 mod ℓ`.
    Pass,
    /// `ñE ≠ 0`; the lemma says nothing.
    Vacuous,
    /// `ñE = 0` but `E ≢ 0 mod ℓ`.
    Fail,
}

/// If `ñE = 0` over `Z/ℓ^σ` with `σ > ord_ℓ(ñ)`, then `E ≡ 0 mod ℓ`.
pub fn reduction_lemma_check(e: &RMatrix, n_tilde: i64, ell: u64, sigma: u32) -> Result<ReductionOutcome, ConstructionError> {
    if !is_prime(ell) || sigma == 0 {
        return Err(ConstructionError::PreconditionViolated(format!("need a prime ℓ and σ ≥ 1, got ℓ={ell}, σ={sigma}")));
    }
    if n_tilde == 0 || sigma <= ord_p(n_tilde as i128, ell) {
        return Err(ConstructionError::PreconditionViolated(format!("σ = {sigma} must exceed ord_{ell}({n_tilde})")));
    }
    if e.modulus() != ell.pow(sigma) {
        return Err(ConstructionError::PreconditionViolated(format!("matrix is over Z/{}, expected Z/{}", e.modulus(), ell.pow(sigma))));
    }
    if !e.scale_signed(n_tilde).is_zero() {
        return Ok(ReductionOutcome::Vacuous);
    }
    let phi = e.reduce_mod(ResidueRing::new(ell)?)?;
    Ok(if phi.is_zero() { ReductionOutcome::Pass } else { ReductionOutcome::Fail })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub instances: u64,
    pub passes: u64,
    pub vacuous: u64,
    pub failures: u64,
}

impl SweepSummary {
    fn record(&mut self, o: ReductionOutcome) {
        self.instances += 1;
        match o {
            ReductionOutcome::Pass => self.passes += 1,
            ReductionOutcome::Vacuous => self.vacuous += 1,
            ReductionOutcome::Fail => self.failures += 1,
        }
    }

    fn merge(mut self, o: SweepSummary) -> SweepSummary {
        self.instances += o.instances;
        self.passes += o.passes;
        self.vacuous += o.vacuous;
        self.failures += o.failures;
        self
    }
}

/// Every `u×u` matrix over `Z/ℓ^σ` against every admissible `ñ` with `|ñ| ≤ n_max`.
pub fn reduction_lemma_sweep(u_max: usize, ells: &[u64], sigma_max: u32, n_max: i64) -> Result<SweepSummary, ConstructionError> {
    if let Some(&ell) = ells.iter().find(|&&l| !crate::zmodlin::is_prime(l)) {
        return Err(ConstructionError::PreconditionViolated(format!("ℓ must be prime, got {ell}")));
    }
    if sigma_max == 0 {
        return Err(ConstructionError::PreconditionViolated("σ must be at least 1".into()));
    }
    let mut total = SweepSummary::default();
    for &ell in ells {
        for sigma in 1..=sigma_max {
            let ring = ResidueRing::new(ell.pow(sigma))?;
            let q = ring.modulus();
            let ns: Vec<i64> =
                (-n_max..=n_max).filter(|&n| n != 0 && sigma > ord_p(n as i128, ell)).collect();
            for u in 1..=u_max {
                let cells = u * u;
                let count = q.checked_pow(cells as u32).ok_or_else(|| {
                    ConstructionError::PreconditionViolated("exhaustive sweep too large".into())
                })?;
                let part = (0..count)
                    .into_par_iter()
                    .map(|code| {
                        let mut s = SweepSummary::default();
                        let data = decode(code as usize, q, cells);
                        let rows: Vec<Vec<u64>> = data.chunks(u).map(|c| c.to_vec()).collect();
                        let e = RMatrix::from_residue_rows(ring, u, rows).expect("u columns");
                        for &n in &ns {
                            s.record(reduction_lemma_check(&e, n, ell, sigma).expect("admissible instance"));
                        }
                        s
                    })
                    .reduce(SweepSummary::default, SweepSummary::merge);
                total = total.merge(part);
            }
        }
    }
    Ok(total)
}

/// Random instances with `u ≤ u_max`, `ℓ ∈ {2, 3, 5}`, `σ ≤ 4`. Every other
/// matrix is drawn from the annihilator of `ñ` so that non-vacuous cases occur.
pub fn reduction_lemma_random(count: usize, u_max: usize, seed: u64) -> Result<SweepSummary, ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SweepSummary::default();
    for k in 0..count {
        let ell = [2u64, 3, 5][rng.gen_range(0..3)];
        let sigma = rng.gen_range(1..=4u32);
        let n = loop {
            let mag = rng.gen_range(1..=60i64);
            let n = if rng.gen_bool(0.5) { mag } else { -mag };
            if sigma > ord_p(n as i128, ell) {
                break n;
            }
        };
        let ring = ResidueRing::new(ell.pow(sigma))?;
        let u = rng.gen_range(1..=u_max);
        let step = if k % 2 == 0 { 1 } else { ell.pow(sigma - ord_p(n as i128, ell)) };
        let rows: Vec<Vec<u64>> = (0..u)
            .map(|_| (0..u).map(|_| rng.gen_range(0..ring.modulus()) * step % ring.modulus()).collect())
            .collect();
        let e = RMatrix::from_residue_rows(ring, u, rows)?;
        s.record(reduction_lemma_check(&e, n, ell, sigma)?);
    }
    Ok(s)
}

/// Left regular representation `g ↦ M_g`, `M_g[gh][h] = 1`, so that
/// `M_g M_k = M_{gk}` under the ordinary matrix product.
#[derive(Debug)]
pub struct RegularRepresentation {
    pub matrices: Vec<RMatrix>,
    pub image: FiniteGroup,
    pub hom: Homomorphism,
}

pub fn regular_matrix<E: GroupElement>(g: &FiniteGroup<E>, ring: ResidueRing, x: usize) -> RMatrix {
    let mut m = RMatrix::zeros(ring, g.order(), g.order());
    for h in 0..g.order() {
        m.set(g.mul(x, h), h, 1);
    }
    m
}

pub fn regular_representation<E: GroupElement>(
    g: &FiniteGroup<E>,
    ring: ResidueRing,
) -> Result<RegularRepresentation, ConstructionError> {
    let matrices: Vec<RMatrix> = (0..g.order()).map(|x| regular_matrix(g, ring, x)).collect();
    let elems: Vec<GroupElem> = matrices.iter().map(|m| GroupElem::Matrix(m.clone())).collect();
    let image = FiniteGroup::from_elements(elems, g.generators().to_vec())?;
    let hom = Homomorphism::checked(g, &image, (0..g.order()).collect())?;
    Ok(RegularRepresentation { matrices, image, hom })
}

impl RegularRepresentation {
    /// Whether distinct elements stay distinct after reducing modulo `ell`.
    pub fn injective_mod(&self, ell: u64) -> Result<bool, ConstructionError> {
        let target = ResidueRing::new(ell)?;
        let mut reduced: Vec<RMatrix> =
            self.matrices.iter().map(|m| m.reduce_mod(target)).collect::<Result<_, _>>()?;
        let n = reduced.len();
        reduced.sort_by(|a, b| a.data().cmp(b.data()));
        reduced.dedup();
        Ok(reduced.len() == n)
    }
}

/// `G` embedded in `GL_u(Z/ℓ^σ)` by its regular representation, with `ρ(x)`
/// of order `s` and the exponent `n` of the centralized element.
#[derive(Debug)]
pub struct GTildeInstance {
    pub group: FiniteGroup,
    pub x: usize,
    pub n: u64,
    pub ell: u64,
    pub sigma: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTildeReport {
    pub u: usize,
    pub s: usize,
    pub pairs_checked: usize,
    /// `(A, C)` as element indices of `G`.
    pub feasible_pairs: Vec<(usize, usize)>,
    pub all_diagonal: bool,
    pub exactly_diagonal: bool,
    /// Every feasible pair's solution `B` was re-verified by matrix products.
    pub witnesses_verified: bool,
    pub reduction_injective: bool,
    pub passed: bool,
}

impl GTildeInstance {
    pub fn validate(&self) -> Result<(usize, ResidueRing), ConstructionError> {
        if !is_prime(self.ell) {
            return Err(ConstructionError::PreconditionViolated(format!("{} is not prime", self.ell)));
        }
        if self.n == 0 || self.x >= self.group.order() {
            return Err(ConstructionError::PreconditionViolated("need n ≥ 1 and x in G".into()));
        }
        let s = self.group.element_order(self.x);
        let sn = (s as u64).checked_mul(self.n).ok_or_else(|| ConstructionError::PreconditionViolated("s·n overflows".into()))?;
        if self.sigma <= ord_p(sn as i128, self.ell) {
            return Err(ConstructionError::PreconditionViolated(format!(
                "σ = {} must exceed ord_{}(s·n) = {}",
                self.sigma,
                self.ell,
                ord_p(sn as i128, self.ell)
            )));
        }
        let modulus = self.ell.checked_pow(self.sigma).ok_or_else(|| ConstructionError::PreconditionViolated("ℓ^σ overflows".into()))?;
        Ok((s, ResidueRing::new(modulus)?))
    }
}

/// The matrix of `B ↦ BD − DB` on `u×u` matrices flattened row-major.
fn commutator_operator(d: &RMatrix) -> RMatrix {
    let u = d.rows();
    let r = d.ring();
    let mut rows = Vec::with_capacity(u * u);
    for i in 0..u {
        for j in 0..u {
            // E_ij D has row i equal to row j of D; D E_ij has column j equal to column i of D
            let mut v = vec![0u64; u * u];
            for c in 0..u {
                v[i * u + c] = r.add(v[i * u + c], d.get(j, c));
            }
            for a in 0..u {
                v[a * u + j] = r.sub(v[a * u + j], d.get(a, i));
            }
            rows.push(v);
        }
    }
    RMatrix::from_residue_rows(r, u * u, rows).expect("u² columns")
}

/// For each `(A, C) ∈ G × ⟨ρ(x)⟩`, decides whether some `B` makes
/// `[[A, B], [0, C]]` commute with `ψ(x)^n`, where `ψ(x) = [[ρ(x), ρ(x)], [0, ρ(x)]]`.
pub fn gtilde_experiment(inst: &GTildeInstance) -> Result<GTildeReport, ConstructionError> {
    let (s, ring) = inst.validate()?;
    let rep = regular_representation(&inst.group, ring)?;
    let u = inst.group.order();
    let p = &rep.matrices[inst.x];
    // ψ(x)^n = [[D, E], [0, D]] by block multiplication
    let mut d = RMatrix::identity(ring, u);
    let mut e = RMatrix::zeros(ring, u, u);
    for _ in 0..inst.n {
        let dp = d.mul(p)?;
        e = dp.add(&e.mul(p)?)?;
        d = dp;
    }
    let op = commutator_operator(&d);
    let op_howell = howell_form(&op);
    let cyclic: Vec<usize> = Subgroup::generated(&inst.group, &[inst.x]).elements().to_vec();
    let pairs: Vec<(usize, usize)> = (0..u).flat_map(|a| cyclic.iter().map(move |&c| (a, c))).collect();
    let results: Vec<Result<Option<((usize, usize), bool)>, ConstructionError>> = pairs
        .par_iter()
        .map(|&(a, c)| {
            let am = &rep.matrices[a];
            let cm = &rep.matrices[c];
            if am.mul(&d)? != d.mul(am)? || cm.mul(&d)? != d.mul(cm)? {
                return Ok(None);
            }
            let rhs = e.mul(cm)?.sub(&am.mul(&e)?)?;
            if !op_howell.contains(rhs.data()) {
                return Ok(None);
            }
            let sol = solve_linear(&op, rhs.data())?;
            let Some(b) = sol.particular else {
                return Ok(Some(((a, c), false)));
            };
            let rows: Vec<Vec<u64>> = b.chunks(u).map(|r| r.to_vec()).collect();
            let bm = RMatrix::from_residue_rows(ring, u, rows)?;
            // [[A,B],[0,C]]·[[D,E],[0,D]] against [[D,E],[0,D]]·[[A,B],[0,C]]
            let top_left = am.mul(&d)? == d.mul(am)?;
            let top_right = am.mul(&e)?.add(&bm.mul(&d)?)? == d.mul(&bm)?.add(&e.mul(cm)?)?;
            Ok(Some(((a, c), top_left && top_right)))
        })
        .collect();
    let mut feasible_pairs = Vec::new();
    let mut witnesses_verified = true;
    for r in results {
        if let Some((pair, ok)) = r? {
            feasible_pairs.push(pair);
            witnesses_verified &= ok;
        }
    }
    let all_diagonal = feasible_pairs.iter().all(|&(a, c)| a == c);
    let diagonal: Vec<(usize, usize)> = cyclic.iter().map(|&c| (c, c)).collect();
    let exactly_diagonal = feasible_pairs == diagonal;
    let reduction_injective = rep.injective_mod(inst.ell)?;
    Ok(GTildeReport {
        u,
        s,
        pairs_checked: pairs.len(),
        passed: all_diagonal && witnesses_verified && reduction_injective,
        feasible_pairs,
        all_diagonal,
        exactly_diagonal,
        witnesses_verified,
        reduction_injective,
    })
}

fn perm(degree: usize, cycles: &[&[usize]]) -> GroupElem {
    let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
    GroupElem::Perm(Perm::from_cycles(degree, &cycles).expect("valid cycles"))
}

fn matrices(modulus: u64, rows: &[&[&[i64]]]) -> Vec<GroupElem> {
    let ring = ResidueRing::new(modulus).expect("modulus ≥ 2");
    rows.iter()
        .map(|m| GroupElem::matrix(RMatrix::from_rows(ring, m).expect("square")).expect("invertible"))
        .collect()
}

/// The standard test corpus: small groups of assorted shapes up to order 128,
/// including the order-72 counterexample and the model `W(2,2,2)` in its
/// regular permutation representation.
pub fn group_corpus() -> Result<Vec<(String, FiniteGroup)>, ConstructionError> {
    use crate::fingroup::builtin;
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    for k in [1, 2, 3, 4, 5, 6, 8] {
        out.push((format!("C{k}"), builtin::cyclic(k)));
    }
    out.push(("C2xC2".into(), builtin::abelian(&[2, 2])));
    out.push(("C2xC4".into(), builtin::abelian(&[2, 4])));
    out.push(("C3xC3".into(), builtin::abelian(&[3, 3])));
    out.push(("C2xC2xC2".into(), builtin::abelian(&[2, 2, 2])));
    out.push(("S3".into(), builtin::symmetric(3)));
    out.push(("D8".into(), builtin::dihedral(4)));
    out.push(("Q8".into(), builtin::quaternion()));
    out.push(("D10".into(), builtin::dihedral(5)));
    out.push(("D12".into(), builtin::dihedral(6)));
    out.push(("D16".into(), builtin::dihedral(8)));
    out.push(("AGL(1,5)".into(), closure(&[perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[1, 2, 4, 3]])], DEFAULT_CAP)?));
    out.push(("A4".into(), builtin::alternating(4)));
    out.push(("S4".into(), builtin::symmetric(4)));
    out.push(("SL(2,3)".into(), closure(&matrices(3, &[&[&[1, 1], &[0, 1]], &[&[0, -1], &[1, 0]]]), DEFAULT_CAP)?));
    out.push((
        "Heis(3)".into(),
        closure(
            &matrices(3, &[&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]], &[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]]),
            DEFAULT_CAP,
        )?,
    ));
    out.push(("GL(2,3)".into(), closure(&matrices(3, &[&[&[1, 1], &[0, 1]], &[&[-1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]]), DEFAULT_CAP)?));
    out.push(("A5".into(), builtin::alternating(5)));
    out.push(("counterexample".into(), build_counterexample()?.group));
    out.push(("S5".into(), builtin::symmetric(5)));
    let model = crate::models::build_solv_model(2, 2, 2, DEFAULT_CAP)
        .map_err(|e| ConstructionError::PreconditionViolated(e.to_string()))?;
    let w = model.group.as_ref().expect("enumerated model");
    out.push(("W(2,2,2)".into(), crate::fingroup::as_permutation_group(w)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;

    #[test]
    fn corpus_orders() {
        let c = group_corpus().unwrap();
        let find = |name: &str| c.iter().find(|(n, _)| n == name).unwrap().1.order();
        assert_eq!(find("SL(2,3)"), 24);
        assert_eq!(find("GL(2,3)"), 48);
        assert_eq!(find("Heis(3)"), 27);
        assert_eq!(find("AGL(1,5)"), 20);
        assert_eq!(find("W(2,2,2)"), 128);
        assert!(c.iter().all(|(_, g)| g.order() <= 128));
    }

    #[test]
    fn sweep_rejects_composite_ell() {
        assert!(reduction_lemma_sweep(1, &[4], 1, 3).is_err());
        assert!(reduction_lemma_sweep(1, &[2], 0, 3).is_err());
    }

    #[test]
    fn counterexample_invariants() {
        let b = build_counterexample().unwrap();
        assert_eq!(b.group.order(), 72);
        assert_eq!(b.center_order, 1);
        assert_eq!(b.quotient.group.order(), 8);
        assert_eq!(b.quotient_center_order, 2);
        assert!(b.iso.is_injective() && b.iso.is_surjective());
    }

    #[test]
    fn unfaithful_action_uses_regular_points() {
        let c2 = builtin::cyclic(2);
        let f3 = ResidueRing::new(3).unwrap();
        let sp = semidirect_product(3, 1, &c2, &[RMatrix::identity(f3, 1)]).unwrap();
        assert!(!sp.faithful);
        assert_eq!(sp.group.order(), 6);
        assert!(sp.group.is_abelian());
        let sp = semidirect_product(3, 1, &c2, &[RMatrix::from_rows(f3, &[[-1]]).unwrap()]).unwrap();
        assert!(sp.faithful);
        assert_eq!(sp.degree, 3);
        assert!(!sp.group.is_abelian());
    }

    #[test]
    fn bad_action_rejected() {
        let c2 = builtin::cyclic(2);
        let z5 = ResidueRing::new(5).unwrap();
        // 2 has order 4 mod 5, so it cannot be the image of an involution
        let err = semidirect_product(5, 1, &c2, &[RMatrix::from_rows(z5, &[[2]]).unwrap()]).unwrap_err();
        assert!(matches!(err, ConstructionError::PreconditionViolated(_)));
    }

    #[test]
    fn reduction_lemma_examples() {
        let z9 = ResidueRing::new(9).unwrap();
        let e = RMatrix::identity(z9, 2).scale(3);
        assert_eq!(reduction_lemma_check(&e, 3, 3, 2).unwrap(), ReductionOutcome::Pass);
        let z8 = ResidueRing::new(8).unwrap();
        for v in 0..8 {
            let e = RMatrix::from_rows(z8, &[[v]]).unwrap();
            let out = reduction_lemma_check(&e, 2, 2, 3).unwrap();
            assert_ne!(out, ReductionOutcome::Fail);
            assert_eq!(out == ReductionOutcome::Pass, v % 4 == 0);
        }
        let e = RMatrix::from_rows(z8, &[[1]]).unwrap();
        assert_eq!(reduction_lemma_check(&e, 3, 2, 3).unwrap(), ReductionOutcome::Vacuous);
        assert!(matches!(reduction_lemma_check(&e, 8, 2, 3), Err(ConstructionError::PreconditionViolated(_))));
    }

    #[test]
    fn regular_representation_examples() {
        let z9 = ResidueRing::new(9).unwrap();
        let triv = regular_representation(&builtin::cyclic(1), z9).unwrap();
        assert_eq!(triv.matrices, vec![RMatrix::identity(z9, 1)]);
        let c2 = regular_representation(&builtin::cyclic(2), z9).unwrap();
        assert_eq!(c2.matrices[1], RMatrix::from_rows(z9, &[[0, 1], [1, 0]]).unwrap());
        let g = builtin::symmetric(3);
        let s3 = regular_representation(&g, z9).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(s3.matrices[a].mul(&s3.matrices[b]).unwrap(), s3.matrices[g.mul(a, b)]);
            }
        }
        assert!(s3.injective_mod(3).unwrap());
    }

    #[test]
    fn gtilde_on_s3_and_c6() {
        let g = builtin::symmetric(3);
        let x = g.generators()[0];
        let rep = gtilde_experiment(&GTildeInstance { group: g, x, n: 1, ell: 3, sigma: 2 }).unwrap();
        assert_eq!(rep.pairs_checked, 18);
        assert!(rep.passed && rep.exactly_diagonal);

        let c6 = builtin::cyclic(6);
        let x = c6.pow(c6.generators()[0], 2);
        let rep = gtilde_experiment(&GTildeInstance { group: c6, x, n: 1, ell: 3, sigma: 2 }).unwrap();
        assert_eq!(rep.pairs_checked, 18);
        assert!(rep.passed && rep.exactly_diagonal);
    }

    #[test]
    fn gtilde_precondition() {
        let g = builtin::symmetric(3);
        let x = g.generators()[0];
        let err = gtilde_experiment(&GTildeInstance { group: g, x, n: 1, ell: 3, sigma: 1 }).unwrap_err();
        assert!(matches!(err, ConstructionError::PreconditionViolated(_)));
    }
}

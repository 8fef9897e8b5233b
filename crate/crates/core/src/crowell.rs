//! Magnus matrices over `(Z/n)[Q]` and the finite-level Crowell sequence
//! `R^r --f--> R --s--> Z/n → 0`, with `f(λ) = Σ λ_i(x̄_i − 1)` and `s` the
//! augmentation.

use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use thiserror::Error;

use crate::fingroup::GroupElement;
use crate::foxcalc::{fox_row_flat, FoxError, FreeWord, QuotientContext};
use crate::grpring::{right_mult_matrix, GroupRing, RingElem};
use crate::zmodlin::{howell_form, kernel_basis, HowellForm, RMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrowellError {
    #[error("relator {0} does not map to the identity of Q")]
    RelatorNotInKernel(usize),
    #[error("coefficient modulus {0} is too large for Magnus matrices")]
    ModulusTooLarge(u64),
    #[error(transparent)]
    Fox(#[from] FoxError),
}

/// `[[q, v], [0, 1]]` with `q ∈ Q` and `v ∈ R^r`, stored as the index of `q`
/// and the flattened coefficients of `v`.
#[derive(Clone)]
pub struct MagnusMatrix {
    ring: GroupRing,
    top: u32,
    right: Box<[u32]>,
}

fn check_modulus(ring: &GroupRing) -> Result<(), CrowellError> {
    let n = ring.base().modulus();
    if n > u32::MAX as u64 {
        return Err(CrowellError::ModulusTooLarge(n));
    }
    Ok(())
}

impl MagnusMatrix {
    pub fn identity(ring: &GroupRing, rank: usize) -> Result<Self, CrowellError> {
        check_modulus(ring)?;
        Ok(MagnusMatrix { ring: ring.clone(), top: 0, right: vec![0; rank * ring.dimension()].into() })
    }

    /// `[[q, v]]` from a group element index and a flat coefficient vector.
    pub fn new(ring: &GroupRing, top: usize, right: &[u64]) -> Result<Self, CrowellError> {
        check_modulus(ring)?;
        let n = ring.base().modulus();
        assert!(top < ring.dimension() && right.len().is_multiple_of(ring.dimension()));
        Ok(MagnusMatrix { ring: ring.clone(), top: top as u32, right: right.iter().map(|&c| (c % n) as u32).collect() })
    }

    /// `[[x̄_i, e_i]]`, zero-based `i`.
    pub fn generator(ctx: &QuotientContext, i: usize) -> Result<Self, CrowellError> {
        let mut m = Self::identity(ctx.ring(), ctx.rank())?;
        m.top = ctx.images()[i] as u32;
        m.right[i * ctx.group_order()] = 1;
        Ok(m)
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.right.len() / self.ring.dimension()
    }

    pub fn top(&self) -> usize {
        self.top as usize
    }

    pub fn right_flat(&self) -> Vec<u64> {
        self.right.iter().map(|&c| c as u64).collect()
    }

    pub fn right(&self) -> Vec<RingElem> {
        self.right
            .chunks(self.ring.dimension())
            .map(|c| self.ring.element(c.iter().map(|&x| x as u64).collect()).expect("dimension matches"))
            .collect()
    }

    /// True for `[[1, v]]`.
    pub fn is_translation(&self) -> bool {
        self.top == 0
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = MagnusMatrix { ring: self.ring.clone(), top: 0, right: vec![0; self.right.len()].into() };
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }
}

/// `g·v` on each component of a flat vector.
pub(crate) fn translate_flat(ring: &GroupRing, g: usize, v: &[u32], out: &mut [u32]) {
    let t = ring.table();
    let d = ring.dimension();
    for (block, dst) in v.chunks(d).zip(out.chunks_mut(d)) {
        for (h, &c) in block.iter().enumerate() {
            dst[t.mul(g, h)] = c;
        }
    }
}

impl GroupElement for MagnusMatrix {
    fn compose(&self, other: &Self) -> Self {
        let n = self.ring.base().modulus();
        let mut right = vec![0u32; self.right.len()];
        translate_flat(&self.ring, self.top as usize, &other.right, &mut right);
        for (r, &v) in right.iter_mut().zip(self.right.iter()) {
            *r = ((*r as u64 + v as u64) % n) as u32;
        }
        MagnusMatrix { ring: self.ring.clone(), top: self.ring.table().mul(self.top as usize, other.top as usize) as u32, right: right.into() }
    }

    fn inverse(&self) -> Self {
        let n = self.ring.base().modulus();
        let qi = self.ring.table().inv(self.top as usize);
        let mut right = vec![0u32; self.right.len()];
        translate_flat(&self.ring, qi, &self.right, &mut right);
        for r in right.iter_mut() {
            *r = ((n - *r as u64) % n) as u32;
        }
        MagnusMatrix { ring: self.ring.clone(), top: qi as u32, right: right.into() }
    }
}

impl PartialEq for MagnusMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.top == other.top && self.right == other.right
    }
}

impl Eq for MagnusMatrix {}

impl Hash for MagnusMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.top.hash(state);
        self.right.hash(state);
    }
}

impl std::fmt::Debug for MagnusMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{}, {:?}]]", self.top, self.right)
    }
}

/// Product of generator matrices along the word.
pub fn magnus_image(ctx: &QuotientContext, w: &FreeWord) -> Result<MagnusMatrix, CrowellError> {
    ctx.evaluate(w)?;
    let mut acc = MagnusMatrix::identity(ctx.ring(), ctx.rank())?;
    let gens: Vec<MagnusMatrix> = (0..ctx.rank()).map(|i| MagnusMatrix::generator(ctx, i)).collect::<Result<_, _>>()?;
    let invs: Vec<MagnusMatrix> = gens.iter().map(|g| g.inverse()).collect();
    for l in w.letters() {
        acc = acc.compose(if l.inverse { &invs[l.generator] } else { &gens[l.generator] });
    }
    Ok(acc)
}

/// True when the top-right entry of the Magnus image is the Fox row.
pub fn magnus_fox_consistent(ctx: &QuotientContext, w: &FreeWord) -> Result<bool, CrowellError> {
    let m = magnus_image(ctx, w)?;
    Ok(m.top() == ctx.evaluate(w)? && m.right_flat() == fox_row_flat(ctx, w)?)
}

#[derive(Debug, Clone)]
pub struct CrowellComplex {
    pub ctx: QuotientContext,
    /// `r|Q| × |Q|`; block `i` is right multiplication by `x̄_i − 1`.
    pub f: RMatrix,
    /// `|Q| × 1`, all ones.
    pub s: RMatrix,
}

pub fn build_complex(ctx: &QuotientContext) -> CrowellComplex {
    let ring = ctx.ring();
    let d = ring.dimension();
    let mut f = RMatrix::zeros(ring.base(), 0, d);
    for i in 0..ctx.rank() {
        f = f.vstack(&right_mult_matrix(&ctx.x_minus_one(i))).expect("same width");
    }
    let s = RMatrix::from_residue_rows(ring.base(), 1, vec![vec![1]; d]).expect("one column");
    CrowellComplex { ctx: ctx.clone(), f, s }
}

impl CrowellComplex {
    /// `f(λ)` for a flat vector `λ ∈ R^r`.
    pub fn apply_f(&self, v: &[u64]) -> Vec<u64> {
        self.f.vec_mul(v).expect("length r|Q|")
    }

    pub fn kernel_f(&self) -> HowellForm {
        howell_form(&kernel_basis(&self.f))
    }
}

#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub s_surjective: bool,
    pub composite_zero: bool,
    pub image_equals_kernel: bool,
    pub image_f_size: BigUint,
    pub kernel_s_size: BigUint,
    pub kernel_f_size: BigUint,
    /// Howell basis of `ker f`.
    pub kernel_f: RMatrix,
    pub passed: bool,
}

pub fn exactness_check(c: &CrowellComplex) -> ExactnessReport {
    let base = c.f.ring();
    let s_surjective = c.s.data().iter().any(|&x| base.is_unit(x));
    let composite_zero = c.f.mul(&c.s).expect("shapes agree").is_zero();
    let image = howell_form(&c.f);
    let kernel_s = howell_form(&kernel_basis(&c.s));
    let image_equals_kernel = image.matrix() == kernel_s.matrix();
    let kernel_f = c.kernel_f();
    ExactnessReport {
        s_surjective,
        composite_zero,
        image_equals_kernel,
        image_f_size: image.span_size(),
        kernel_s_size: kernel_s.span_size(),
        kernel_f_size: kernel_f.span_size(),
        kernel_f: kernel_f.matrix().clone(),
        passed: s_surjective && composite_zero && image_equals_kernel,
    }
}

/// Checks `f(ι(w)) = 0` for every relator; each relator must map to `1 ∈ Q`.
pub fn relator_kernel_check(c: &CrowellComplex, relators: &[FreeWord]) -> Result<bool, CrowellError> {
    for (k, w) in relators.iter().enumerate() {
        if c.ctx.evaluate(w)? != 0 {
            return Err(CrowellError::RelatorNotInKernel(k));
        }
        if c.apply_f(&fox_row_flat(&c.ctx, w)?).iter().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct RelationModuleReport {
    /// Size of the `R`-span of the relator Fox rows.
    pub relator_span_size: BigUint,
    pub kernel_f_size: BigUint,
    /// `|ker f| / |span|`; 1 when the relators account for all of `ker f`.
    pub discrepancy: BigUint,
    pub equal: bool,
}

/// Compares `ker f` with the left `R`-submodule spanned by the Fox rows of
/// the relators.
pub fn relation_module_check(c: &CrowellComplex, relators: &[FreeWord]) -> Result<RelationModuleReport, CrowellError> {
    let ring = c.ctx.ring();
    let d = ring.dimension();
    let width = c.ctx.rank() * d;
    let mut rows = Vec::with_capacity(relators.len() * d);
    for (k, w) in relators.iter().enumerate() {
        if c.ctx.evaluate(w)? != 0 {
            return Err(CrowellError::RelatorNotInKernel(k));
        }
        let v: Vec<u32> = fox_row_flat(&c.ctx, w)?.into_iter().map(|x| x as u32).collect();
        let mut out = vec![0u32; width];
        for q in 0..d {
            translate_flat(ring, q, &v, &mut out);
            rows.push(out.iter().map(|&x| x as u64).collect());
        }
    }
    let span = howell_form(&RMatrix::from_residue_rows(ring.base(), width, rows).expect("uniform rows"));
    let kernel = c.kernel_f();
    let relator_span_size = span.span_size();
    let kernel_f_size = kernel.span_size();
    let equal = kernel.matrix() == span.matrix();
    Ok(RelationModuleReport {
        discrepancy: &kernel_f_size / &relator_span_size,
        relator_span_size,
        kernel_f_size,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::{builtin, FiniteGroup};
    use crate::zmodlin::ResidueRing;

    fn ctx(g: &FiniteGroup, n: u64) -> QuotientContext {
        QuotientContext::from_generators(g, ResidueRing::new(n).unwrap()).unwrap()
    }

    #[test]
    fn c2_complex_over_z4() {
        let c = build_complex(&ctx(&builtin::cyclic(2), 4));
        assert_eq!((c.f.rows(), c.f.cols()), (2, 2));
        assert_eq!(c.f.row_vectors(), vec![vec![3, 1], vec![1, 3]]);
        let rep = exactness_check(&c);
        assert!(rep.passed);
        assert_eq!(rep.image_f_size, BigUint::from(4u32));
        assert_eq!(rep.kernel_s_size, BigUint::from(4u32));
    }

    #[test]
    fn trivial_quotient_complex() {
        let c = build_complex(&ctx(&builtin::cyclic(1), 5));
        assert!(c.f.is_zero());
        assert!(exactness_check(&c).passed);
    }

    #[test]
    fn s3_complex_over_z9() {
        let g = builtin::symmetric(3);
        let c = build_complex(&ctx(&g, 9));
        assert_eq!((c.f.rows(), c.f.cols()), (12, 6));
        assert!(exactness_check(&c).passed);
    }

    #[test]
    fn shape_for_klein_four() {
        let c = build_complex(&ctx(&builtin::abelian(&[2, 2]), 2));
        assert_eq!((c.f.rows(), c.f.cols()), (8, 4));
    }

    #[test]
    fn generator_and_product_images() {
        let k = ctx(&builtin::symmetric(3), 7);
        let x1 = FreeWord::parse("x1", Some(2)).unwrap();
        assert_eq!(magnus_image(&k, &x1).unwrap(), MagnusMatrix::generator(&k, 0).unwrap());
        let m = magnus_image(&k, &FreeWord::parse("x1 x2", Some(2)).unwrap()).unwrap();
        let r = m.right();
        assert_eq!(r[0], k.ring().one());
        assert_eq!(r[1], k.ring().embed(k.images()[0]));
    }

    #[test]
    fn relator_examples() {
        let c = build_complex(&ctx(&builtin::cyclic(2), 6));
        assert!(relator_kernel_check(&c, &[FreeWord::parse("x1^2", None).unwrap()]).unwrap());
        assert!(relator_kernel_check(&c, &[FreeWord::empty(1)]).unwrap());
        assert_eq!(
            relator_kernel_check(&c, &[FreeWord::parse("x1", None).unwrap()]).unwrap_err(),
            CrowellError::RelatorNotInKernel(0)
        );
        let rep = relation_module_check(&c, &[FreeWord::parse("x1^2", None).unwrap()]).unwrap();
        assert!(rep.equal);
    }

    #[test]
    fn s3_presentation_spans_the_kernel() {
        let g = builtin::symmetric(3);
        let c = build_complex(&ctx(&g, 4));
        let rels: Vec<FreeWord> = ["x1^3", "x2^2", "x2 x1 x2^-1 x1"]
            .iter()
            .map(|s| FreeWord::parse(s, Some(2)).unwrap())
            .collect();
        // images: x1 -> 3-cycle, x2 -> transposition
        assert!(relator_kernel_check(&c, &rels).unwrap());
        let rep = relation_module_check(&c, &rels).unwrap();
        assert!(rep.equal, "discrepancy {}", rep.discrepancy);
    }
}

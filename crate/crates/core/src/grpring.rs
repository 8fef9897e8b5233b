//! Finite group rings `(Z/n)[Q]`, cyclic towers `A[C_N]` and the kernel
//! projection check behind the nonzero-divisor argument.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

use crate::fingroup::{FiniteGroup, GroupElement};
use crate::zmodlin::{is_prime, kernel_basis, howell_form, LinAlgError, RMatrix, ResidueRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("elements belong to different group rings")]
    RingMismatch,
    #[error("coefficient vector has length {got}, ring has dimension {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Multiplication table of a finite group on indices `0..order`, identity at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl MulTable {
    pub fn from_group<E: GroupElement>(g: &FiniteGroup<E>) -> Self {
        let n = g.order();
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(g.mul(a, b) as u32);
            }
        }
        let inv = (0..n).map(|a| g.inv(a) as u32).collect();
        MulTable { order: n, mul, inv }
    }

    pub fn trivial() -> Self {
        MulTable { order: 1, mul: vec![0], inv: vec![0] }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        let inv = (0..n).map(|a| ((n - a) % n) as u32).collect();
        MulTable { order: n, mul, inv }
    }

    /// `A × B` with element `(a, b)` at index `a·|B| + b`.
    pub fn direct_product(a: &MulTable, b: &MulTable) -> Self {
        let n = a.order * b.order;
        let split = |x: usize| (x / b.order, x % b.order);
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (xa, xb) = split(x);
            for y in 0..n {
                let (ya, yb) = split(y);
                mul.push((a.mul(xa, ya) * b.order + b.mul(xb, yb)) as u32);
            }
        }
        let inv = (0..n)
            .map(|x| {
                let (xa, xb) = split(x);
                (a.inv(xa) * b.order + b.inv(xb)) as u32
            })
            .collect();
        MulTable { order: n, mul, inv }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }
}

#[derive(Debug)]
struct RingInner {
    base: ResidueRing,
    table: MulTable,
}

/// The group ring `(Z/n)[Q]`. Cloning shares the ring; elements of two rings
/// built separately never mix.
#[derive(Debug, Clone)]
pub struct GroupRing {
    inner: Arc<RingInner>,
}

impl GroupRing {
    pub fn new(base: ResidueRing, table: MulTable) -> Self {
        GroupRing { inner: Arc::new(RingInner { base, table }) }
    }

    pub fn from_group<E: GroupElement>(base: ResidueRing, g: &FiniteGroup<E>) -> Self {
        Self::new(base, MulTable::from_group(g))
    }

    pub fn base(&self) -> ResidueRing {
        self.inner.base
    }

    pub fn table(&self) -> &MulTable {
        &self.inner.table
    }

    pub fn dimension(&self) -> usize {
        self.inner.table.order
    }

    pub fn same_ring(&self, other: &GroupRing) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn zero(&self) -> RingElem {
        RingElem { ring: self.clone(), coeffs: vec![0; self.dimension()] }
    }

    pub fn scalar(&self, c: i64) -> RingElem {
        let mut z = self.zero();
        z.coeffs[0] = self.base().reduce(c as i128);
        z
    }

    pub fn one(&self) -> RingElem {
        self.scalar(1)
    }

    /// The basis element of a group element.
    pub fn embed(&self, g: usize) -> RingElem {
        let mut z = self.zero();
        z.coeffs[g] = 1;
        z
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<RingElem, RingError> {
        if coeffs.len() != self.dimension() {
            return Err(RingError::BadLength { got: coeffs.len(), expected: self.dimension() });
        }
        let n = self.base().modulus();
        Ok(RingElem { ring: self.clone(), coeffs: coeffs.into_iter().map(|c| c % n).collect() })
    }
}

/// Element of a finite group ring, as a dense coefficient vector.
#[derive(Clone)]
pub struct RingElem {
    ring: GroupRing,
    coeffs: Vec<u64>,
}

impl RingElem {
    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &RingElem) -> Result<(), RingError> {
        if self.ring.same_ring(&other.ring) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.check(other)?;
        let b = self.ring.base();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&x, &y)| b.add(x, y)).collect();
        Ok(RingElem { ring: self.ring.clone(), coeffs })
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElem {
        let b = self.ring.base();
        RingElem { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|&x| b.neg(x)).collect() }
    }

    pub fn scale(&self, c: i64) -> RingElem {
        let b = self.ring.base();
        let c = b.reduce(c as i128);
        RingElem { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|&x| b.mul(x, c)).collect() }
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.check(other)?;
        let b = self.ring.base();
        let t = self.ring.table();
        let n = b.modulus() as u128;
        let mut acc = vec![0u128; self.coeffs.len()];
        for (g, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (h, &y) in other.coeffs.iter().enumerate() {
                if y != 0 {
                    let k = t.mul(g, h);
                    acc[k] = (acc[k] + x as u128 * y as u128) % n;
                }
            }
        }
        Ok(RingElem { ring: self.ring.clone(), coeffs: acc.into_iter().map(|v| v as u64).collect() })
    }

    pub fn pow(&self, k: u32) -> RingElem {
        (0..k).fold(self.ring.one(), |acc, _| acc.mul(self).expect("same ring"))
    }

    /// Left multiplication by a group element: `g · λ`.
    pub fn left_translate(&self, g: usize) -> RingElem {
        let t = self.ring.table();
        let mut coeffs = vec![0; self.coeffs.len()];
        for (h, &c) in self.coeffs.iter().enumerate() {
            coeffs[t.mul(g, h)] = c;
        }
        RingElem { ring: self.ring.clone(), coeffs }
    }

    /// Coefficient sum.
    pub fn augmentation(&self) -> u64 {
        let b = self.ring.base();
        self.coeffs.iter().fold(0, |acc, &c| b.add(acc, c))
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for RingElem {}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({}, {:?})", self.ring.base(), self.coeffs)
    }
}

/// Matrix of `y ↦ λ·y` on the ring as a free `Z/n`-module (row-vector convention).
pub fn mult_matrix(lambda: &RingElem) -> RMatrix {
    let ring = lambda.ring();
    let t = ring.table();
    let dim = ring.dimension();
    let mut m = RMatrix::zeros(ring.base(), dim, dim);
    for h in 0..dim {
        for (g, &c) in lambda.coeffs().iter().enumerate() {
            if c != 0 {
                let k = t.mul(g, h);
                m.set(h, k, ring.base().add(m.get(h, k), c));
            }
        }
    }
    m
}

/// Matrix of `y ↦ y·λ`.
pub fn right_mult_matrix(lambda: &RingElem) -> RMatrix {
    let ring = lambda.ring();
    let t = ring.table();
    let dim = ring.dimension();
    let mut m = RMatrix::zeros(ring.base(), dim, dim);
    for h in 0..dim {
        for (g, &c) in lambda.coeffs().iter().enumerate() {
            if c != 0 {
                let k = t.mul(h, g);
                m.set(h, k, ring.base().add(m.get(h, k), c));
            }
        }
    }
    m
}

/// A non-empty set of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet(BTreeSet<u64>);

impl PrimeSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self, RingError> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if set.is_empty() {
            return Err(RingError::PreconditionViolated("prime set must be non-empty".into()));
        }
        if let Some(p) = set.iter().find(|&&p| !is_prime(p)) {
            return Err(RingError::PreconditionViolated(format!("{p} is not prime")));
        }
        Ok(PrimeSet(set))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    /// `n = n_Σ · n_Σ'` with every prime of `n_Σ` in the set and `n_Σ'` coprime to it.
    pub fn split(&self, n: u64) -> (u64, u64) {
        let mut inside = 1;
        let mut rest = n;
        for &p in &self.0 {
            while rest.is_multiple_of(p) {
                rest /= p;
                inside *= p;
            }
        }
        (inside, rest)
    }

    pub fn is_sigma_number(&self, n: u64) -> bool {
        n >= 1 && self.split(n).1 == 1
    }
}

impl Default for PrimeSet {
    fn default() -> Self {
        PrimeSet([2, 3].into_iter().collect())
    }
}

/// The algebras `A[C_N] = (Z/n)[C_N × H]` for a finite abelian `H`, at a
/// collection of levels `N`. The element `(i, h)` sits at index `i·|H| + h`,
/// and `x̄_N` is `(1, e)`.
#[derive(Debug, Clone)]
pub struct CyclicTower {
    base: ResidueRing,
    coefficients: MulTable,
    levels: BTreeMap<u64, GroupRing>,
}

impl CyclicTower {
    pub fn new(base: ResidueRing, coefficients: MulTable, levels: &[u64]) -> Result<Self, RingError> {
        for a in 0..coefficients.order() {
            for b in 0..coefficients.order() {
                if coefficients.mul(a, b) != coefficients.mul(b, a) {
                    return Err(RingError::PreconditionViolated("coefficient group must be abelian".into()));
                }
            }
        }
        let mut map = BTreeMap::new();
        for &n in levels {
            if n == 0 {
                return Err(RingError::LevelMismatch("level 0".into()));
            }
            let table = MulTable::direct_product(&MulTable::cyclic(n as usize), &coefficients);
            map.insert(n, GroupRing::new(base, table));
        }
        Ok(CyclicTower { base, coefficients, levels: map })
    }

    pub fn base(&self) -> ResidueRing {
        self.base
    }

    pub fn coefficient_dimension(&self) -> usize {
        self.coefficients.order()
    }

    pub fn levels(&self) -> impl Iterator<Item = u64> + '_ {
        self.levels.keys().copied()
    }

    pub fn ring(&self, level: u64) -> Result<&GroupRing, RingError> {
        self.levels.get(&level).ok_or_else(|| RingError::LevelMismatch(format!("level {level} is not in the tower")))
    }

    /// `x̄_N`
    pub fn x(&self, level: u64) -> Result<RingElem, RingError> {
        let ring = self.ring(level)?;
        // at level 1, x̄ is the identity
        Ok(ring.embed((1 % level as usize) * self.coefficients.order()))
    }

    /// The element `Σ_i c_i x̄^i` with `c_i ∈ A` given as coefficient blocks.
    pub fn from_blocks(&self, level: u64, blocks: &[Vec<u64>]) -> Result<RingElem, RingError> {
        let ring = self.ring(level)?;
        let h = self.coefficients.order();
        let mut coeffs = vec![0; ring.dimension()];
        for (i, block) in blocks.iter().enumerate() {
            if block.len() != h || i >= level as usize {
                return Err(RingError::BadLength { got: block.len(), expected: h });
            }
            coeffs[i * h..(i + 1) * h].copy_from_slice(block);
        }
        ring.element(coeffs)
    }

    /// `π: A[C_{kM}] → A[C_M]`, `x̄_{kM} ↦ x̄_M`.
    pub fn project(&self, y: &RingElem, from: u64, to: u64) -> Result<RingElem, RingError> {
        let src = self.ring(from)?;
        let dst = self.ring(to)?;
        if !y.ring().same_ring(src) {
            return Err(RingError::RingMismatch);
        }
        if !from.is_multiple_of(to) {
            return Err(RingError::LevelMismatch(format!("{to} does not divide {from}")));
        }
        let h = self.coefficients.order();
        let b = self.base;
        let mut coeffs = vec![0; dst.dimension()];
        for (idx, &c) in y.coeffs().iter().enumerate() {
            let (i, a) = (idx / h, idx % h);
            let t = (i as u64 % to) as usize * h + a;
            coeffs[t] = b.add(coeffs[t], c);
        }
        dst.element(coeffs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelProjectionReport {
    pub n: i64,
    pub upper_level: u64,
    pub lower_level: u64,
    pub k: u64,
    /// Number of generators of `ker(x̄^n − 1)` at the upper level.
    pub kernel_generators: usize,
    pub kernel_size: BigUint,
    pub passed: bool,
    /// A kernel generator whose projection leaves `k·A[C_M]`.
    pub witness: Option<Vec<u64>>,
}

/// Projects every generator of `ker((x̄^n − 1)·)` on `A[C_{kM}]` down to
/// `A[C_M]` and checks that it lands in `k·A[C_M]`.
pub fn kernel_projection_check(
    tower: &CyclicTower,
    sigma: &PrimeSet,
    n: i64,
    upper: u64,
    lower: u64,
) -> Result<KernelProjectionReport, RingError> {
    if n == 0 {
        return Err(RingError::PreconditionViolated("n must be nonzero".into()));
    }
    if !upper.is_multiple_of(lower) {
        return Err(RingError::LevelMismatch(format!("{lower} does not divide {upper}")));
    }
    let k = upper / lower;
    let (n_sigma, _) = sigma.split(n.unsigned_abs());
    if !sigma.is_sigma_number(lower) || !sigma.is_sigma_number(k) {
        return Err(RingError::PreconditionViolated(format!("levels {lower} and k = {k} must be Σ-numbers")));
    }
    if !lower.is_multiple_of(n_sigma) {
        return Err(RingError::PreconditionViolated(format!("n_Σ = {n_sigma} does not divide M = {lower}")));
    }
    let x = tower.x(upper)?;
    let exponent = n.rem_euclid(upper as i64) as u32;
    let op = x.pow(exponent).sub(&tower.ring(upper)?.one())?;
    let kernel = kernel_basis(&mult_matrix(&op));
    let kernel_size = howell_form(&kernel).span_size();
    // c ∈ k·(Z/n) iff gcd(k, n) divides c
    let g = k.gcd(&tower.base().modulus());
    let mut witness = None;
    for row in kernel.row_vectors() {
        let y = tower.ring(upper)?.element(row.clone())?;
        let projected = tower.project(&y, upper, lower)?;
        if projected.coeffs().iter().any(|&c| c % g != 0) {
            witness = Some(row);
            break;
        }
    }
    Ok(KernelProjectionReport {
        n,
        upper_level: upper,
        lower_level: lower,
        k,
        kernel_generators: kernel.rows(),
        kernel_size,
        passed: witness.is_none(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;

    fn zn(n: u64) -> ResidueRing {
        ResidueRing::new(n).unwrap()
    }

    fn c_ring(n: usize, modulus: u64) -> GroupRing {
        GroupRing::new(zn(modulus), MulTable::cyclic(n))
    }

    #[test]
    fn product_with_x_minus_one_in_c2() {
        let r = c_ring(2, 4);
        for a in 0..4 {
            for b in 0..4 {
                let lam = r.element(vec![a, b]).unwrap();
                let xm1 = r.embed(1).sub(&r.one()).unwrap();
                let p = lam.mul(&xm1).unwrap();
                let d = (b + 4 - a) % 4;
                assert_eq!(p.coeffs(), &[d, (4 - d) % 4]);
            }
        }
    }

    #[test]
    fn unit_law_and_group_relation() {
        let r = c_ring(5, 9);
        let lam = r.element(vec![1, 2, 3, 4, 5]).unwrap();
        assert_eq!(r.one().mul(&lam).unwrap(), lam);
        let x = r.embed(1);
        assert_eq!(x.mul(&x.pow(4)).unwrap(), r.one());
    }

    #[test]
    fn mixing_rings_is_an_error() {
        let a = c_ring(2, 4);
        let b = c_ring(2, 4);
        assert_eq!(a.one().add(&b.one()).unwrap_err(), RingError::RingMismatch);
        assert_eq!(a.one().mul(&b.one()).unwrap_err(), RingError::RingMismatch);
    }

    #[test]
    fn augmentation_examples() {
        let r = c_ring(2, 4);
        assert_eq!(r.element(vec![1, 2]).unwrap().augmentation(), 3);
        assert_eq!(r.embed(1).augmentation(), 1);
    }

    #[test]
    fn mult_matrix_of_one_and_generator() {
        let r = c_ring(4, 5);
        assert_eq!(mult_matrix(&r.one()), RMatrix::identity(zn(5), 4));
        let m = mult_matrix(&r.embed(1));
        for h in 0..4 {
            assert_eq!(m.get(h, (h + 1) % 4), 1);
            assert_eq!(m.row(h).iter().sum::<u64>(), 1);
        }
    }

    #[test]
    fn kernel_of_x_minus_one_in_c9_is_norm_span() {
        let r = c_ring(9, 9);
        let op = r.embed(1).sub(&r.one()).unwrap();
        let k = kernel_basis(&mult_matrix(&op));
        let h = howell_form(&k);
        assert_eq!(h.matrix().row_vectors(), vec![vec![1; 9]]);
    }

    #[test]
    fn mult_matrix_matches_ring_product_on_s3() {
        let g = builtin::symmetric(3);
        let r = GroupRing::from_group(zn(7), &g);
        let lam = r.element(vec![1, 5, 0, 3, 2, 6]).unwrap();
        let m = mult_matrix(&lam);
        let rm = right_mult_matrix(&lam);
        for h in 0..6 {
            let e = r.embed(h);
            assert_eq!(m.vec_mul(e.coeffs()).unwrap(), lam.mul(&e).unwrap().coeffs());
            assert_eq!(rm.vec_mul(e.coeffs()).unwrap(), e.mul(&lam).unwrap().coeffs());
        }
    }

    #[test]
    fn tower_projection_examples() {
        let t = CyclicTower::new(zn(9), MulTable::trivial(), &[3, 9]).unwrap();
        assert_eq!(t.project(&t.x(9).unwrap(), 9, 3).unwrap(), t.x(3).unwrap());
        let ring9 = t.ring(9).unwrap();
        let norm = ring9.element(vec![1; 9]).unwrap();
        let p = t.project(&norm, 9, 3).unwrap();
        assert_eq!(p.coeffs(), &[3, 3, 3]);
        assert_eq!(t.project(&ring9.one(), 9, 3).unwrap(), t.ring(3).unwrap().one());
        assert!(t.project(&norm, 9, 9).is_ok());
        let t2 = CyclicTower::new(zn(9), MulTable::trivial(), &[2, 9]).unwrap();
        assert!(matches!(t2.project(&t2.ring(9).unwrap().one(), 9, 2), Err(RingError::LevelMismatch(_))));
    }

    #[test]
    fn sigma_split() {
        let s = PrimeSet::default();
        assert_eq!(s.split(60), (12, 5));
        assert!(s.is_sigma_number(18));
        assert!(!s.is_sigma_number(10));
        assert!(PrimeSet::new([]).is_err());
        assert!(PrimeSet::new([4]).is_err());
    }

    #[test]
    fn kernel_projection_examples() {
        let s = PrimeSet::default();
        let t = CyclicTower::new(zn(9), MulTable::trivial(), &[3, 9]).unwrap();
        let rep = kernel_projection_check(&t, &s, 1, 9, 3).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.kernel_size, BigUint::from(9u32));

        let t = CyclicTower::new(zn(4), MulTable::trivial(), &[2, 4]).unwrap();
        assert!(kernel_projection_check(&t, &s, 1, 4, 2).unwrap().passed);
        assert!(kernel_projection_check(&t, &s, 1, 4, 4).unwrap().passed);
    }

    #[test]
    fn kernel_projection_preconditions() {
        let s = PrimeSet::default();
        let t = CyclicTower::new(zn(9), MulTable::trivial(), &[2, 4, 5, 10]).unwrap();
        // n_Σ = 4 does not divide M = 2
        assert!(matches!(kernel_projection_check(&t, &s, 4, 4, 2), Err(RingError::PreconditionViolated(_))));
        // k = 5 is not a Σ-number
        assert!(matches!(kernel_projection_check(&t, &s, 1, 10, 2), Err(RingError::PreconditionViolated(_))));
    }

    #[test]
    fn level_one_generator_is_identity() {
        let t = CyclicTower::new(zn(4), MulTable::cyclic(3), &[1, 3]).unwrap();
        assert_eq!(t.x(1).unwrap(), t.ring(1).unwrap().one());
        let k = kernel_projection_check(&t, &PrimeSet::default(), 1, 3, 1).unwrap();
        assert!(k.passed);
    }
}

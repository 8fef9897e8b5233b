//! Fully enumerated finite groups.
//!
//! A [`FiniteGroup`] stores every element with a canonical index; the identity
//! is always index 0. Subgroups, homomorphisms and quotients are expressed in
//! terms of these indices so that every operation composes.

mod elem;
mod hom;
mod quotient;
mod subgroup;
mod transfer;

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::zmodlin::LinAlgError;

pub use elem::{matrix_inverse, GroupElem, GroupElement, Perm};
pub use hom::{extend_from_images, iso_test_small, Homomorphism, ISO_TEST_LIMIT};
pub use quotient::{abelian_invariants, m_step_quotient, quotient, CosetTable, Quotient, QUOTIENT_INDEX_LIMIT};
pub use subgroup::{centralizer, derived_series, derived_series_of, derived_subgroup_of, normal_closure, normal_subgroups, Subgroup};
pub use transfer::{
    conj_action_faithful, quotient_iso_check, transfer_identity_check, transfer_map, transfer_map_with, FaithfulnessReport,
    QuotientIsoReport, TransferData, TransferIdentityReport,
};

/// Default ceiling on the number of enumerated elements.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Groups up to this order get a full multiplication table.
const TABLE_THRESHOLD: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group exceeds the element cap (reached {0} elements)")]
    CapExceeded(usize),
    #[error("generators mix permutations and matrices, or differ in degree or ring")]
    MixedVariant,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("group of order {0} is too large for this operation")]
    TooLarge(usize),
    #[error("quotient of index {0} exceeds the coset-action limit")]
    QuotientTooLarge(usize),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub struct FiniteGroup<E: GroupElement = GroupElem> {
    elements: Vec<E>,
    index: HashMap<E, usize>,
    generators: Vec<usize>,
    right_mul: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    table: OnceLock<Vec<u32>>,
}

impl<E: GroupElement> FiniteGroup<E> {
    /// Enumerates the group generated by `gens` by breadth-first search over
    /// right multiplication by generators.
    pub fn generate(identity: E, gens: &[E], cap: usize) -> Result<Self, GroupError> {
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut right_mul: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for s in gens {
                let p = elements[i].compose(s);
                let idx = match index.get(&p) {
                    Some(&k) => k,
                    None => {
                        let k = elements.len();
                        if k >= cap {
                            return Err(GroupError::CapExceeded(k + 1));
                        }
                        index.insert(p.clone(), k);
                        elements.push(p);
                        k
                    }
                };
                row.push(idx);
            }
            right_mul.push(row);
            i += 1;
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(Self::assemble(elements, index, generators, right_mul))
    }

    /// Builds a group from a complete element list (identity first) and the
    /// indices of its generators. Fails if the list is not closed.
    pub fn from_elements(elements: Vec<E>, generators: Vec<usize>) -> Result<Self, GroupError> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(GroupError::InvalidElement(format!("duplicate element {e:?}")));
            }
        }
        let mut right_mul = Vec::with_capacity(elements.len());
        for e in &elements {
            let mut row = Vec::with_capacity(generators.len());
            for &g in &generators {
                let p = e.compose(&elements[g]);
                row.push(*index.get(&p).ok_or(GroupError::NotSubgroup)?);
            }
            right_mul.push(row);
        }
        let group = Self::assemble(elements, index, generators, right_mul);
        if group.elements[0] != group.elements[0].compose(&group.elements[0]) {
            return Err(GroupError::InvalidElement("first element must be the identity".into()));
        }
        Ok(group)
    }

    fn assemble(elements: Vec<E>, index: HashMap<E, usize>, generators: Vec<usize>, right_mul: Vec<Vec<usize>>) -> Self {
        let inverses = elements.iter().map(|e| index[&e.inverse()]).collect();
        FiniteGroup { elements, index, generators, right_mul, inverses, table: OnceLock::new() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Element indices of the generators, in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `g · generators[k]`
    pub fn mul_gen(&self, g: usize, k: usize) -> usize {
        self.right_mul[g][k]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let n = self.order();
        if n <= TABLE_THRESHOLD {
            let table = self.table.get_or_init(|| {
                let mut t = vec![0u32; n * n];
                for i in 0..n {
                    for j in 0..n {
                        t[i * n + j] = self.index[&self.elements[i].compose(&self.elements[j])] as u32;
                    }
                }
                t
            });
            return table[a * n + b] as usize;
        }
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `g⁻¹ h g`
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order(), (0..self.order()).collect(), self.generators.clone(), true)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted_unchecked(self.order(), vec![0], vec![], true)
    }

    /// Materializes a subgroup as a group in its own right. Returns the group
    /// and, for each of its elements, the index in `self`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup<E>, Vec<usize>) {
        let gens: Vec<E> = h.generators().iter().map(|&g| self.elements[g].clone()).collect();
        let sub = FiniteGroup::generate(self.elements[0].clone(), &gens, usize::MAX)
            .expect("subgroups of an enumerated group are finite");
        let embedding = sub.elements.iter().map(|e| self.index[e]).collect();
        (sub, embedding)
    }
}

impl<E: GroupElement> std::fmt::Debug for FiniteGroup<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.generators.iter().map(|&g| &self.elements[g]).collect::<Vec<_>>())
            .finish()
    }
}

/// Enumerates the group generated by permutations or matrices. With no
/// generators the result is the trivial group on zero points.
pub fn closure(gens: &[GroupElem], cap: usize) -> Result<FiniteGroup, GroupError> {
    let Some(first) = gens.first() else {
        return FiniteGroup::generate(GroupElem::Perm(Perm::identity(0)), &[], cap);
    };
    if gens.iter().any(|g| !g.same_kind(first)) {
        return Err(GroupError::MixedVariant);
    }
    FiniteGroup::generate(first.identity_like(), gens, cap)
}

/// The left regular action of `g` on its own elements, as a permutation group.
pub fn as_permutation_group<E: GroupElement>(g: &FiniteGroup<E>) -> Result<FiniteGroup, GroupError> {
    let gens: Vec<GroupElem> = g
        .generators()
        .iter()
        .map(|&s| Perm::from_images((0..g.order()).map(|x| g.mul(s, x) as u32).collect()).map(GroupElem::Perm))
        .collect::<Result<_, _>>()?;
    if gens.is_empty() {
        return FiniteGroup::generate(GroupElem::Perm(Perm::identity(g.order())), &[], DEFAULT_CAP);
    }
    closure(&gens, DEFAULT_CAP)
}

/// Standard small groups as permutation groups.
pub mod builtin {
    use super::*;

    fn perm(degree: usize, cycles: &[&[usize]]) -> GroupElem {
        let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        GroupElem::Perm(Perm::from_cycles(degree, &cycles).expect("builtin cycles are valid"))
    }

    pub fn cyclic(k: usize) -> FiniteGroup {
        let cycle: Vec<usize> = (0..k).collect();
        let gens = if k <= 1 { vec![] } else { vec![perm(k, &[&cycle])] };
        closure(&gens, DEFAULT_CAP).expect("cyclic group")
    }

    /// Symmetric group on `k` points, generated by a `k`-cycle and a transposition.
    pub fn symmetric(k: usize) -> FiniteGroup {
        if k < 2 {
            return closure(&[], DEFAULT_CAP).expect("trivial group");
        }
        let cycle: Vec<usize> = (0..k).collect();
        let gens = if k == 2 { vec![perm(2, &[&[0, 1]])] } else { vec![perm(k, &[&cycle]), perm(k, &[&[0, 1]])] };
        closure(&gens, DEFAULT_CAP).expect("symmetric group")
    }

    /// Alternating group on `k ≥ 3` points, generated by 3-cycles.
    pub fn alternating(k: usize) -> FiniteGroup {
        let gens: Vec<GroupElem> = (2..k).map(|j| perm(k, &[&[0, 1, j]])).collect();
        closure(&gens, DEFAULT_CAP).expect("alternating group")
    }

    /// Dihedral group of order `2k` acting on a `k`-gon: generators `r` (rotation) then `s` (reflection).
    pub fn dihedral(k: usize) -> FiniteGroup {
        let rot: Vec<usize> = (0..k).collect();
        let mut refl: Vec<Vec<usize>> = Vec::new();
        for i in 1..k {
            let j = k - i;
            if i < j {
                refl.push(vec![i, j]);
            }
        }
        let r = perm(k, &[&rot]);
        let s = GroupElem::Perm(Perm::from_cycles(k, &refl).expect("reflection"));
        closure(&[r, s], DEFAULT_CAP).expect("dihedral group")
    }

    /// Quaternion group via its regular representation on 8 points.
    pub fn quaternion() -> FiniteGroup {
        // labels: 1,i,j,k,-1,-i,-j,-k = 0..8; left multiplication by i and j
        let i = perm(8, &[&[0, 1, 4, 5], &[2, 7, 6, 3]]);
        let j = perm(8, &[&[0, 2, 4, 6], &[1, 3, 5, 7]]);
        closure(&[i, j], DEFAULT_CAP).expect("quaternion group")
    }

    /// Direct product of cyclic groups as disjoint cycles.
    pub fn abelian(orders: &[usize]) -> FiniteGroup {
        let degree: usize = orders.iter().sum();
        let mut start = 0;
        let mut gens = Vec::new();
        for &k in orders {
            let cycle: Vec<usize> = (start..start + k).collect();
            if k > 1 {
                gens.push(perm(degree, &[&cycle]));
            }
            start += k;
        }
        closure(&gens, DEFAULT_CAP).expect("abelian group")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmodlin::{RMatrix, ResidueRing};

    fn perm(degree: usize, cycles: &[&[usize]]) -> GroupElem {
        let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        GroupElem::Perm(Perm::from_cycles(degree, &cycles).unwrap())
    }

    #[test]
    fn s3_by_enumeration() {
        let g = closure(&[perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])], 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = closure(&[], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn dihedral_from_gl2_f3_matrices() {
        let f3 = ResidueRing::new(3).unwrap();
        let r = GroupElem::matrix(RMatrix::from_rows(f3, &[[0, -1], [1, 0]]).unwrap()).unwrap();
        let s = GroupElem::matrix(RMatrix::from_rows(f3, &[[1, 0], [0, -1]]).unwrap()).unwrap();
        let g = closure(&[r, s], 100).unwrap();
        assert_eq!(g.order(), 8);
    }

    #[test]
    fn mixed_generators_rejected() {
        let f3 = ResidueRing::new(3).unwrap();
        let m = GroupElem::matrix(RMatrix::identity(f3, 2)).unwrap();
        assert_eq!(closure(&[perm(3, &[&[0, 1]]), m], 10).unwrap_err(), GroupError::MixedVariant);
        assert_eq!(closure(&[perm(3, &[&[0, 1]]), perm(4, &[&[0, 1]])], 10).unwrap_err(), GroupError::MixedVariant);
    }

    #[test]
    fn cap_is_enforced() {
        let err = closure(&[perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1]])], 50).unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded(n) if n > 50));
    }

    #[test]
    fn builtins_have_expected_orders() {
        assert_eq!(builtin::symmetric(4).order(), 24);
        assert_eq!(builtin::alternating(4).order(), 12);
        assert_eq!(builtin::dihedral(4).order(), 8);
        assert_eq!(builtin::quaternion().order(), 8);
        assert_eq!(builtin::cyclic(6).order(), 6);
        assert_eq!(builtin::abelian(&[2, 4]).order(), 8);
        let q8 = builtin::quaternion();
        let involutions = (1..8).filter(|&a| q8.element_order(a) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn element_arithmetic_is_consistent() {
        let g = builtin::symmetric(4);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for (k, &s) in g.generators().iter().enumerate() {
                assert_eq!(g.mul_gen(a, k), g.mul(a, s));
            }
        }
        assert_eq!(g.pow(g.generators()[0], 4), 0);
        assert_eq!(g.pow(g.generators()[0], -1), g.inv(g.generators()[0]));
    }
}

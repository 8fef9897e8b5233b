use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{derived_series, FiniteGroup, GroupElem, GroupElement, GroupError, Homomorphism, Perm, Subgroup};
use crate::zmodlin::{howell_form, smith_normal_form_int, IntMatrix, RMatrix, ResidueRing};

/// Largest index for which a quotient is materialized as a permutation group on cosets.
pub const QUOTIENT_INDEX_LIMIT: usize = 4096;

/// Left cosets `gN`, labelled in increasing order of their minimal element index.
#[derive(Debug, Clone)]
pub struct CosetTable {
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

impl CosetTable {
    /// Left cosets of `n` inside the subset `within` (which must be a union of cosets).
    pub fn new<E: GroupElement>(g: &FiniteGroup<E>, within: &[usize], n: &Subgroup) -> Self {
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        let mut sorted = within.to_vec();
        sorted.sort_unstable();
        for x in sorted {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &m in n.elements() {
                coset_of[g.mul(x, m)] = c;
            }
        }
        CosetTable { coset_of, reps }
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Coset label of `x`, if `x` lies in the covered set.
    pub fn coset_of(&self, x: usize) -> Option<usize> {
        let c = self.coset_of[x];
        (c != usize::MAX).then_some(c)
    }

    /// Minimal element of each coset.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }
}

/// `G/N` realized as the permutation action of `G` on left cosets of `N`.
#[derive(Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `G → G/N`
    pub projection: Homomorphism,
    pub cosets: CosetTable,
}

/// Quotient by a normal subgroup. Element `k` of the quotient is the coset
/// whose minimal representative is the `k`-th smallest.
pub fn quotient<E: GroupElement>(g: &FiniteGroup<E>, n: &Subgroup) -> Result<Quotient, GroupError> {
    if !n.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let index = n.index_in_parent();
    if index > QUOTIENT_INDEX_LIMIT {
        return Err(GroupError::QuotientTooLarge(index));
    }
    let all: Vec<usize> = (0..g.order()).collect();
    let cosets = CosetTable::new(g, &all, n);
    let action = |x: usize| -> Perm {
        let images = cosets.reps.iter().map(|&r| cosets.coset_of[g.mul(x, r)] as u32).collect();
        Perm::from_images(images).expect("left multiplication permutes cosets")
    };
    let elements: Vec<GroupElem> = cosets.reps.iter().map(|&r| GroupElem::Perm(action(r))).collect();
    let generators: Vec<usize> = g.generators().iter().map(|&s| cosets.coset_of[s]).collect();
    let group = FiniteGroup::from_elements(elements, generators)?;
    let projection = Homomorphism::new(&cosets.coset_of, group.order());
    Ok(Quotient { group, projection, cosets })
}

/// `G → G/G^[m]`, the maximal `m`-step solvable quotient.
pub fn m_step_quotient<E: GroupElement>(g: &FiniteGroup<E>, m: usize) -> Result<Quotient, GroupError> {
    let series = derived_series(g);
    let term = &series[m.min(series.len() - 1)];
    quotient(g, term)
}

/// Invariant factors `d_1 | d_2 | …` (all `> 1`) of `G/G^[1]`.
///
/// The abelianization is written on the images of the generators of `G`; its
/// relation lattice contains `|A|·Z^k`, so it is computed modulo `|A|` with a
/// Howell form and finished with an integer Smith form.
pub fn abelian_invariants<E: GroupElement>(g: &FiniteGroup<E>) -> Vec<u64> {
    let series = derived_series(g);
    let derived = if series.len() > 1 { series[1].clone() } else { series[0].clone() };
    let q = quotient(g, &derived).expect("derived subgroup is normal with small index");
    let a = &q.group;
    let order = a.order();
    if order == 1 {
        return Vec::new();
    }
    let k = a.generators().len();
    let ring = ResidueRing::new(order as u64).expect("order at least 2");
    let mut coord: Vec<Option<Vec<i64>>> = vec![None; order];
    coord[0] = Some(vec![0; k]);
    let mut queue = vec![0usize];
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let cx = coord[x].clone().expect("visited");
        for j in 0..k {
            let y = a.mul_gen(x, j);
            let mut cy = cx.clone();
            cy[j] += 1;
            match &coord[y] {
                None => {
                    coord[y] = Some(cy);
                    queue.push(y);
                }
                Some(existing) => {
                    let rel: Vec<i64> = cy.iter().zip(existing).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&v| v != 0) {
                        relations.push(rel);
                    }
                }
            }
        }
    }
    let rel = if relations.is_empty() {
        RMatrix::zeros(ring, 0, k)
    } else {
        RMatrix::from_rows(ring, &relations).expect("relations have k entries")
    };
    let h = howell_form(&rel);
    let mut rows: Vec<Vec<i64>> = h.matrix().row_vectors().into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect();
    for j in 0..k {
        let mut r = vec![0i64; k];
        r[j] = order as i64;
        rows.push(r);
    }
    let snf = smith_normal_form_int(&IntMatrix::from_rows(&rows, k).expect("uniform rows"))
        .expect("abelianization has few generators");
    let factors: Vec<u64> = snf
        .invariant_factors
        .iter()
        .filter(|d| **d > BigInt::from(1))
        .map(|d| d.to_u64().expect("factor divides group order"))
        .collect();
    debug_assert_eq!(factors.iter().product::<u64>(), order as u64);
    factors
}

#[cfg(test)]
mod tests {
    use super::super::builtin;
    use super::*;

    #[test]
    fn s3_one_step_quotient_is_c2() {
        let g = builtin::symmetric(3);
        let q = m_step_quotient(&g, 1).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.projection.kernel_elements().len(), 3);
    }

    #[test]
    fn zero_step_quotient_is_trivial() {
        let g = builtin::symmetric(4);
        assert_eq!(m_step_quotient(&g, 0).unwrap().group.order(), 1);
    }

    #[test]
    fn quotient_elements_follow_minimal_representatives() {
        let g = builtin::dihedral(4);
        let q = m_step_quotient(&g, 1).unwrap();
        let reps = q.cosets.representatives();
        assert!(reps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(reps[0], 0);
        for (k, &r) in reps.iter().enumerate() {
            assert_eq!(q.projection.image(r), k);
        }
    }

    #[test]
    fn non_normal_quotient_rejected() {
        let g = builtin::symmetric(3);
        let t = Subgroup::generated(&g, &[g.generators()[1]]);
        assert_eq!(quotient(&g, &t).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn abelian_invariant_examples() {
        assert_eq!(abelian_invariants(&builtin::symmetric(3)), vec![2]);
        assert_eq!(abelian_invariants(&builtin::abelian(&[2, 4])), vec![2, 4]);
        assert_eq!(abelian_invariants(&builtin::dihedral(4)), vec![2, 2]);
        assert_eq!(abelian_invariants(&builtin::abelian(&[2, 3])), vec![6]);
        assert!(abelian_invariants(&builtin::alternating(5)).is_empty());
        assert!(abelian_invariants(&builtin::cyclic(1)).is_empty());
    }
}

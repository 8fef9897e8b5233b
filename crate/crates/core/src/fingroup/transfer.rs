use super::{
    derived_series, derived_series_of, derived_subgroup_of, quotient, CosetTable, FiniteGroup, GroupElement, GroupError,
    Homomorphism, Quotient, Subgroup,
};

/// The transfer `G^ab → N^ab` together with the groups it relates.
#[derive(Debug)]
pub struct TransferData<E: GroupElement> {
    /// `G → G^ab`
    pub g_ab: Quotient,
    /// `N` as a group; `n_embedding[k]` is the index in `G` of its element `k`.
    pub n_group: FiniteGroup<E>,
    pub n_embedding: Vec<usize>,
    /// `N → N^ab`, indexed by elements of `n_group`.
    pub n_ab: Quotient,
    /// Left coset representatives `a_i` of `N` in `G`.
    pub transversal: Vec<usize>,
    /// `G^ab → N^ab`
    pub map: Homomorphism,
    parent_to_n: Vec<usize>,
}

impl<E: GroupElement> TransferData<E> {
    /// Image in `N^ab` of an element of `N` given by its index in `G`.
    pub fn n_ab_of(&self, parent_index: usize) -> usize {
        self.n_ab.projection.image(self.parent_to_n[parent_index])
    }

    /// Transfer of an arbitrary element of `G`, via `G^ab`.
    pub fn transfer_of(&self, g: usize) -> usize {
        self.map.image(self.g_ab.projection.image(g))
    }
}

/// Transfer with the minimal-index transversal.
pub fn transfer_map<E: GroupElement>(g: &FiniteGroup<E>, n: &Subgroup) -> Result<TransferData<E>, GroupError> {
    if !n.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let all: Vec<usize> = (0..g.order()).collect();
    let transversal = CosetTable::new(g, &all, n).representatives().to_vec();
    transfer_map_with(g, n, &transversal)
}

/// Transfer computed from an explicit left transversal: for `g a_i = a_j n_i`
/// the transfer of `g` is `∏ n_i` in `N^ab`.
pub fn transfer_map_with<E: GroupElement>(
    g: &FiniteGroup<E>,
    n: &Subgroup,
    transversal: &[usize],
) -> Result<TransferData<E>, GroupError> {
    if !n.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let all: Vec<usize> = (0..g.order()).collect();
    let cosets = CosetTable::new(g, &all, n);
    if transversal.len() != cosets.count() {
        return Err(GroupError::InvalidElement("transversal has the wrong size".into()));
    }
    let mut slot = vec![usize::MAX; cosets.count()];
    for (i, &a) in transversal.iter().enumerate() {
        let c = cosets.coset_of(a).expect("all elements are covered");
        if slot[c] != usize::MAX {
            return Err(GroupError::InvalidElement("two representatives of one coset".into()));
        }
        slot[c] = i;
    }

    let series = derived_series(g);
    let g_derived = if series.len() > 1 { &series[1] } else { &series[0] };
    let g_ab = quotient(g, g_derived)?;
    let (n_group, n_embedding) = g.subgroup_as_group(n);
    let mut parent_to_n = vec![usize::MAX; g.order()];
    for (k, &p) in n_embedding.iter().enumerate() {
        parent_to_n[p] = k;
    }
    let n_series = derived_series(&n_group);
    let n_derived = if n_series.len() > 1 { &n_series[1] } else { &n_series[0] };
    let n_ab = quotient(&n_group, n_derived)?;

    let transfer_of = |x: usize| -> usize {
        let mut acc = 0;
        for &a in transversal {
            let xa = g.mul(x, a);
            let j = slot[cosets.coset_of(xa).expect("covered")];
            let ni = g.mul(g.inv(transversal[j]), xa);
            acc = n_ab.group.mul(acc, n_ab.projection.image(parent_to_n[ni]));
        }
        acc
    };

    let mut images = vec![usize::MAX; g_ab.group.order()];
    for x in 0..g.order() {
        let t = transfer_of(x);
        let slot = &mut images[g_ab.projection.image(x)];
        if *slot == usize::MAX {
            *slot = t;
        } else if *slot != t {
            return Err(GroupError::NotHomomorphism("transfer is not constant on G' cosets".into()));
        }
    }
    let map = Homomorphism::checked(&g_ab.group, &n_ab.group, images)?;
    Ok(TransferData { g_ab, n_group, n_embedding, n_ab, transversal: transversal.to_vec(), map, parent_to_n })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferIdentityReport {
    /// `transfer(R(n)) = Σ_a a⁻¹ n a` in `N^ab` for every `n ∈ N`.
    pub conjugation_sum_holds: bool,
    /// Number of `G/N`-invariant elements of `N^ab`.
    pub invariant_count: usize,
    /// On invariants, `transfer ∘ R` is multiplication by `[G:N]`.
    pub index_multiplication_holds: bool,
    pub index: usize,
}

pub fn transfer_identity_check<E: GroupElement>(g: &FiniteGroup<E>, n: &Subgroup, t: &TransferData<E>) -> TransferIdentityReport {
    let nab = &t.n_ab.group;
    let mut conjugation_sum_holds = true;
    for &x in n.elements() {
        let lhs = t.transfer_of(x);
        let rhs = t
            .transversal
            .iter()
            .fold(0, |acc, &a| nab.mul(acc, t.n_ab_of(g.conj(a, x))));
        conjugation_sum_holds &= lhs == rhs;
    }

    let index = n.index_in_parent();
    let mut invariant_count = 0;
    let mut index_multiplication_holds = true;
    for &rep in t.n_ab.cosets.representatives() {
        let x = t.n_embedding[rep];
        let y = t.n_ab_of(x);
        let invariant = g.generators().iter().all(|&s| t.n_ab_of(g.conj(s, x)) == y);
        if invariant {
            invariant_count += 1;
            index_multiplication_holds &= t.transfer_of(x) == nab.pow(y, index as i64);
        }
    }
    TransferIdentityReport { conjugation_sum_holds, invariant_count, index_multiplication_holds, index }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessReport {
    /// `H/N → Aut(N^ab)` is injective.
    pub faithful: bool,
    /// Preimage in `H` of the kernel of the action; always contains `N`.
    pub kernel: Subgroup,
}

/// Whether conjugation makes `H/N` act faithfully on `N^ab`.
pub fn conj_action_faithful<E: GroupElement>(h: &FiniteGroup<E>, n: &Subgroup) -> Result<FaithfulnessReport, GroupError> {
    if !n.is_normal() {
        return Err(GroupError::NotNormal);
    }
    let n_derived = derived_subgroup_of(h, n);
    let kernel: Vec<usize> = (0..h.order())
        .filter(|&x| {
            n.generators().iter().all(|&m| {
                let c = h.mul(h.mul(x, m), h.mul(h.inv(x), h.inv(m)));
                n_derived.contains(c)
            })
        })
        .collect();
    let kernel = Subgroup::from_elements(h, &kernel);
    Ok(FaithfulnessReport { faithful: kernel.order() == n.order(), kernel })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientIsoReport {
    /// `ker f ⊆ (f⁻¹H)^[n]`
    pub hypothesis_holds: bool,
    /// The induced map `f⁻¹(H)/(f⁻¹H)^[n] → H/H^[n]` is a bijection.
    pub bijective: bool,
    pub source_order: usize,
    pub target_order: usize,
}

/// Checks the induced map on `n`-step quotients for a surjection `f: G → Q` and `H ≤ Q`.
pub fn quotient_iso_check<E: GroupElement, F: GroupElement>(
    g: &FiniteGroup<E>,
    q: &FiniteGroup<F>,
    f: &Homomorphism,
    h: &Subgroup,
    n: usize,
) -> Result<QuotientIsoReport, GroupError> {
    if !f.is_surjective() {
        return Err(GroupError::NotSurjective);
    }
    let h_tilde = f.preimage(g, h);
    let src_series = derived_series_of(g, &h_tilde);
    let src_term = &src_series[n.min(src_series.len() - 1)];
    let tgt_series = derived_series_of(q, h);
    let tgt_term = &tgt_series[n.min(tgt_series.len() - 1)];
    let hypothesis_holds = f.kernel_elements().iter().all(|&k| src_term.contains(k));

    let src_cosets = CosetTable::new(g, h_tilde.elements(), src_term);
    let tgt_cosets = CosetTable::new(q, h.elements(), tgt_term);
    let mut induced = vec![usize::MAX; src_cosets.count()];
    for &x in h_tilde.elements() {
        let c = src_cosets.coset_of(x).expect("x lies in the preimage");
        let d = tgt_cosets.coset_of(f.image(x)).expect("f maps the preimage into H");
        if induced[c] == usize::MAX {
            induced[c] = d;
        } else if induced[c] != d {
            return Err(GroupError::NotHomomorphism("induced map is not well defined".into()));
        }
    }
    let mut hit = vec![false; tgt_cosets.count()];
    let mut injective = true;
    for &d in &induced {
        injective &= !hit[d];
        hit[d] = true;
    }
    let bijective = injective && hit.iter().all(|&b| b);
    Ok(QuotientIsoReport {
        hypothesis_holds,
        bijective,
        source_order: src_cosets.count(),
        target_order: tgt_cosets.count(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{builtin, m_step_quotient};
    use super::*;

    #[test]
    fn transfer_c4_to_c2_is_zero_on_n() {
        let g = builtin::cyclic(4);
        let x = g.generators()[0];
        let n = Subgroup::generated(&g, &[g.mul(x, x)]);
        let t = transfer_map(&g, &n).unwrap();
        for &m in n.elements() {
            assert_eq!(t.transfer_of(m), 0);
        }
        let rep = transfer_identity_check(&g, &n, &t);
        assert!(rep.conjugation_sum_holds && rep.index_multiplication_holds);
        assert_eq!(rep.index, 2);
    }

    #[test]
    fn transfer_to_whole_group_is_identity() {
        let g = builtin::abelian(&[2, 4]);
        let n = g.whole();
        let t = transfer_map(&g, &n).unwrap();
        for x in 0..g.order() {
            assert_eq!(t.transfer_of(x), t.n_ab_of(x));
        }
    }

    #[test]
    fn transfer_s3_a3_has_trivial_invariants() {
        let g = builtin::symmetric(3);
        let n = derived_series(&g)[1].clone();
        let t = transfer_map(&g, &n).unwrap();
        let rep = transfer_identity_check(&g, &n, &t);
        assert!(rep.conjugation_sum_holds);
        // only the identity of A3 is fixed by the transposition
        assert_eq!(rep.invariant_count, 1);
        assert!(rep.index_multiplication_holds);
    }

    #[test]
    fn transfer_requires_normal_subgroup() {
        let g = builtin::symmetric(3);
        let t = Subgroup::generated(&g, &[g.generators()[1]]);
        assert_eq!(transfer_map(&g, &t).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn d8_acts_faithfully_on_rotations() {
        let g = builtin::dihedral(4);
        let n = Subgroup::generated(&g, &[g.generators()[0]]);
        let rep = conj_action_faithful(&g, &n).unwrap();
        assert!(rep.faithful);
        assert_eq!(rep.kernel.order(), 4);
    }

    #[test]
    fn q8_acts_faithfully_on_cyclic_subgroup() {
        let g = builtin::quaternion();
        let n = Subgroup::generated(&g, &[g.generators()[0]]);
        assert!(conj_action_faithful(&g, &n).unwrap().faithful);
    }

    #[test]
    fn abelian_group_on_itself_is_vacuously_faithful() {
        let g = builtin::abelian(&[2, 3]);
        let rep = conj_action_faithful(&g, &g.whole()).unwrap();
        assert!(rep.faithful);
    }

    #[test]
    fn z4_onto_z2_fails_hypothesis() {
        let g = builtin::cyclic(4);
        let q = m_step_quotient(&g, 1).unwrap();
        assert_eq!(q.group.order(), 4);
        let c2 = builtin::cyclic(2);
        let f = Homomorphism::from_generator_images(&g, &c2, &[c2.generators()[0]]).unwrap();
        let rep = quotient_iso_check(&g, &c2, &f, &c2.whole(), 1).unwrap();
        assert!(!rep.hypothesis_holds);
        assert!(!rep.bijective);
    }

    #[test]
    fn identity_map_always_bijective() {
        let g = builtin::symmetric(4);
        let id = Homomorphism::checked(&g, &g, (0..g.order()).collect()).unwrap();
        for n in 0..4 {
            for h in [g.whole(), g.center(), derived_series(&g)[1].clone()] {
                let rep = quotient_iso_check(&g, &g, &id, &h, n).unwrap();
                assert!(rep.hypothesis_holds && rep.bijective);
            }
        }
    }

    #[test]
    fn non_surjective_rejected() {
        let c2 = builtin::cyclic(2);
        let c4 = builtin::cyclic(4);
        let x = c4.generators()[0];
        let f = Homomorphism::from_generator_images(&c2, &c4, &[c4.mul(x, x)]).unwrap();
        assert_eq!(quotient_iso_check(&c2, &c4, &f, &c4.whole(), 1).unwrap_err(), GroupError::NotSurjective);
    }
}

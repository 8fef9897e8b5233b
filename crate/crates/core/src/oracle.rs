//! Brute-force definitions used to cross-check the group engine: every
//! subgroup is closed by multiplying all pairs, every commutator subgroup is
//! generated by all commutators.

use std::collections::BTreeSet;

use crate::fingroup::{FiniteGroup, GroupElement};

/// Closure of a set under multiplication (a subgroup, for finite groups).
pub fn closure_all_pairs<E: GroupElement>(g: &FiniteGroup<E>, seeds: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = seeds.clone();
    set.insert(0);
    loop {
        let current: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &a in &current {
            for &b in &current {
                set.insert(g.mul(a, b));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// `[H, H]` generated by every commutator of two elements of `H`.
pub fn derived_subgroup<E: GroupElement>(g: &FiniteGroup<E>, h: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut comms = BTreeSet::new();
    for &a in h {
        for &b in h {
            comms.insert(g.commutator(a, b));
        }
    }
    closure_all_pairs(g, &comms)
}

/// Terms `G^[0] ⊋ G^[1] ⊋ …` until the series stabilizes.
pub fn derived_series<E: GroupElement>(g: &FiniteGroup<E>) -> Vec<BTreeSet<usize>> {
    let mut series = vec![(0..g.order()).collect::<BTreeSet<usize>>()];
    loop {
        let next = derived_subgroup(g, series.last().expect("non-empty"));
        if next.len() == series.last().expect("non-empty").len() {
            return series;
        }
        series.push(next);
    }
}

pub fn centralizer<E: GroupElement>(g: &FiniteGroup<E>, set: &[usize]) -> BTreeSet<usize> {
    (0..g.order()).filter(|&x| set.iter().all(|&s| g.mul(x, s) == g.mul(s, x))).collect()
}

pub fn center<E: GroupElement>(g: &FiniteGroup<E>) -> BTreeSet<usize> {
    let all: Vec<usize> = (0..g.order()).collect();
    centralizer(g, &all)
}

/// Whether `n` is normal: `x n x⁻¹ ∈ N` for every `x ∈ G`, `n ∈ N`.
pub fn is_normal<E: GroupElement>(g: &FiniteGroup<E>, n: &BTreeSet<usize>) -> bool {
    (0..g.order()).all(|x| n.iter().all(|&m| n.contains(&g.mul(g.mul(x, m), g.inv(x)))))
}

/// `(|G/G^[m]|, |Z(G/G^[m])|)`: the center of the quotient is counted through
/// its preimage `{z : [z, x] ∈ G^[m] for all x}`.
pub fn m_step_quotient_data<E: GroupElement>(g: &FiniteGroup<E>, m: usize) -> (usize, usize) {
    let series = derived_series(g);
    let term = &series[m.min(series.len() - 1)];
    let preimage = (0..g.order()).filter(|&z| (0..g.order()).all(|x| term.contains(&g.commutator(z, x)))).count();
    (g.order() / term.len(), preimage / term.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::builtin;

    #[test]
    fn s4_series_by_brute_force() {
        let g = builtin::symmetric(4);
        let orders: Vec<usize> = derived_series(&g).iter().map(|s| s.len()).collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert_eq!(m_step_quotient_data(&g, 2), (6, 1));
        assert_eq!(center(&builtin::dihedral(4)).len(), 2);
    }
}

use std::collections::BTreeSet;

use super::{FiniteGroup, GroupElement};

/// A subgroup of an enumerated group, as a sorted set of element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
    members: Vec<bool>,
    generators: Vec<usize>,
    normal: bool,
}

impl Subgroup {
    pub(crate) fn from_sorted_unchecked(parent_order: usize, elements: Vec<usize>, generators: Vec<usize>, normal: bool) -> Self {
        let mut members = vec![false; parent_order];
        for &e in &elements {
            members[e] = true;
        }
        Subgroup { parent_order, elements, members, generators, normal }
    }

    /// The subgroup generated by the given element indices.
    pub fn generated<E: GroupElement>(g: &FiniteGroup<E>, gens: &[usize]) -> Subgroup {
        let mut b = Builder::new(g);
        for &x in gens {
            b.add_generator(g, x);
        }
        b.finish(g)
    }

    /// Wraps a set that is already known to be closed; generators are chosen greedily.
    pub fn from_elements<E: GroupElement>(g: &FiniteGroup<E>, elems: &[usize]) -> Subgroup {
        let mut b = Builder::new(g);
        for &x in elems {
            b.add_generator(g, x);
        }
        let s = b.finish(g);
        debug_assert_eq!(s.order(), elems.iter().collect::<BTreeSet<_>>().len(), "element set was not closed");
        s
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.get(g).copied().unwrap_or(false)
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn index_in_parent(&self) -> usize {
        self.parent_order / self.order()
    }
}

/// Incremental subgroup enumeration: adding a generator only multiplies old
/// elements by the new generator, and new elements by all generators.
struct Builder {
    members: Vec<bool>,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl Builder {
    fn new<E: GroupElement>(g: &FiniteGroup<E>) -> Self {
        let mut members = vec![false; g.order()];
        members[0] = true;
        Builder { members, elements: vec![0], generators: Vec::new() }
    }

    fn add_generator<E: GroupElement>(&mut self, g: &FiniteGroup<E>, x: usize) -> bool {
        if self.members[x] {
            return false;
        }
        self.generators.push(x);
        let old = self.elements.len();
        for i in 0..old {
            let p = g.mul(self.elements[i], x);
            if !self.members[p] {
                self.members[p] = true;
                self.elements.push(p);
            }
        }
        let mut i = old;
        while i < self.elements.len() {
            let e = self.elements[i];
            for k in 0..self.generators.len() {
                let p = g.mul(e, self.generators[k]);
                if !self.members[p] {
                    self.members[p] = true;
                    self.elements.push(p);
                }
            }
            i += 1;
        }
        true
    }

    fn finish<E: GroupElement>(mut self, g: &FiniteGroup<E>) -> Subgroup {
        self.elements.sort_unstable();
        let normal = self
            .generators
            .iter()
            .all(|&h| g.generators().iter().all(|&c| self.members[g.conj(c, h)]));
        Subgroup { parent_order: g.order(), elements: self.elements, members: self.members, generators: self.generators, normal }
    }
}

/// Smallest subgroup containing `seeds` and closed under conjugation by `conjugators`.
pub fn normal_closure<E: GroupElement>(g: &FiniteGroup<E>, seeds: &[usize], conjugators: &[usize]) -> Subgroup {
    let mut b = Builder::new(g);
    let mut queue: Vec<usize> = Vec::new();
    for &s in seeds {
        if b.add_generator(g, s) {
            queue.push(s);
        }
    }
    while let Some(h) = queue.pop() {
        for &c in conjugators {
            let x = g.conj(c, h);
            if b.add_generator(g, x) {
                queue.push(x);
            }
        }
    }
    b.finish(g)
}

/// Derived subgroup of `h`: normal closure in `h` of commutators of its generators.
pub fn derived_subgroup_of<E: GroupElement>(g: &FiniteGroup<E>, h: &Subgroup) -> Subgroup {
    let gens = h.generators();
    let mut comms = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let c = g.commutator(a, b);
            if c != 0 {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms, gens)
}

/// Derived series of a subgroup, `h = h^[0] ⊋ h^[1] ⊋ …`, ending at the first
/// term that equals its own derived subgroup.
pub fn derived_series_of<E: GroupElement>(g: &FiniteGroup<E>, h: &Subgroup) -> Vec<Subgroup> {
    let mut series = vec![h.clone()];
    loop {
        let last = series.last().expect("series is non-empty");
        let next = derived_subgroup_of(g, last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn derived_series<E: GroupElement>(g: &FiniteGroup<E>) -> Vec<Subgroup> {
    derived_series_of(g, &g.whole())
}

/// `{x ∈ G : xs = sx for all s ∈ S}`
pub fn centralizer<E: GroupElement>(g: &FiniteGroup<E>, set: &[usize]) -> Subgroup {
    // commuting with S is the same as commuting with a generating set of ⟨S⟩
    let s = Subgroup::generated(g, set);
    let test = s.generators();
    let elems: Vec<usize> = (0..g.order())
        .filter(|&x| test.iter().all(|&t| g.mul(x, t) == g.mul(t, x)))
        .collect();
    Subgroup::from_elements(g, &elems)
}

impl<E: GroupElement> FiniteGroup<E> {
    pub fn center(&self) -> Subgroup {
        centralizer(self, self.generators())
    }

    pub fn derived_length(&self) -> Option<usize> {
        let series = derived_series(self);
        let last = series.last().expect("series is non-empty");
        last.is_trivial().then(|| series.len() - 1)
    }
}

/// All normal subgroups, as joins of normal closures of single elements.
pub fn normal_subgroups<E: GroupElement>(g: &FiniteGroup<E>) -> Vec<Subgroup> {
    let conj = g.generators().to_vec();
    let mut found: Vec<Subgroup> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut push = |s: Subgroup, found: &mut Vec<Subgroup>| {
        if seen.insert(s.elements().to_vec()) {
            found.push(s);
            true
        } else {
            false
        }
    };
    push(g.trivial_subgroup(), &mut found);
    let mut covered = vec![false; g.order()];
    let mut minimal = Vec::new();
    for x in 1..g.order() {
        if covered[x] {
            continue;
        }
        let s = normal_closure(g, &[x], &conj);
        // all conjugates of x generate the same normal closure
        for &c in &conj {
            covered[g.conj(c, x)] = true;
        }
        covered[x] = true;
        if push(s.clone(), &mut found) {
            minimal.push(s);
        }
    }
    let mut frontier: Vec<Subgroup> = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &minimal {
                if b.is_subset_of(a) {
                    continue;
                }
                let mut gens = a.generators().to_vec();
                gens.extend_from_slice(b.generators());
                let j = normal_closure(g, &gens, &conj);
                if push(j.clone(), &mut found) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
    found
}

#[cfg(test)]
mod tests {
    use super::super::builtin;
    use super::*;

    #[test]
    fn s3_derived_series() {
        let g = builtin::symmetric(3);
        let orders: Vec<usize> = derived_series(&g).iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![6, 3, 1]);
    }

    #[test]
    fn abelian_series_stops_immediately() {
        let g = builtin::cyclic(6);
        let orders: Vec<usize> = derived_series(&g).iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![6, 1]);
    }

    #[test]
    fn d8_series_and_center() {
        let g = builtin::dihedral(4);
        let series = derived_series(&g);
        assert_eq!(series.iter().map(|s| s.order()).collect::<Vec<_>>(), vec![8, 2, 1]);
        let r = g.generators()[0];
        let r2 = g.mul(r, r);
        assert_eq!(series[1].elements(), &[0, r2].iter().copied().collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>()[..]);
        let z = g.center();
        assert_eq!(z.order(), 2);
        assert!(z.contains(r2));
    }

    #[test]
    fn centralizer_of_identity_is_everything() {
        let g = builtin::symmetric(4);
        assert_eq!(centralizer(&g, &[0]).order(), 24);
        assert_eq!(centralizer(&g, &[]).order(), 24);
    }

    #[test]
    fn perfect_group_has_no_derived_length() {
        let a5 = builtin::alternating(5);
        assert_eq!(a5.order(), 60);
        assert_eq!(a5.derived_length(), None);
        assert_eq!(builtin::symmetric(4).derived_length(), Some(3));
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let g = builtin::symmetric(4);
        let orders: Vec<usize> = normal_subgroups(&g).iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
        assert!(normal_subgroups(&g).iter().all(|s| s.is_normal()));
    }

    #[test]
    fn normal_subgroups_of_abelian_group() {
        // C2 x C2 has five subgroups, all normal
        let g = builtin::abelian(&[2, 2]);
        assert_eq!(normal_subgroups(&g).len(), 5);
    }

    #[test]
    fn normality_flag() {
        let g = builtin::symmetric(3);
        let t = g.generators()[1];
        assert!(!Subgroup::generated(&g, &[t]).is_normal());
        assert!(Subgroup::generated(&g, &[g.generators()[0]]).is_normal());
    }
}

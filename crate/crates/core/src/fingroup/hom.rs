use super::{abelian_invariants, FiniteGroup, GroupElement, GroupError, Subgroup};

/// A group homomorphism stored as the image index of every source element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    images: Vec<usize>,
    target_order: usize,
}

impl Homomorphism {
    pub(crate) fn new(images: &[usize], target_order: usize) -> Self {
        Homomorphism { images: images.to_vec(), target_order }
    }

    /// Validates `f(g·s) = f(g)·f(s)` for every element `g` and generator `s`,
    /// which forces the homomorphism law on all pairs.
    pub fn checked<E: GroupElement, F: GroupElement>(
        src: &FiniteGroup<E>,
        tgt: &FiniteGroup<F>,
        images: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if images.len() != src.order() || images.iter().any(|&i| i >= tgt.order()) {
            return Err(GroupError::NotHomomorphism("image table has the wrong shape".into()));
        }
        if images[0] != 0 {
            return Err(GroupError::NotHomomorphism("identity not sent to identity".into()));
        }
        for g in 0..src.order() {
            for (k, &s) in src.generators().iter().enumerate() {
                if images[src.mul_gen(g, k)] != tgt.mul(images[g], images[s]) {
                    return Err(GroupError::NotHomomorphism(format!("fails on element {g} and generator {k}")));
                }
            }
        }
        Ok(Homomorphism { images, target_order: tgt.order() })
    }

    /// Extends images of `src`'s generators to a homomorphism, if one exists.
    pub fn from_generator_images<E: GroupElement, F: GroupElement>(
        src: &FiniteGroup<E>,
        tgt: &FiniteGroup<F>,
        gen_images: &[usize],
    ) -> Result<Self, GroupError> {
        extend_from_images(src, src.generators(), tgt, gen_images)
            .map(|images| Homomorphism { images, target_order: tgt.order() })
            .ok_or_else(|| GroupError::NotHomomorphism("generator images violate a relation".into()))
    }

    pub fn image(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn source_order(&self) -> usize {
        self.images.len()
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn kernel_elements(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&g| self.images[g] == 0).collect()
    }

    pub fn kernel<E: GroupElement>(&self, src: &FiniteGroup<E>) -> Subgroup {
        Subgroup::from_elements(src, &self.kernel_elements())
    }

    /// `f⁻¹(H)` for a subgroup `H` of the target.
    pub fn preimage<E: GroupElement>(&self, src: &FiniteGroup<E>, h: &Subgroup) -> Subgroup {
        let elems: Vec<usize> = (0..self.images.len()).filter(|&g| h.contains(self.images[g])).collect();
        Subgroup::from_elements(src, &elems)
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_order];
        for &i in &self.images {
            hit[i] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_elements().len() == 1
    }

    /// `next ∘ self`
    pub fn then(&self, next: &Homomorphism) -> Homomorphism {
        Homomorphism { images: self.images.iter().map(|&i| next.images[i]).collect(), target_order: next.target_order }
    }
}

/// Breadth-first extension of `src_gens[i] ↦ tgt_imgs[i]` over the Cayley graph
/// of `src`. Returns the image table when the assignment is consistent.
pub fn extend_from_images<E: GroupElement, F: GroupElement>(
    src: &FiniteGroup<E>,
    src_gens: &[usize],
    tgt: &FiniteGroup<F>,
    tgt_imgs: &[usize],
) -> Option<Vec<usize>> {
    assert_eq!(src_gens.len(), tgt_imgs.len());
    let mut images = vec![usize::MAX; src.order()];
    images[0] = 0;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &t) in src_gens.iter().zip(tgt_imgs) {
            let y = src.mul(x, s);
            let fy = tgt.mul(images[x], t);
            if images[y] == usize::MAX {
                images[y] = fy;
                queue.push(y);
            } else if images[y] != fy {
                return None;
            }
        }
    }
    if images.contains(&usize::MAX) {
        return None;
    }
    Some(images)
}

pub const ISO_TEST_LIMIT: usize = 64;

struct Invariants {
    order: usize,
    order_profile: Vec<usize>,
    center_order: usize,
    abelian: Vec<u64>,
    derived_length: Option<usize>,
}

fn invariants<E: GroupElement>(g: &FiniteGroup<E>) -> Invariants {
    let mut order_profile: Vec<usize> = (0..g.order()).map(|a| g.element_order(a)).collect();
    order_profile.sort_unstable();
    Invariants {
        order: g.order(),
        order_profile,
        center_order: g.center().order(),
        abelian: abelian_invariants(g),
        derived_length: g.derived_length(),
    }
}

/// A short generating set, picking elements of large order first.
fn small_generating_set<E: GroupElement>(g: &FiniteGroup<E>) -> Vec<usize> {
    let mut by_order: Vec<usize> = (1..g.order()).collect();
    by_order.sort_by_key(|&a| (std::cmp::Reverse(g.element_order(a)), a));
    let mut gens = Vec::new();
    let mut current = g.trivial_subgroup();
    for a in by_order {
        if current.order() == g.order() {
            break;
        }
        if !current.contains(a) {
            gens.push(a);
            current = Subgroup::generated(g, &gens);
        }
    }
    gens
}

/// Decides isomorphism of two groups of order at most 64 by backtracking over
/// generator images, after comparing cheap invariants. Returns an isomorphism
/// `G1 → G2` when one exists.
pub fn iso_test_small<E: GroupElement, F: GroupElement>(
    g1: &FiniteGroup<E>,
    g2: &FiniteGroup<F>,
) -> Result<Option<Homomorphism>, GroupError> {
    for g in [g1.order(), g2.order()] {
        if g > ISO_TEST_LIMIT {
            return Err(GroupError::TooLarge(g));
        }
    }
    let (a, b) = (invariants(g1), invariants(g2));
    if a.order != b.order
        || a.order_profile != b.order_profile
        || a.center_order != b.center_order
        || a.abelian != b.abelian
        || a.derived_length != b.derived_length
    {
        return Ok(None);
    }
    let gens = small_generating_set(g1);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let ord = g1.element_order(x);
            (0..g2.order()).filter(|&y| g2.element_order(y) == ord).collect()
        })
        .collect();
    let mut chosen = Vec::with_capacity(gens.len());
    Ok(search(g1, g2, &gens, &candidates, &mut chosen))
}

fn search<E: GroupElement, F: GroupElement>(
    g1: &FiniteGroup<E>,
    g2: &FiniteGroup<F>,
    gens: &[usize],
    candidates: &[Vec<usize>],
    chosen: &mut Vec<usize>,
) -> Option<Homomorphism> {
    if chosen.len() == gens.len() {
        let images = extend_from_images(g1, gens, g2, chosen)?;
        let h = Homomorphism { images, target_order: g2.order() };
        return (h.is_injective() && h.is_surjective()).then_some(h);
    }
    for &y in &candidates[chosen.len()] {
        // images of the chosen prefix must not already collapse
        chosen.push(y);
        let prefix_ok = {
            let sub1 = Subgroup::generated(g1, &gens[..chosen.len()]);
            let sub2 = Subgroup::generated(g2, chosen);
            sub1.order() == sub2.order()
        };
        if prefix_ok {
            if let Some(h) = search(g1, g2, gens, candidates, chosen) {
                return Some(h);
            }
        }
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::builtin;
    use super::*;

    #[test]
    fn d8_not_isomorphic_to_q8() {
        assert!(iso_test_small(&builtin::dihedral(4), &builtin::quaternion()).unwrap().is_none());
    }

    #[test]
    fn group_isomorphic_to_itself() {
        let g = builtin::symmetric(4);
        let iso = iso_test_small(&g, &g).unwrap().unwrap();
        assert!(iso.is_injective());
    }

    #[test]
    fn different_realizations_of_c6() {
        let c6 = builtin::cyclic(6);
        let c2c3 = builtin::abelian(&[2, 3]);
        assert!(iso_test_small(&c6, &c2c3).unwrap().is_some());
        assert!(iso_test_small(&c6, &builtin::symmetric(3)).unwrap().is_none());
    }

    #[test]
    fn too_large_rejected() {
        let s5 = builtin::symmetric(5);
        assert_eq!(iso_test_small(&s5, &s5).unwrap_err(), GroupError::TooLarge(120));
    }

    #[test]
    fn generator_images_must_respect_relations() {
        let c4 = builtin::cyclic(4);
        let c2 = builtin::cyclic(2);
        assert!(Homomorphism::from_generator_images(&c4, &c2, &[c2.generators()[0]]).is_ok());
        let c3 = builtin::cyclic(3);
        assert!(Homomorphism::from_generator_images(&c4, &c3, &[c3.generators()[0]]).is_err());
    }
}

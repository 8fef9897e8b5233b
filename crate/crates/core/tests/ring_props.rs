use msolv_core::fingroup::builtin;
use msolv_core::grpring::*;
use msolv_core::zmodlin::ResidueRing;
use proptest::prelude::*;

fn s3_ring(n: u64) -> GroupRing {
    GroupRing::from_group(ResidueRing::new(n).unwrap(), &builtin::symmetric(3))
}

fn coeffs() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..12, 6)
}

proptest! {
    #[test]
    fn ring_axioms(a in coeffs(), b in coeffs(), c in coeffs(), n in prop::sample::select(vec![2u64, 4, 9, 12])) {
        let r = s3_ring(n);
        let (a, b, c) = (r.element(a).unwrap(), r.element(b).unwrap(), r.element(c).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().mul(&c).unwrap(), a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(r.one().mul(&a).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&r.one()).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn augmentation_is_multiplicative(a in coeffs(), b in coeffs()) {
        let r = s3_ring(9);
        let base = r.base();
        let (a, b) = (r.element(a).unwrap(), r.element(b).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().augmentation(), base.mul(a.augmentation(), b.augmentation()));
    }

    #[test]
    fn multiplication_matrices_match_products(a in coeffs(), b in coeffs()) {
        let r = s3_ring(4);
        let (a, b) = (r.element(a).unwrap(), r.element(b).unwrap());
        prop_assert_eq!(mult_matrix(&a).vec_mul(b.coeffs()).unwrap(), a.mul(&b).unwrap().into_coeffs());
        prop_assert_eq!(right_mult_matrix(&a).vec_mul(b.coeffs()).unwrap(), b.mul(&a).unwrap().into_coeffs());
    }

    #[test]
    fn projection_is_a_ring_map(a in prop::collection::vec(0u64..9, 27), b in prop::collection::vec(0u64..9, 27)) {
        let t = CyclicTower::new(ResidueRing::new(9).unwrap(), MulTable::cyclic(3), &[3, 9]).unwrap();
        let r9 = t.ring(9).unwrap();
        let (a, b) = (r9.element(a).unwrap(), r9.element(b).unwrap());
        let pa = t.project(&a, 9, 3).unwrap();
        let pb = t.project(&b, 9, 3).unwrap();
        prop_assert_eq!(t.project(&a.mul(&b).unwrap(), 9, 3).unwrap(), pa.mul(&pb).unwrap());
        prop_assert_eq!(t.project(&a.add(&b).unwrap(), 9, 3).unwrap(), pa.add(&pb).unwrap());
    }
}

use std::collections::BTreeSet;

use msolv_core::zmodlin::*;
use num_bigint::BigUint;
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = (u64, usize, Vec<Vec<u64>>)> {
    (prop::sample::select(vec![2u64, 4, 6, 8, 9, 12]), 1usize..4, 1usize..4).prop_flat_map(|(n, rows, cols)| {
        (Just(n), Just(cols), prop::collection::vec(prop::collection::vec(0..n, cols), rows))
    })
}

fn all_vectors(n: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..n).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn exhaustive_span(m: &RMatrix) -> BTreeSet<Vec<u64>> {
    all_vectors(m.modulus(), m.rows()).into_iter().map(|c| m.vec_mul(&c).unwrap()).collect()
}

proptest! {
    #[test]
    fn howell_is_idempotent((n, cols, rows) in matrix_strategy()) {
        let m = RMatrix::from_residue_rows(ResidueRing::new(n).unwrap(), cols, rows).unwrap();
        let h = howell_form(&m);
        let again = howell_form(h.matrix());
        prop_assert_eq!(again.matrix(), h.matrix());
    }

    #[test]
    fn howell_span_is_exact((n, cols, rows) in matrix_strategy()) {
        let m = RMatrix::from_residue_rows(ResidueRing::new(n).unwrap(), cols, rows).unwrap();
        let h = howell_form(&m);
        let span = exhaustive_span(&m);
        prop_assert_eq!(h.span_size(), BigUint::from(span.len()));
        for v in all_vectors(n, cols) {
            prop_assert_eq!(h.contains(&v), span.contains(&v));
        }
        // the transform reproduces the form from the input rows
        if m.rows() > 0 && h.rank() > 0 {
            prop_assert_eq!(&h.transform().mul(&m).unwrap(), h.matrix());
        }
    }

    #[test]
    fn kernel_is_exhaustive((n, cols, rows) in matrix_strategy()) {
        let m = RMatrix::from_residue_rows(ResidueRing::new(n).unwrap(), cols, rows).unwrap();
        let k = howell_form(&kernel_basis(&m));
        let brute: Vec<Vec<u64>> = all_vectors(n, m.rows())
            .into_iter()
            .filter(|v| m.vec_mul(v).unwrap().iter().all(|&x| x == 0))
            .collect();
        prop_assert_eq!(k.span_size(), BigUint::from(brute.len()));
        for v in &brute {
            prop_assert!(k.contains(v));
        }
    }

    #[test]
    fn solve_linear_is_sound((n, cols, rows) in matrix_strategy(), seed in 0u64..1000) {
        let ring = ResidueRing::new(n).unwrap();
        let m = RMatrix::from_residue_rows(ring, cols, rows).unwrap();
        let b: Vec<u64> = (0..cols as u64).map(|j| (seed * 7 + j * 13) % n).collect();
        let sol = solve_linear(&m, &b).unwrap();
        let feasible = all_vectors(n, m.rows()).into_iter().any(|v| m.vec_mul(&v).unwrap() == b);
        prop_assert_eq!(sol.is_feasible(), feasible);
        if let Some(x) = sol.particular {
            prop_assert_eq!(m.vec_mul(&x).unwrap(), b);
        }
    }

    #[test]
    fn smith_factors_divide(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 1..4)) {
        let snf = smith_normal_form_int(&IntMatrix::from_rows(&rows, 3).unwrap()).unwrap();
        for w in snf.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]) == num_bigint::BigInt::from(0));
        }
    }
}

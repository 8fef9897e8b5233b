//! The enumerated-group engine against brute-force definitions.

use std::collections::BTreeSet;

use msolv_core::constructions::group_corpus;
use msolv_core::fingroup::{centralizer, derived_series, m_step_quotient, normal_subgroups};
use msolv_core::oracle;

#[test]
fn engine_matches_all_pairs_definitions() {
    for (name, g) in group_corpus().unwrap() {
        let engine: Vec<BTreeSet<usize>> =
            derived_series(&g).iter().map(|s| s.elements().iter().copied().collect()).collect();
        assert_eq!(engine, oracle::derived_series(&g), "derived series of {name}");
        let z: BTreeSet<usize> = g.center().elements().iter().copied().collect();
        assert_eq!(z, oracle::center(&g), "center of {name}");
        for m in 0..=3 {
            let q = m_step_quotient(&g, m).unwrap();
            assert_eq!((q.group.order(), q.group.center().order()), oracle::m_step_quotient_data(&g, m), "{name}, m = {m}");
        }
        let probes: Vec<usize> = (0..g.order()).step_by(1 + g.order() / 7).collect();
        for &x in &probes {
            let c: BTreeSet<usize> = centralizer(&g, &[x]).elements().iter().copied().collect();
            assert_eq!(c, oracle::centralizer(&g, &[x]), "centralizer in {name}");
        }
    }
}

#[test]
fn normal_subgroups_are_normal_and_complete_for_small_groups() {
    for (name, g) in group_corpus().unwrap().into_iter().filter(|(_, g)| g.order() <= 24) {
        let found: BTreeSet<BTreeSet<usize>> =
            normal_subgroups(&g).iter().map(|s| s.elements().iter().copied().collect()).collect();
        for n in &found {
            assert!(oracle::is_normal(&g, n), "{name}");
        }
        // every normal closure of one element must be listed
        for x in 0..g.order() {
            let conjugates: BTreeSet<usize> = (0..g.order()).map(|y| g.mul(g.mul(y, x), g.inv(y))).collect();
            let closure = oracle::closure_all_pairs(&g, &conjugates);
            assert!(found.contains(&closure), "{name}");
        }
    }
}

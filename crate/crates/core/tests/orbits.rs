//! Exhaustive orbit counting cross-checked against independent routes.

use std::collections::HashSet;

use num_bigint::BigInt;
use t8p_core::aut::{verify_map, GeneratorMap};
use t8p_core::oracle::{self, build_cayley_graph, is_connected, ConnectionSet, MaskAction, SweepOptions};
use t8p_core::{ActionTable, ClassKind, Domain, GroupElement, OddPrime};

fn p(n: u64) -> OddPrime {
    OddPrime::new(n).unwrap()
}

/// Automorphisms found by testing every pair of generator images, without
/// using the two parametric families.
fn automorphism_tables(p: OddPrime) -> Vec<Vec<GroupElement>> {
    let elements: Vec<_> = GroupElement::all(p).collect();
    let mut out = Vec::new();
    for &a_image in elements.iter().filter(|g| g.order() == p.two_p()) {
        for &b_image in elements.iter().filter(|g| g.order() == 8) {
            let table = GeneratorMap { a_image, b_image }.table();
            if verify_map(p, &table) {
                out.push(table);
            }
        }
    }
    out
}

#[test]
fn element_level_orbit_count_p3() {
    let pr = p(3);
    let auts = automorphism_tables(pr);
    assert_eq!(auts.len(), 24);

    // inverse-closed classes built from the group law alone
    let mut classes: Vec<u64> = Vec::new();
    for g in GroupElement::all(pr).filter(|g| !g.is_identity()) {
        let c = (1u64 << g.index()) | (1u64 << g.inv().index());
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    assert_eq!(classes.len(), 12);

    let image = |table: &[GroupElement], set: u64| {
        (0..24).filter(|i| set >> i & 1 == 1).fold(0u64, |acc, i| acc | 1 << table[i].index())
    };
    let mut orbits = 0;
    for m in 0u32..1 << classes.len() {
        let set = (0..classes.len()).filter(|i| m >> i & 1 == 1).fold(0, |acc, i| acc | classes[i]);
        if auts.iter().all(|t| image(t, set) >= set) {
            orbits += 1;
        }
    }
    assert_eq!(orbits, 624);
    assert_eq!(oracle::burnside_count(pr).unwrap(), BigInt::from(orbits));
    assert_eq!(oracle::orbit_partition_count(pr, 3).unwrap(), BigInt::from(orbits));
}

#[test]
fn family_automorphisms_are_all_automorphisms_p3_p5() {
    for pr in [p(3), p(5)] {
        let found: HashSet<_> = automorphism_tables(pr).into_iter().collect();
        let families: HashSet<_> = t8p_core::enumerate_aut(pr).into_iter().map(|f| f.table()).collect();
        assert_eq!(found, families);
    }
}

#[test]
fn sweep_p3() {
    let s = oracle::sweep(p(3), &SweepOptions::default()).unwrap();
    assert_eq!(s.orbits, 624);
    assert_eq!(s.connected, 568);
    assert_eq!(s.disconnected_a_only, 48);
    assert_eq!(s.disconnected_b_touching, 8);
    assert_eq!(s.connected + s.disconnected(), s.orbits);
}

#[test]
fn sweep_p5_matches_burnside_and_is_worker_independent() {
    let pr = p(5);
    let runs: Vec<_> = [1, 2, 4]
        .into_iter()
        .map(|w| oracle::sweep(pr, &SweepOptions { cap: 5, workers: Some(w) }).unwrap())
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let s = &runs[0];
    assert_eq!(BigInt::from(s.orbits), oracle::burnside_count(pr).unwrap());
    assert_eq!(s.orbits, 25152);
    assert_eq!(s.connected, 24808);
    assert_eq!(s.disconnected_a_only + s.disconnected_b_touching, s.orbits - s.connected);
}

#[test]
fn connectivity_is_constant_on_orbits_p3() {
    let pr = p(3);
    let table = ActionTable::cached(pr).unwrap();
    let d = &table.domain;
    let action = MaskAction::new(d.len(), &table.permutations);
    let conn: Vec<bool> =
        (0..1u64 << d.len()).map(|m| is_connected(&ConnectionSet::new(pr, m).unwrap(), d)).collect();
    for m in 0..1u64 << d.len() {
        assert_eq!(conn[m as usize], conn[action.orbit_minimum(m) as usize], "mask {m:#x}");
    }
}

#[test]
fn connectivity_is_constant_on_orbits_p5_sampled() {
    let pr = p(5);
    let table = ActionTable::cached(pr).unwrap();
    let d = &table.domain;
    let action = MaskAction::new(d.len(), &table.permutations);
    let connected = |m| is_connected(&ConnectionSet::new(pr, m).unwrap(), d);
    // deterministic stride through the mask space
    for m in (0..1u64 << d.len()).step_by(997) {
        let c = connected(m);
        for k in 0..table.permutations.len() - 1 {
            assert_eq!(connected(action.image(k, m)), c);
        }
    }
}

/// The eight listed disconnected sets meeting `B`, at `j = 0`.
fn listed_b_sets(pr: OddPrime) -> Vec<Vec<GroupElement>> {
    let pv = pr.get() as i64;
    let e = |k, l| GroupElement::new(pr, k, l);
    let base = vec![e(0, 1), e(pv, 3)];
    let second = vec![e(pv, 1), e(0, 3)];
    let ap = vec![e(pv, 0)];
    let b2 = vec![e(0, 2), e(pv, 2)];
    let mut out = Vec::new();
    for with_second in [false, true] {
        for (with_b2, with_ap) in [(false, false), (false, true), (true, false), (true, true)] {
            let mut s = base.clone();
            if with_second {
                s.extend(&second);
            }
            if with_b2 {
                s.extend(&b2);
            }
            if with_ap {
                s.extend(&ap);
            }
            out.push(s);
        }
    }
    out
}

#[test]
fn listed_b_touching_sets_are_the_census() {
    for pr in [p(3), p(5)] {
        let table = ActionTable::cached(pr).unwrap();
        let d = &table.domain;
        let action = MaskAction::new(d.len(), &table.permutations);
        let summary = oracle::sweep(pr, &SweepOptions::default()).unwrap();
        let mut mins: Vec<u64> = listed_b_sets(pr)
            .iter()
            .map(|s| {
                let set = ConnectionSet::from_elements(d, s).unwrap();
                assert_eq!(set.elements(d).len(), s.len());
                assert!(!is_connected(&set, d));
                assert_ne!(set.mask() & d.block_mask(ClassKind::B), 0);
                action.orbit_minimum(set.mask())
            })
            .collect();
        mins.sort_unstable();
        mins.dedup();
        assert_eq!(mins.len(), 8, "listed sets fall into distinct orbits");
        assert_eq!(mins, summary.b_touching_representatives);
    }
}

#[test]
fn graphs_are_regular_and_symmetric() {
    let pr = p(3);
    let d = Domain::build(pr);
    for m in 0..1u64 << d.len() {
        let set = ConnectionSet::new(pr, m).unwrap();
        let g = build_cayley_graph(&set, &d);
        assert_eq!(g.regular_degree(), Some(set.elements(&d).len()));
        assert!(g.is_symmetric());
    }
}

#[test]
fn circulant_oracle_small_primes() {
    assert_eq!(oracle::circulant_orbit_count(p(3)).unwrap(), BigInt::from(8));
    assert_eq!(oracle::circulant_orbit_count(p(5)).unwrap(), BigInt::from(20));
}

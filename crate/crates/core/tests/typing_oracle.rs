mod common;

use std::collections::BTreeSet;

use common::{absorbing_associative, all_tables, permutations, typings};
use sgpoidkit::typing::{infer_types, infer_types_with, is_semigroupoid, minimal_objects, TypeStructure};
use sgpoidkit::CompositionTable;

fn as_set(it: impl Iterator<Item = TypeStructure>) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    it.map(|ts| (ts.doms, ts.cods)).collect()
}

#[test]
fn typings_match_brute_force() {
    for t in all_tables(2, true) {
        for m in 1..=3 {
            let expected: BTreeSet<_> = typings(&t, m).into_iter().collect();
            assert_eq!(as_set(infer_types_with(&t, m, false)), expected, "{t} m={m}");
            let pinned: BTreeSet<_> = expected.iter().filter(|(d, _)| d[0] == 0).cloned().collect();
            assert_eq!(as_set(infer_types(&t, m)), pinned);
        }
    }
}

#[test]
fn minimal_objects_matches_brute_force() {
    for t in all_tables(2, true) {
        let expected = (1..=4).find(|&m| !typings(&t, m).is_empty());
        assert_eq!(minimal_objects(&t), expected, "{t}");
    }
}

#[test]
fn empty_table_spreads_over_all_objects() {
    for n in 1..=3 {
        let t = CompositionTable::empty(n);
        let spread = infer_types_with(&t, 2 * n, false).any(|ts| {
            ts.doms.iter().chain(&ts.cods).collect::<BTreeSet<_>>().len() == 2 * n
        });
        assert!(spread, "n = {n}");
    }
}

#[test]
fn closed_under_object_permutations() {
    for t in all_tables(2, true).into_iter().step_by(3) {
        for m in 1..=3 {
            let all = as_set(infer_types_with(&t, m, false));
            for p in permutations(m) {
                for (d, c) in &all {
                    let ts = TypeStructure::new(m, d.clone(), c.clone()).unwrap().permute_objects(&p);
                    assert!(all.contains(&(ts.doms, ts.cods)));
                }
            }
        }
    }
}

#[test]
fn typable_counts_grow_with_objects() {
    for t in all_tables(2, true) {
        for m in 1..=3 {
            if infer_types(&t, m).next().is_some() {
                assert!(infer_types(&t, m + 1).next().is_some(), "{t} m={m}");
            }
        }
    }
}

#[test]
fn typability_and_associativity_are_independent() {
    let tables = all_tables(2, true);
    assert!(tables
        .iter()
        .any(|t| !absorbing_associative(t) && !typings(t, 1).is_empty()));
    assert!(tables
        .iter()
        .any(|t| absorbing_associative(t) && (1..=4).all(|m| typings(t, m).is_empty())));
    for t in &tables {
        let expected = absorbing_associative(t) && (1..=4).any(|m| !typings(t, m).is_empty());
        assert_eq!(is_semigroupoid(t), expected);
    }
}

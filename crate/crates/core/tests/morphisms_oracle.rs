mod common;

use common::{absorbing_associative, all_tables, brute_morphisms, typings};
use sgpoidkit::catalog;
use sgpoidkit::morphisms::{
    check_morphism, collect_morphisms_parallel, find_morphisms, ArrowMap, Distinctness,
};
use sgpoidkit::CompositionTable;

fn small_semigroupoids() -> Vec<CompositionTable> {
    (1..=2)
        .flat_map(|n| all_tables(n, true))
        .filter(|t| absorbing_associative(t) && (1..=4).any(|m| !typings(t, m).is_empty()))
        .collect()
}

fn images(it: impl Iterator<Item = ArrowMap>) -> Vec<Vec<usize>> {
    it.map(|m| m.images).collect()
}

#[test]
fn morphisms_match_brute_force() {
    let tables = small_semigroupoids();
    for s in &tables {
        for t in &tables {
            for strict in [false, true] {
                let expected = brute_morphisms(s, t, strict);
                assert_eq!(images(find_morphisms(s, t, false, strict)), expected);
                let bijective: Vec<Vec<usize>> = expected
                    .iter()
                    .filter(|phi| {
                        s.n() == t.n() && {
                            let mut v = phi.to_vec();
                            v.sort();
                            v.dedup();
                            v.len() == phi.len()
                        }
                    })
                    .cloned()
                    .collect();
                assert_eq!(images(find_morphisms(s, t, true, strict)), bijective);
            }
        }
    }
}

#[test]
fn strict_morphisms_are_permissive() {
    let tables = small_semigroupoids();
    for s in &tables {
        for t in &tables {
            let permissive = images(find_morphisms(s, t, false, false));
            for phi in images(find_morphisms(s, t, false, true)) {
                assert!(permissive.contains(&phi));
            }
        }
    }
}

#[test]
fn strict_automorphisms_invert() {
    for s in small_semigroupoids().iter().chain([&catalog::two_object_semigroupoid()]) {
        for phi in find_morphisms(s, s, true, true) {
            let inv = phi.inverse().expect("bijective map has an inverse");
            assert!(check_morphism(s, s, &inv, true).unwrap());
            assert_eq!(phi.then(&inv).unwrap(), ArrowMap::identity(s.n()));
        }
    }
}

#[test]
fn two_object_endomorphisms_match_brute_force() {
    let s = catalog::two_object_semigroupoid();
    let permissive = brute_morphisms(&s, &s, false);
    let strict = brute_morphisms(&s, &s, true);
    assert_eq!(permissive.len(), 9);
    assert_eq!(strict.len(), 6);
    assert_eq!(images(find_morphisms(&s, &s, false, false)), permissive);
    assert_eq!(images(find_morphisms(&s, &s, false, true)), strict);
}

#[test]
fn parallel_search_keeps_order() {
    let s = catalog::two_object_semigroupoid();
    let ff = catalog::flip_flop();
    for (a, b) in [(&s, &s), (&ff, &ff), (&ff, &s)] {
        for strict in [false, true] {
            let seq = images(find_morphisms(a, b, false, strict));
            for jobs in [2, 4] {
                let par = collect_morphisms_parallel(a, b, Distinctness::Any, strict, jobs);
                assert_eq!(images(par.into_iter()), seq);
            }
        }
    }
}

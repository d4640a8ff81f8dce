mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{
    absorbing_associative, all_tables, arc_closed, brute_functional_classes, closed_graphs,
    brute_isomorphism_count, lexmin_form, typings,
};
use sgpoidkit::arrowtype::*;
use sgpoidkit::morphisms::{check_morphism, ArrowMap};
use sgpoidkit::typing::TypeStructure;

type Arcs = BTreeSet<(u32, u32)>;

fn graph(arcs: &Arcs) -> ArrowTypeGraph {
    ArrowTypeGraph::from_arcs(arcs.iter().copied())
}

#[test]
fn canonical_form_decides_isomorphism() {
    for k in 1..=4 {
        let graphs = closed_graphs(k, 4);
        let mut by_class: BTreeMap<Vec<(u32, u32)>, ArrowTypeGraph> = BTreeMap::new();
        let mut forms = BTreeSet::new();
        for arcs in &graphs {
            let canon = canonical_form(&graph(arcs));
            assert!(are_isomorphic(&canon, &graph(arcs)));
            let class = lexmin_form(arcs, k);
            match by_class.get(&class) {
                Some(c) => assert_eq!(&canon, c, "{arcs:?}"),
                None => {
                    by_class.insert(class, canon.clone());
                }
            }
            forms.insert(canon);
        }
        // distinct classes never share a canonical form
        assert_eq!(forms.len(), by_class.len());
    }
}

#[test]
fn isomorphism_counts_match_brute_force() {
    for k in 1..=3 {
        let graphs = closed_graphs(k, 3);
        for g in &graphs {
            for h in &graphs {
                if g.len() != h.len() {
                    continue;
                }
                let got = digraph_isomorphisms(&graph(g), &graph(h)).unwrap().count();
                assert_eq!(got, brute_isomorphism_count(g, h, k), "{g:?} {h:?}");
                let same_form = canonical_form(&graph(g)) == canonical_form(&graph(h));
                assert_eq!(got > 0, same_form);
                if same_form {
                    assert_eq!(signature(&graph(g)), signature(&graph(h)));
                }
            }
            let identity: NodeMap = (0..k as u32).map(|v| (v, v)).collect();
            assert!(digraph_isomorphisms(&graph(g), &graph(g)).unwrap().any(|m| m == identity));
        }
    }
}

#[test]
fn brute_force_cells_match_lexmin_classes() {
    for n in 1..=3 {
        for m in 1..=2 * n {
            let expected: BTreeSet<Vec<(u32, u32)>> = if m <= 4 {
                closed_graphs(m, n)
                    .into_iter()
                    .filter(|a| a.len() == n)
                    .map(|a| lexmin_form(&a, m))
                    .collect()
            } else {
                continue;
            };
            let got = enumerate_brute_force(n, m).unwrap();
            assert_eq!(got.len(), expected.len(), "({n},{m})");
            let got_forms: BTreeSet<Vec<(u32, u32)>> =
                got.iter().map(|g| lexmin_form(g.arcs(), m)).collect();
            assert_eq!(got_forms, expected);
        }
    }
}

fn brute_database(max_arrows: usize) -> ClassDatabase {
    let mut db = ClassDatabase::new();
    for n in 1..=max_arrows {
        for m in 1..=2 * n {
            for g in enumerate_brute_force(n, m).unwrap() {
                db.insert(&g).unwrap();
            }
        }
    }
    db.mark_complete(max_arrows, None);
    db
}

#[test]
fn three_methods_agree_up_to_four_arrows() {
    let brute = brute_database(4);
    let mut inc = ClassDatabase::new();
    for n in 1..=4 {
        enumerate_incremental(&mut inc, n).unwrap();
    }
    let mut clo = ClassDatabase::new();
    enumerate_by_closure(&mut clo, ClosureLimits { max_arrows: 4, max_objects: None }).unwrap();
    assert_eq!(inc.all_classes(), brute.all_classes());
    assert_eq!(clo.all_classes(), brute.all_classes());
}

#[test]
fn incremental_from_single_arrows_without_isolated_seed() {
    // one_more_arrow alone reaches every two-arrow class except two
    // disjoint arcs
    let mut found = BTreeSet::new();
    for g in [ArrowTypeGraph::from_arcs([(0, 0)]), ArrowTypeGraph::from_arcs([(0, 1)])] {
        let m = g.m();
        for arc in one_more_arrow(g.arcs(), m, false)
            .into_iter()
            .chain(one_more_arrow(g.arcs(), m + 1, true))
        {
            let mut arcs = g.arcs().clone();
            arcs.insert(arc);
            found.insert(canonical_form(&graph(&arcs)));
        }
    }
    let all: BTreeSet<ArrowTypeGraph> = brute_database(2).classes_with_arcs(2).into_iter().collect();
    assert_eq!(all.len(), 7);
    assert_eq!(found.len(), 6);
    let missing: Vec<_> = all.difference(&found).collect();
    assert!(are_isomorphic(missing[0], &ArrowTypeGraph::from_arcs([(0, 1), (2, 3)])));
}

#[test]
fn one_more_arrow_is_complete() {
    for k in 1..=3 {
        for arcs in closed_graphs(k, 9) {
            for added in [false, true] {
                let m = if added { k + 1 } else { k };
                let got: BTreeSet<(u32, u32)> = one_more_arrow(&arcs, m, added).into_iter().collect();
                for d in 0..m as u32 {
                    for c in 0..m as u32 {
                        let touches = d == m as u32 - 1 || c == m as u32 - 1;
                        let mut ext = arcs.clone();
                        let fresh = ext.insert((d, c));
                        let valid = fresh && arc_closed(&ext) && (!added || touches);
                        assert_eq!(got.contains(&(d, c)), valid, "{arcs:?} + ({d},{c})");
                    }
                }
            }
        }
    }
}

#[test]
fn closure_laws_on_three_nodes() {
    let pairs: Vec<(u32, u32)> = (0..3).flat_map(|d| (0..3).map(move |c| (d, c))).collect();
    let sets: Vec<Arcs> = (0u32..512)
        .map(|mask| (0..9).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect())
        .collect();
    for a in &sets {
        let c = transitive_closure(a.iter().copied());
        assert!(a.is_subset(c.arcs()));
        assert!(is_transitively_closed(&c));
        assert_eq!(transitive_closure(c.arcs().iter().copied()), c);
        for &e in &pairs {
            let mut b = a.clone();
            b.insert(e);
            let cb = transitive_closure(b.iter().copied());
            assert!(c.arcs().is_subset(cb.arcs()));
        }
        // smallest: every closed superset contains the closure
        if arc_closed(a) {
            assert_eq!(c.arcs(), a);
        }
    }
}

#[test]
fn arrow_type_maps_are_strict_homomorphisms() {
    for n in 1..=2 {
        for t in all_tables(n, true).into_iter().filter(absorbing_associative) {
            for m in 1..=2 * n {
                for (doms, cods) in typings(&t, m) {
                    let ts = TypeStructure::new(m, doms, cods).unwrap();
                    let g = arrow_type_of(&t, &ts).unwrap();
                    let target = arrow_type_table(&g);
                    let map = ArrowMap::new(target.n(), arrow_type_map(&ts, &g)).unwrap();
                    assert!(check_morphism(&t, &target, &map, true).unwrap(), "{t} {ts:?}");
                }
            }
        }
    }
}

#[test]
fn functional_digraph_counts_match_brute_force() {
    for d in 1..=5 {
        assert_eq!(functional_digraph_count(d).unwrap(), brute_functional_classes(d), "degree {d}");
    }
}

#[test]
fn database_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut db = ClassDatabase::new();
    enumerate_by_closure(&mut db, ClosureLimits { max_arrows: 4, max_objects: None }).unwrap();
    db.save(dir.path()).unwrap();
    let back = ClassDatabase::load(dir.path()).unwrap();
    assert_eq!(back.all_classes(), db.all_classes());
    assert_eq!(back.count_table(4, 8).unwrap(), db.count_table(4, 8).unwrap());
    let text = std::fs::read_to_string(dir.path().join("nodes2_arcs2.json")).unwrap();
    let lists: Vec<Vec<[u32; 2]>> = serde_json::from_str(&text).unwrap();
    for l in &lists {
        let mut sorted = l.clone();
        sorted.sort();
        assert_eq!(&sorted, l);
    }
}

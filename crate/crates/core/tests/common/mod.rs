//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the search engine.
#![allow(dead_code)]

use std::collections::BTreeSet;

use sgpoidkit::genrep::TransformationArrow;
use sgpoidkit::{ArrowValue, CompositionTable};

/// Every vector of length `len` over `0..k`, in lexicographic order.
pub fn all_vectors(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len > 0 && k == 0 {
        return out;
    }
    let mut v = vec![0; len];
    loop {
        out.push(v.clone());
        let mut i = len;
        while i > 0 && v[i - 1] == k - 1 {
            v[i - 1] = 0;
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        v[i - 1] += 1;
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    all_vectors(n, n)
        .into_iter()
        .filter(|v| v.iter().collect::<BTreeSet<_>>().len() == n)
        .collect()
}

/// Composition with the non-composable value absorbing on both sides.
fn mul(t: &CompositionTable, x: Option<usize>, y: Option<usize>) -> Option<usize> {
    match (x, y) {
        (Some(a), Some(b)) => t.get(a, b).arrow(),
        _ => None,
    }
}

/// `(ab)c == a(bc)` for all triples, with nc absorbing.
pub fn absorbing_associative(t: &CompositionTable) -> bool {
    let n = t.n();
    (0..n).all(|a| {
        (0..n).all(|b| {
            (0..n).all(|c| {
                mul(t, mul(t, Some(a), Some(b)), Some(c)) == mul(t, Some(a), mul(t, Some(b), Some(c)))
            })
        })
    })
}

/// All `n`-arrow tables (labeled), entries over arrows and optionally nc.
pub fn all_tables(n: usize, allow_nc: bool) -> Vec<CompositionTable> {
    let k = if allow_nc { n + 1 } else { n };
    all_vectors(n * n, k)
        .into_iter()
        .map(|cells| {
            let rows = cells.chunks(n.max(1)).take(n).map(|r| {
                r.iter()
                    .map(|&v| if v == n { None } else { Some(v) })
                    .collect::<Vec<_>>()
            });
            CompositionTable::from_rows(rows.collect::<Vec<_>>()).unwrap()
        })
        .collect()
}

/// Whether some `(doms, cods)` over `m` objects satisfies the typing rules.
pub fn typings(t: &CompositionTable, m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = t.n();
    all_vectors(2 * n, m)
        .into_iter()
        .filter_map(|v| {
            let doms: Vec<usize> = (0..n).map(|a| v[2 * a]).collect();
            let cods: Vec<usize> = (0..n).map(|a| v[2 * a + 1]).collect();
            let ok = (0..n).all(|a| {
                (0..n).all(|b| match t.get(a, b) {
                    ArrowValue::NotComposable => cods[a] != doms[b],
                    ArrowValue::Arrow(c) => {
                        cods[a] == doms[b] && doms[a] == doms[c] && cods[b] == cods[c]
                    }
                })
            });
            ok.then_some((doms, cods))
        })
        .collect()
}

pub fn is_homomorphism(s: &CompositionTable, t: &CompositionTable, phi: &[usize], strict: bool) -> bool {
    let n = s.n();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let image = t.get(phi[a], phi[b]);
            match s.get(a, b) {
                ArrowValue::Arrow(c) => image == ArrowValue::Arrow(phi[c]),
                ArrowValue::NotComposable => !strict || image == ArrowValue::NotComposable,
            }
        })
    })
}

/// All homomorphisms by filtering every map `source -> target`.
pub fn brute_morphisms(s: &CompositionTable, t: &CompositionTable, strict: bool) -> Vec<Vec<usize>> {
    all_vectors(s.n(), t.n())
        .into_iter()
        .filter(|phi| is_homomorphism(s, t, phi, strict))
        .collect()
}

pub fn arc_closed(arcs: &BTreeSet<(u32, u32)>) -> bool {
    arcs.iter().all(|&(x, y)| {
        arcs.iter()
            .filter(|&&(y2, _)| y2 == y)
            .all(|&(_, z)| arcs.contains(&(x, z)))
    })
}

/// Lexicographically least sorted arc list over all relabelings of `0..m`.
pub fn lexmin_form(arcs: &BTreeSet<(u32, u32)>, m: usize) -> Vec<(u32, u32)> {
    permutations(m)
        .into_iter()
        .map(|p| {
            let mut v: Vec<(u32, u32)> = arcs
                .iter()
                .map(|&(d, c)| (p[d as usize] as u32, p[c as usize] as u32))
                .collect();
            v.sort();
            v
        })
        .min()
        .unwrap_or_default()
}

/// Number of node bijections `g -> h` preserving arcs both ways.
pub fn brute_isomorphism_count(g: &BTreeSet<(u32, u32)>, h: &BTreeSet<(u32, u32)>, m: usize) -> usize {
    if g.len() != h.len() {
        return 0;
    }
    permutations(m)
        .into_iter()
        .filter(|p| {
            g.iter()
                .all(|&(d, c)| h.contains(&(p[d as usize] as u32, p[c as usize] as u32)))
        })
        .count()
}

/// Closure of transformation arrows by composing every pair until stable.
pub fn naive_closure(gens: &[TransformationArrow]) -> BTreeSet<TransformationArrow> {
    let mut set: BTreeSet<TransformationArrow> = gens.iter().cloned().collect();
    loop {
        let mut next = set.clone();
        for a in &set {
            for b in &set {
                if a.cod == b.dom {
                    next.insert(TransformationArrow {
                        dom: a.dom,
                        cod: b.cod,
                        map: a.map.iter().map(|&s| b.map[s]).collect(),
                    });
                }
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// Functional-digraph classes on `d` points by lexicographic minimum over
/// all relabelings.
pub fn brute_functional_classes(d: usize) -> usize {
    let forms: BTreeSet<Vec<(u32, u32)>> = all_vectors(d, d)
        .into_iter()
        .map(|f| {
            let arcs = f.iter().enumerate().map(|(x, &y)| (x as u32, y as u32)).collect();
            lexmin_form(&arcs, d)
        })
        .collect();
    forms.len()
}

/// Every closed arc set on nodes exactly `0..k` with at most `max_arcs` arcs.
pub fn closed_graphs(k: usize, max_arcs: usize) -> Vec<BTreeSet<(u32, u32)>> {
    let pairs: Vec<(u32, u32)> = (0..k as u32).flat_map(|d| (0..k as u32).map(move |c| (d, c))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if mask.count_ones() as usize > max_arcs {
            continue;
        }
        let arcs: BTreeSet<(u32, u32)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let used: BTreeSet<u32> = arcs.iter().flat_map(|&(d, c)| [d, c]).collect();
        if used.len() == k && arc_closed(&arcs) {
            out.push(arcs);
        }
    }
    out
}

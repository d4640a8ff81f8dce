//! The three enumeration methods and functional digraphs.

use rayon::prelude::*;

use super::database::ClassDatabase;
use super::iso::Compact;
use super::{one_more_arrow, ArrowTypeGraph, Edge, Node};
use crate::error::{Error, Result};

/// Upper bound on the number of labeled candidates a brute-force
/// enumeration may visit.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn is_closed(c: &Compact) -> bool {
    (0..c.m).all(|x| {
        let mut reach = 0u64;
        let mut row = c.out[x];
        while row != 0 {
            let y = row.trailing_zeros() as usize;
            row &= row - 1;
            reach |= c.out[y];
        }
        reach & !c.out[x] == 0
    })
}

fn covered(c: &Compact) -> u64 {
    (0..c.m).fold(0, |acc, v| if c.out[v] | c.inn[v] != 0 { acc | 1 << v } else { acc })
}

/// Fails when the `(n, m)` cell is too large for [`enumerate_brute_force`].
pub fn brute_force_guard(n_arrows: usize, m_objects: usize) -> Result<()> {
    let m = m_objects;
    let size = binomial((m * m) as u128, n_arrows as u128);
    if size > BRUTE_FORCE_LIMIT || m > 64 {
        return Err(Error::GuardExceeded {
            what: "brute-force arrow-type enumeration",
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(())
}

/// All classes of transitively closed digraphs with exactly `n_arrows`
/// arcs on exactly `m_objects` nodes, none isolated, by testing every
/// `n_arrows`-subset of the `m_objects²` possible arcs.
///
/// The guard bounds the number of subsets, `C(m², n)`, by
/// [`BRUTE_FORCE_LIMIT`].
pub fn enumerate_brute_force(n_arrows: usize, m_objects: usize) -> Result<Vec<ArrowTypeGraph>> {
    brute_force_guard(n_arrows, m_objects)?;
    let m = m_objects;
    if n_arrows == 0 {
        return Ok(if m == 0 { vec![ArrowTypeGraph::empty()] } else { vec![] });
    }
    if m == 0 || m > 2 * n_arrows || n_arrows > m * m {
        return Ok(vec![]);
    }
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|d| (0..m).map(move |c| (d, c))).collect();
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };

    struct Walk<'a> {
        pairs: &'a [(usize, usize)],
        full: u64,
        graph: Compact,
        db: ClassDatabase,
    }

    impl Walk<'_> {
        fn go(&mut self, next: usize, remaining: usize) {
            if remaining == 0 {
                if covered(&self.graph) == self.full && is_closed(&self.graph) {
                    self.db.insert_compact(&self.graph);
                }
                return;
            }
            let uncovered = (self.full & !covered(&self.graph)).count_ones() as usize;
            if uncovered > 2 * remaining {
                return;
            }
            for i in next..=self.pairs.len() - remaining {
                let (d, c) = self.pairs[i];
                self.graph.add(d, c);
                self.go(i + 1, remaining - 1);
                self.graph.remove(d, c);
            }
        }
    }

    let shards: Vec<ClassDatabase> = (0..=pairs.len() - n_arrows)
        .into_par_iter()
        .map(|first| {
            let mut walk = Walk {
                pairs: &pairs,
                full,
                graph: Compact::with_nodes(m),
                db: ClassDatabase::new(),
            };
            let (d, c) = pairs[first];
            walk.graph.add(d, c);
            walk.go(first + 1, n_arrows - 1);
            walk.db
        })
        .collect();
    let mut merged = ClassDatabase::new();
    for shard in shards {
        for g in shard.classes(m, n_arrows) {
            merged.insert(&g)?;
        }
    }
    Ok(merged.classes(m, n_arrows))
}

fn require_complete(db: &ClassDatabase, arrows: usize) -> Result<()> {
    if db.complete_arrows() < arrows {
        return Err(Error::StaleDatabase {
            complete: db.complete_arrows(),
            requested: arrows,
        });
    }
    Ok(())
}

fn with_arc(g: &ArrowTypeGraph, arc: Edge) -> ArrowTypeGraph {
    ArrowTypeGraph::from_arcs(g.arcs().iter().copied().chain(std::iter::once(arc)))
}

/// Extends `db` with the classes of `target_arrows` arcs obtained from the
/// stored `target_arrows - 1` classes by adding one arc that keeps the set
/// transitively closed: between existing objects, touching one new object,
/// or as an isolated arc between two new objects. Returns the number of
/// new classes and marks the database complete at `target_arrows`.
///
/// A class whose every arc factors through two other arcs (the complete
/// graph on three objects, for one) has no closed predecessor and is not
/// reached; [`enumerate_by_closure`] covers those.
pub fn enumerate_incremental(db: &mut ClassDatabase, target_arrows: usize) -> Result<usize> {
    if target_arrows == 0 {
        return Ok(0);
    }
    require_complete(db, target_arrows - 1)?;
    let sources = db.classes_with_arcs(target_arrows - 1);
    let candidates: Vec<Vec<ArrowTypeGraph>> = sources
        .par_iter()
        .map(|g| {
            let m = g.m();
            let mut out: Vec<ArrowTypeGraph> = one_more_arrow(g.arcs(), m, false)
                .into_iter()
                .chain(one_more_arrow(g.arcs(), m + 1, true))
                .map(|arc| with_arc(g, arc))
                .collect();
            out.push(with_arc(g, (m as Node, m as Node + 1)));
            out
        })
        .collect();
    let mut added = 0;
    for g in candidates.iter().flatten() {
        if db.insert(g)? {
            added += 1;
        }
    }
    db.mark_complete(target_arrows, db.object_limit());
    Ok(added)
}

/// Bounds for [`enumerate_by_closure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureLimits {
    pub max_arrows: usize,
    pub max_objects: Option<usize>,
}

/// Fixpoint enumeration: for every stored class and every arc not yet
/// present (on existing objects, touching one fresh object, or joining two
/// fresh objects), inserts the transitive closure of the extended arc set
/// when it stays within `limits`. New classes are expanded in turn.
/// Returns the number of new classes and marks the database complete.
pub fn enumerate_by_closure(db: &mut ClassDatabase, limits: ClosureLimits) -> Result<usize> {
    let within = |g: &ArrowTypeGraph| {
        g.arc_count() <= limits.max_arrows && limits.max_objects.is_none_or(|k| g.m() <= k)
    };
    let mut frontier: Vec<ArrowTypeGraph> = db.all_classes().into_iter().filter(within).collect();
    let mut added = 0;
    while !frontier.is_empty() {
        let candidates: Vec<Vec<ArrowTypeGraph>> = frontier
            .par_iter()
            .map(|g| {
                let m = g.m() as Node;
                let mut out = Vec::new();
                for d in 0..m + 2 {
                    for c in 0..m + 2 {
                        let second_fresh = d == m + 1 || c == m + 1;
                        if second_fresh && (d, c) != (m, m + 1) {
                            continue;
                        }
                        if g.has_arc(d, c) {
                            continue;
                        }
                        let closed = super::transitive_closure(
                            g.arcs().iter().copied().chain(std::iter::once((d, c))),
                        );
                        if within(&closed) {
                            out.push(closed);
                        }
                    }
                }
                out
            })
            .collect();
        let mut next = Vec::new();
        for g in candidates.into_iter().flatten() {
            if db.insert(&g)? {
                added += 1;
                next.push(g);
            }
        }
        frontier = next;
    }
    db.mark_complete(limits.max_arrows, limits.max_objects);
    Ok(added)
}

/// The digraph of a transformation: arcs `(x, f(x))` on nodes `0..d`.
pub fn functional_digraph(map: &[usize]) -> Result<ArrowTypeGraph> {
    let d = map.len();
    if let Some(&s) = map.iter().find(|&&s| s >= d) {
        return Err(Error::StateOutOfRange { state: s, degree: d });
    }
    ArrowTypeGraph::with_objects(d, map.iter().enumerate().map(|(x, &y)| (x as Node, y as Node)))
}

/// Number of isomorphism classes of functional digraphs on `degree`
/// points, found by inserting all `degree^degree` transformations into a
/// fresh database.
pub fn functional_digraph_count(degree: usize) -> Result<usize> {
    let size = (degree as u128).pow(degree as u32);
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::GuardExceeded {
            what: "functional digraph enumeration",
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if degree == 0 {
        return Ok(1);
    }
    let mut db = ClassDatabase::new();
    let mut map = vec![0usize; degree];
    loop {
        db.insert(&functional_digraph(&map)?)?;
        // odometer step
        let mut i = 0;
        while i < degree && map[i] == degree - 1 {
            map[i] = 0;
            i += 1;
        }
        if i == degree {
            break;
        }
        map[i] += 1;
    }
    Ok(db.len() - 1)
}

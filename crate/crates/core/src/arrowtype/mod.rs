//! Arrow-type semigroupoids.
//!
//! Sending every arrow of a typed semigroupoid to its `(dom, cod)` pair
//! gives a quotient whose arrows are object pairs, composed by
//! `(x, y)(y, z) = (x, z)`. Such a structure is exactly a transitively
//! closed digraph without parallel edges. This module enumerates those
//! digraphs up to isomorphism by three independent methods and keeps the
//! class representatives in a [`ClassDatabase`].

mod database;
mod enumerate;
mod iso;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tables::CompositionTable;
use crate::typing::TypeStructure;

pub use database::{ClassDatabase, CountTable};
pub use enumerate::{
    brute_force_guard, enumerate_brute_force, enumerate_by_closure, enumerate_incremental, functional_digraph,
    functional_digraph_count, ClosureLimits, BRUTE_FORCE_LIMIT,
};
pub use iso::{
    are_isomorphic, canonical_form, digraph_isomorphisms, signature, GraphSignature, NodeMap,
};

pub type Node = u32;
pub type Edge = (Node, Node);

/// A digraph without parallel edges on an explicit node set.
///
/// Nodes carry arbitrary labels. Arrow-type semigroupoids are the
/// transitively closed ones without isolated nodes; the type itself also
/// holds non-closed digraphs (e.g. functional digraphs) so that the
/// canonical form and class database can be reused for them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowTypeGraph {
    nodes: BTreeSet<Node>,
    arcs: BTreeSet<Edge>,
}

impl ArrowTypeGraph {
    /// Graph whose nodes are exactly the endpoints of `arcs`.
    pub fn from_arcs<I: IntoIterator<Item = Edge>>(arcs: I) -> Self {
        let arcs: BTreeSet<Edge> = arcs.into_iter().collect();
        let nodes = arcs.iter().flat_map(|&(d, c)| [d, c]).collect();
        ArrowTypeGraph { nodes, arcs }
    }

    /// Graph on objects `0..m`. Arcs must stay within range; objects
    /// without arcs are kept (and reported by [`Self::isolated_nodes`]).
    pub fn with_objects<I: IntoIterator<Item = Edge>>(m: usize, arcs: I) -> Result<Self> {
        let arcs: BTreeSet<Edge> = arcs.into_iter().collect();
        if let Some(&(d, c)) = arcs.iter().find(|&&(d, c)| d as usize >= m || c as usize >= m) {
            return Err(Error::InvalidGraph(format!(
                "arc ({d},{c}) out of range for {m} objects"
            )));
        }
        Ok(ArrowTypeGraph {
            nodes: (0..m as Node).collect(),
            arcs,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Object count.
    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn nodes(&self) -> &BTreeSet<Node> {
        &self.nodes
    }

    pub fn arcs(&self) -> &BTreeSet<Edge> {
        &self.arcs
    }

    pub fn has_arc(&self, d: Node, c: Node) -> bool {
        self.arcs.contains(&(d, c))
    }

    pub fn isolated_nodes(&self) -> Vec<Node> {
        let used: BTreeSet<Node> = self.arcs.iter().flat_map(|&(d, c)| [d, c]).collect();
        self.nodes.difference(&used).copied().collect()
    }

    /// Whether the nodes are exactly `0..m`.
    pub fn is_compact(&self) -> bool {
        self.nodes.iter().enumerate().all(|(i, &v)| i as Node == v)
    }

    /// Order-preserving relabeling of the nodes to `0..m`, dropping
    /// isolated nodes.
    pub fn compact(&self) -> Self {
        let used: BTreeSet<Node> = self.arcs.iter().flat_map(|&(d, c)| [d, c]).collect();
        let index: BTreeMap<Node, Node> =
            used.iter().enumerate().map(|(i, &v)| (v, i as Node)).collect();
        ArrowTypeGraph {
            nodes: (0..used.len() as Node).collect(),
            arcs: self.arcs.iter().map(|(d, c)| (index[d], index[c])).collect(),
        }
    }

    /// `(out-degree, in-degree)` of every node.
    pub fn degrees(&self) -> BTreeMap<Node, (usize, usize)> {
        let mut deg: BTreeMap<Node, (usize, usize)> =
            self.nodes.iter().map(|&v| (v, (0, 0))).collect();
        for &(d, c) in &self.arcs {
            deg.entry(d).or_default().0 += 1;
            deg.entry(c).or_default().1 += 1;
        }
        deg
    }

    /// Relabels nodes through `map`, which must be injective on the nodes.
    pub fn relabel(&self, map: &BTreeMap<Node, Node>) -> Self {
        ArrowTypeGraph {
            nodes: self.nodes.iter().map(|v| map[v]).collect(),
            arcs: self.arcs.iter().map(|(d, c)| (map[d], map[c])).collect(),
        }
    }

    /// Arcs as a sorted list.
    pub fn arc_list(&self) -> Vec<Edge> {
        self.arcs.iter().copied().collect()
    }
}

impl fmt::Display for ArrowTypeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, c)) in self.arcs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({d},{c})")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    m: usize,
    arcs: Vec<[Node; 2]>,
}

/// JSON form `{"m": 2, "arcs": [[0,0],[0,1],[1,1]]}`. Non-compact node
/// labels are renumbered in order when serializing.
impl Serialize for ArrowTypeGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let index: BTreeMap<Node, Node> =
            self.nodes.iter().enumerate().map(|(i, &v)| (v, i as Node)).collect();
        GraphJson {
            m: self.nodes.len(),
            arcs: self.arcs.iter().map(|(d, c)| [index[d], index[c]]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArrowTypeGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        ArrowTypeGraph::with_objects(j.m, j.arcs.into_iter().map(|[a, b]| (a, b)))
            .map_err(serde::de::Error::custom)
    }
}

/// `(x, y)` and `(y, z)` present implies `(x, z)` present.
pub fn is_transitively_closed(graph: &ArrowTypeGraph) -> bool {
    is_closed_set(&graph.arcs)
}

fn is_closed_set(arcs: &BTreeSet<Edge>) -> bool {
    arcs.iter().all(|&(x, y)| {
        arcs.range((y, 0)..=(y, Node::MAX))
            .all(|&(_, z)| arcs.contains(&(x, z)))
    })
}

/// Smallest transitively closed superset of `arcs`.
pub fn transitive_closure<I: IntoIterator<Item = Edge>>(arcs: I) -> ArrowTypeGraph {
    let g = ArrowTypeGraph::from_arcs(arcs);
    let nodes: Vec<Node> = g.nodes.iter().copied().collect();
    let index: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = nodes.len();
    let mut reach = vec![vec![false; k]; k];
    for (d, c) in &g.arcs {
        reach[index[d]][index[c]] = true;
    }
    for via in 0..k {
        let through = reach[via].clone();
        for row in reach.iter_mut() {
            if row[via] {
                for (cell, &t) in row.iter_mut().zip(&through) {
                    *cell |= t;
                }
            }
        }
    }
    let mut arcs = BTreeSet::new();
    for x in 0..k {
        for z in 0..k {
            if reach[x][z] {
                arcs.insert((nodes[x], nodes[z]));
            }
        }
    }
    ArrowTypeGraph { nodes: g.nodes, arcs }
}

/// The arrow-type graph of a typed table: one arc `(dom a, cod a)` per
/// arrow, parallel arrows collapsed, objects renumbered compactly in order.
pub fn arrow_type_of(table: &CompositionTable, types: &TypeStructure) -> Result<ArrowTypeGraph> {
    if types.arrow_count() != table.n() {
        return Err(Error::DimensionMismatch {
            expected: table.n(),
            found: types.arrow_count(),
        });
    }
    let raw = ArrowTypeGraph::from_arcs(
        (0..table.n()).map(|a| (types.doms[a] as Node, types.cods[a] as Node)),
    );
    Ok(raw.compact())
}

/// Index of each arrow's arc in the (sorted) arc list of `graph`, when
/// `graph` was produced by [`arrow_type_of`] from the same inputs. This is
/// the quotient map onto the arrow-type semigroupoid.
pub fn arrow_type_map(types: &TypeStructure, graph: &ArrowTypeGraph) -> Vec<usize> {
    let used: BTreeSet<usize> = types.doms.iter().chain(&types.cods).copied().collect();
    let index: BTreeMap<usize, Node> =
        used.iter().enumerate().map(|(i, &v)| (v, i as Node)).collect();
    let arcs = graph.arc_list();
    (0..types.arrow_count())
        .map(|a| {
            let arc = (index[&types.doms[a]], index[&types.cods[a]]);
            arcs.binary_search(&arc).expect("arc of the arrow-type graph")
        })
        .collect()
}

/// Composition table of the arrow-type semigroupoid: arrows are the arcs
/// of `graph` in sorted order, `(x, y)(y, z) = (x, z)`.
pub fn arrow_type_table(graph: &ArrowTypeGraph) -> CompositionTable {
    let arcs = graph.arc_list();
    let rows = arcs.iter().map(|&(x, y)| {
        arcs.iter()
            .map(|&(y2, z)| {
                if y == y2 {
                    arcs.binary_search(&(x, z)).ok()
                } else {
                    None
                }
            })
            .collect::<Vec<_>>()
    });
    CompositionTable::from_rows(rows).expect("closed graph yields a valid table")
}

/// Every arc `(d, c)` over objects `0..m` that can be added to `arcs`
/// keeping the set transitively closed, in lexicographic order. With
/// `added_object`, object `m - 1` is new and the arc must touch it.
pub fn one_more_arrow(arcs: &BTreeSet<Edge>, m: usize, added_object: bool) -> Vec<Edge> {
    if m == 0 {
        return Vec::new();
    }
    let last = m as Node - 1;
    let mut found = Vec::new();
    for d in 0..m as Node {
        for c in 0..m as Node {
            if added_object && d != last && c != last {
                continue;
            }
            if arcs.contains(&(d, c)) {
                continue;
            }
            let has = |a: Edge| a == (d, c) || arcs.contains(&a);
            let extended = arcs.iter().copied().chain(std::iter::once((d, c)));
            // postcomposing the new arc, then precomposing it
            let ok = extended
                .clone()
                .all(|(dom, cod)| cod != d || has((dom, c)))
                && extended.clone().all(|(dom, cod)| c != dom || has((d, cod)));
            if ok {
                found.push((d, c));
            }
        }
    }
    found
}

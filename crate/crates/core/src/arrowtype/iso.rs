//! Digraph isomorphism, canonical forms and invariant signatures.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use super::{ArrowTypeGraph, Node};
use crate::error::{Error, Result};
use crate::search::{Constraint, Problem, VarId};

/// A bijection between the nodes of two graphs.
pub type NodeMap = BTreeMap<Node, Node>;

/// Bitset adjacency on nodes `0..m`, `m <= 64`.
#[derive(Clone, Debug)]
pub(crate) struct Compact {
    pub m: usize,
    pub out: Vec<u64>,
    pub inn: Vec<u64>,
}

impl Compact {
    /// Adjacency of `graph` with nodes indexed in sorted order, together
    /// with the node labels.
    pub fn new(graph: &ArrowTypeGraph) -> Result<(Compact, Vec<Node>)> {
        let nodes: Vec<Node> = graph.nodes().iter().copied().collect();
        if nodes.len() > 64 {
            return Err(Error::InvalidGraph(format!(
                "{} nodes exceed the 64-node limit",
                nodes.len()
            )));
        }
        let index: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut c = Compact {
            m: nodes.len(),
            out: vec![0; nodes.len()],
            inn: vec![0; nodes.len()],
        };
        for (d, t) in graph.arcs() {
            c.add(index[d], index[t]);
        }
        Ok((c, nodes))
    }

    pub fn with_nodes(m: usize) -> Self {
        Compact {
            m,
            out: vec![0; m],
            inn: vec![0; m],
        }
    }

    #[inline]
    pub fn add(&mut self, d: usize, c: usize) {
        self.out[d] |= 1 << c;
        self.inn[c] |= 1 << d;
    }

    #[inline]
    pub fn remove(&mut self, d: usize, c: usize) {
        self.out[d] &= !(1 << c);
        self.inn[c] &= !(1 << d);
    }

    #[inline]
    pub fn has(&self, d: usize, c: usize) -> bool {
        self.out[d] >> c & 1 == 1
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones() as usize).sum()
    }

    #[inline]
    fn key(&self, v: usize) -> (u32, u32, bool) {
        (self.out[v].count_ones(), self.inn[v].count_ones(), self.has(v, v))
    }

    pub fn to_graph(&self) -> ArrowTypeGraph {
        let mut arcs = BTreeSet::new();
        for d in 0..self.m {
            for c in 0..self.m {
                if self.has(d, c) {
                    arcs.insert((d as Node, c as Node));
                }
            }
        }
        ArrowTypeGraph {
            nodes: (0..self.m as Node).collect(),
            arcs,
        }
    }
}

/// Cheap isomorphism invariant used to bucket class representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphSignature {
    pub node_count: usize,
    pub arc_count: usize,
    /// Sorted `(out-degree, in-degree)` pairs.
    pub degree_profile: Vec<(u32, u32)>,
    /// For adjacency powers `2..=min(m, 4)`: sorted `(entry value, frequency)` pairs.
    pub path_profile: Vec<Vec<(u64, u32)>>,
}

pub fn signature(graph: &ArrowTypeGraph) -> GraphSignature {
    let (c, _) = Compact::new(graph).expect("signature of a graph with at most 64 nodes");
    compact_signature(&c)
}

pub(crate) fn compact_signature(c: &Compact) -> GraphSignature {
    let m = c.m;
    let mut degree_profile: Vec<(u32, u32)> =
        (0..m).map(|v| (c.out[v].count_ones(), c.inn[v].count_ones())).collect();
    degree_profile.sort_unstable();

    let adj: Vec<Vec<u64>> = (0..m)
        .map(|d| (0..m).map(|t| c.has(d, t) as u64).collect())
        .collect();
    let mut power = adj.clone();
    let mut path_profile = Vec::new();
    for _ in 2..=m.min(4) {
        let mut next = vec![vec![0u64; m]; m];
        for (i, row) in power.iter().enumerate() {
            for (k, &p) in row.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                for j in 0..m {
                    next[i][j] = next[i][j].saturating_add(p.saturating_mul(adj[k][j]));
                }
            }
        }
        power = next;
        let mut freq: BTreeMap<u64, u32> = BTreeMap::new();
        for &v in power.iter().flatten() {
            *freq.entry(v).or_default() += 1;
        }
        path_profile.push(freq.into_iter().collect());
    }
    GraphSignature {
        node_count: m,
        arc_count: c.arc_count(),
        degree_profile,
        path_profile,
    }
}

fn reject_isolated(graph: &ArrowTypeGraph) -> Result<()> {
    match graph.isolated_nodes().first() {
        Some(&v) => Err(Error::IsolatedNode(v)),
        None => Ok(()),
    }
}

/// All isomorphisms `g -> h` as node maps keyed by node label.
///
/// Candidate images of a node are restricted to nodes of `h` with the same
/// `(out, in)` degree. Isolated nodes are rejected: with them the search
/// would silently match them in every possible way.
pub fn digraph_isomorphisms(
    g: &ArrowTypeGraph,
    h: &ArrowTypeGraph,
) -> Result<Box<dyn Iterator<Item = NodeMap>>> {
    reject_isolated(g)?;
    reject_isolated(h)?;
    let gnodes: Vec<Node> = g.nodes().iter().copied().collect();
    let hnodes: Vec<Node> = h.nodes().iter().copied().collect();
    if gnodes.len() != hnodes.len() || g.arc_count() != h.arc_count() {
        return Ok(Box::new(std::iter::empty()));
    }
    let gdeg = g.degrees();
    let mut by_degree: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, v) in hnodes.iter().enumerate() {
        by_degree.entry(h.degrees()[v]).or_default().push(i);
    }
    let (hc, _) = Compact::new(h)?;
    let hc = std::sync::Arc::new(hc);

    let mut problem: Problem<usize> = Problem::new();
    let vars: BTreeMap<Node, VarId> = gnodes
        .iter()
        .map(|v| {
            let candidates = by_degree.get(&gdeg[v]).cloned().unwrap_or_default();
            (*v, problem.add_variable(candidates))
        })
        .collect();
    let all: Vec<VarId> = vars.values().copied().collect();
    for (i, &a) in all.iter().enumerate() {
        for &b in &all[i + 1..] {
            problem.add_constraint(Constraint::not_equal(a, b));
        }
    }
    for (x, y) in g.arcs() {
        let (vx, vy) = (vars[x], vars[y]);
        let hc = std::sync::Arc::clone(&hc);
        problem.add_constraint(Constraint::new(vec![vx, vy], move |p| {
            match (p.get(vx), p.get(vy)) {
                (Some(a), Some(b)) => hc.has(a, b),
                _ => true,
            }
        }));
    }
    let solutions = problem.into_solutions()?;
    Ok(Box::new(solutions.map(move |s| {
        gnodes
            .iter()
            .zip(s.values())
            .map(|(&v, &i)| (v, hnodes[i]))
            .collect()
    })))
}

/// Whether two graphs are isomorphic (isolated nodes allowed).
pub fn are_isomorphic(g: &ArrowTypeGraph, h: &ArrowTypeGraph) -> bool {
    match (Compact::new(g), Compact::new(h)) {
        (Ok((a, _)), Ok((b, _))) => compact_isomorphic(&a, &b),
        _ => false,
    }
}

/// Backtracking isomorphism test on bitset graphs, checking adjacency in
/// both directions against every already mapped node.
pub(crate) fn compact_isomorphic(a: &Compact, b: &Compact) -> bool {
    if a.m != b.m || a.arc_count() != b.arc_count() {
        return false;
    }
    let m = a.m;
    let mut ka: Vec<_> = (0..m).map(|v| a.key(v)).collect();
    let mut kb: Vec<_> = (0..m).map(|v| b.key(v)).collect();
    let keys_a = ka.clone();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return false;
    }
    let candidates: Vec<Vec<usize>> = (0..m)
        .map(|v| (0..m).filter(|&w| b.key(w) == keys_a[v]).collect())
        .collect();
    // most constrained nodes first
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&v| candidates[v].len());
    let mut image = vec![usize::MAX; m];
    let mut used = 0u64;
    fn extend(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        a: &Compact,
        b: &Compact,
        image: &mut [usize],
        used: &mut u64,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for &w in &candidates[v] {
            if *used >> w & 1 == 1 {
                continue;
            }
            let consistent = order[..depth].iter().all(|&u| {
                let iu = image[u];
                a.has(u, v) == b.has(iu, w) && a.has(v, u) == b.has(w, iu)
            }) && a.has(v, v) == b.has(w, w);
            if !consistent {
                continue;
            }
            image[v] = w;
            *used |= 1 << w;
            if extend(depth + 1, order, candidates, a, b, image, used) {
                return true;
            }
            *used &= !(1 << w);
        }
        false
    }
    extend(0, &order, &candidates, a, b, &mut image, &mut used)
}

/// Isomorphism-invariant ordered partition of the nodes: start from
/// `(out, loop, in)` classes and refine by the multisets of neighbour
/// classes until stable. Cells come out in invariant order.
fn refined_cells(c: &Compact) -> Vec<Vec<usize>> {
    let m = c.m;
    let initial: Vec<_> = (0..m)
        .map(|v| {
            let (o, i, l) = c.key(v);
            (Reverse(o), Reverse(l), i)
        })
        .collect();
    let mut colour = ranks(&initial);
    let mut classes = count_distinct(&colour);
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..m)
            .map(|v| {
                let mut outs: Vec<usize> = (0..m).filter(|&w| c.has(v, w)).map(|w| colour[w]).collect();
                let mut ins: Vec<usize> = (0..m).filter(|&w| c.has(w, v)).map(|w| colour[w]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (colour[v], outs, ins)
            })
            .collect();
        let next = ranks(&keys);
        let next_classes = count_distinct(&next);
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let mut cells = vec![Vec::new(); classes];
    for v in 0..m {
        cells[colour[v]].push(v);
    }
    cells
}

fn ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn count_distinct(colour: &[usize]) -> usize {
    colour.iter().copied().max().map_or(0, |x| x + 1)
}

/// Canonical representative of the isomorphism class of `graph`.
///
/// Isolated nodes are dropped. Nodes are first split into refined degree
/// classes, each class receiving a fixed block of labels; the result is
/// the lexicographically least sorted arc list over all labelings that
/// permute nodes within their class. Isomorphic graphs get equal forms.
pub fn canonical_form(graph: &ArrowTypeGraph) -> ArrowTypeGraph {
    let (c, _) = Compact::new(&graph.compact()).expect("canonical form of at most 64 nodes");
    compact_canonical(&c).to_graph()
}

pub(crate) fn compact_canonical(c: &Compact) -> Compact {
    let m = c.m;
    let cells = refined_cells(c);
    let arcs: Vec<(usize, usize)> = (0..m)
        .flat_map(|d| (0..m).map(move |t| (d, t)))
        .filter(|&(d, t)| c.has(d, t))
        .collect();

    struct Search<'a> {
        m: usize,
        cells: &'a [Vec<usize>],
        offsets: Vec<usize>,
        arcs: &'a [(usize, usize)],
        label: Vec<usize>,
        best: Option<Vec<u32>>,
        best_label: Vec<usize>,
        scratch: Vec<u32>,
    }

    impl Search<'_> {
        fn leaf(&mut self) {
            self.scratch.clear();
            let m = self.m as u32;
            for &(d, t) in self.arcs {
                self.scratch.push(self.label[d] as u32 * m + self.label[t] as u32);
            }
            self.scratch.sort_unstable();
            if self.best.as_ref().is_none_or(|b| self.scratch < *b) {
                self.best = Some(self.scratch.clone());
                self.best_label.clone_from(&self.label);
            }
        }

        fn cell(&mut self, ci: usize) {
            if ci == self.cells.len() {
                self.leaf();
                return;
            }
            let mut members = self.cells[ci].clone();
            self.permute(ci, &mut members, 0);
        }

        // labels offsets[ci] + k .. go to members[k..] in every order
        fn permute(&mut self, ci: usize, members: &mut Vec<usize>, k: usize) {
            if k == members.len() {
                self.cell(ci + 1);
                return;
            }
            for i in k..members.len() {
                members.swap(k, i);
                self.label[members[k]] = self.offsets[ci] + k;
                self.permute(ci, members, k + 1);
                members.swap(k, i);
            }
        }
    }

    let mut offsets = Vec::with_capacity(cells.len());
    let mut acc = 0;
    for cell in &cells {
        offsets.push(acc);
        acc += cell.len();
    }
    let mut search = Search {
        m,
        cells: &cells,
        offsets,
        arcs: &arcs,
        label: vec![0; m],
        best: None,
        best_label: vec![0; m],
        scratch: Vec::with_capacity(arcs.len()),
    };
    search.cell(0);
    let mut out = Compact::with_nodes(m);
    for &(d, t) in &arcs {
        out.add(search.best_label[d], search.best_label[t]);
    }
    out
}

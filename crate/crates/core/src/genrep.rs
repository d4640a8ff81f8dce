//! Transformation semigroupoids: generation from typed generators, full
//! transformation semigroupoids over a digraph, and embeddings of abstract
//! tables into them.
//!
//! Types are numbered `0..k` and carry a degree (state count). An arrow
//! `a: x -> y` is a total map from the states of `x` to those of `y`.
//! Composition reads left to right: in `ab`, `a` acts first.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arrowtype::{
    arrow_type_of, canonical_form, enumerate_by_closure, is_transitively_closed, ArrowTypeGraph,
    ClassDatabase, ClosureLimits,
};
use crate::error::{Error, Result};
use crate::morphisms::{morphism_problem, solutions_to_maps, ArrowMap, Distinctness};
use crate::tables::CompositionTable;
use crate::typing::{infer_types, is_semigroupoid, minimal_objects};

/// Largest number of arrows a generated or full semigroupoid may have;
/// its table has the square of this many cells.
pub const ARROW_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TransformationArrow {
    pub dom: usize,
    pub cod: usize,
    pub map: Vec<usize>,
}

impl TransformationArrow {
    /// A validated arrow over the given type degrees.
    pub fn new(dom: usize, cod: usize, map: Vec<usize>, degrees: &[usize]) -> Result<Self> {
        let a = TransformationArrow { dom, cod, map };
        a.validate(degrees)?;
        Ok(a)
    }

    pub fn validate(&self, degrees: &[usize]) -> Result<()> {
        for t in [self.dom, self.cod] {
            if t >= degrees.len() {
                return Err(Error::ObjectOutOfRange {
                    object: t,
                    count: degrees.len(),
                });
            }
        }
        if self.map.len() != degrees[self.dom] {
            return Err(Error::DimensionMismatch {
                expected: degrees[self.dom],
                found: self.map.len(),
            });
        }
        match self.map.iter().find(|&&s| s >= degrees[self.cod]) {
            Some(&s) => Err(Error::StateOutOfRange {
                state: s,
                degree: degrees[self.cod],
            }),
            None => Ok(()),
        }
    }
}

/// `ab` (first `a`, then `b`), or `None` when `a.cod != b.dom`.
pub fn compose_arrows(
    a: &TransformationArrow,
    b: &TransformationArrow,
) -> Result<Option<TransformationArrow>> {
    if a.cod != b.dom {
        return Ok(None);
    }
    let map = a
        .map
        .iter()
        .map(|&s| {
            b.map.get(s).copied().ok_or(Error::StateOutOfRange {
                state: s,
                degree: b.map.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(TransformationArrow {
        dom: a.dom,
        cod: b.cod,
        map,
    }))
}

/// A composition-closed set of transformation arrows with its table.
#[derive(Clone, Debug)]
pub struct ConcreteSemigroupoid {
    degrees: Vec<usize>,
    arrows: Vec<TransformationArrow>,
    index: HashMap<TransformationArrow, usize>,
    table: CompositionTable,
}

impl ConcreteSemigroupoid {
    /// Wraps a composition-closed arrow list, deriving the table.
    fn from_closed(degrees: Vec<usize>, arrows: Vec<TransformationArrow>) -> Self {
        let index: HashMap<TransformationArrow, usize> =
            arrows.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let rows = arrows.iter().map(|a| {
            arrows
                .iter()
                .map(|b| {
                    compose_arrows(a, b)
                        .expect("validated arrows")
                        .map(|ab| index[&ab])
                })
                .collect::<Vec<_>>()
        });
        let table = CompositionTable::from_rows(rows).expect("closed arrow set");
        ConcreteSemigroupoid {
            degrees,
            arrows,
            index,
            table,
        }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn arrows(&self) -> &[TransformationArrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &TransformationArrow {
        &self.arrows[i]
    }

    pub fn index_of(&self, a: &TransformationArrow) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn table(&self) -> &CompositionTable {
        &self.table
    }

    /// Indices of the arrows `x -> x`, in order.
    pub fn endo_arrows(&self, x: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.arrows[i].dom == x && self.arrows[i].cod == x)
            .collect()
    }
}

fn check_size(n: usize, what: &'static str) -> Result<()> {
    if n > ARROW_LIMIT {
        return Err(Error::GuardExceeded {
            what,
            size: n as u128,
            limit: ARROW_LIMIT as u128,
        });
    }
    Ok(())
}

/// Closes `generators` under composition.
///
/// Starting from the generators, every new arrow is precomposed with the
/// generators ending at its domain and postcomposed with those starting at
/// its codomain, until nothing new appears. Arrows are numbered in order of
/// discovery, generators first.
pub fn generate(generators: &[TransformationArrow], degrees: &[usize]) -> Result<ConcreteSemigroupoid> {
    for g in generators {
        g.validate(degrees)?;
    }
    let mut by_dom: Vec<Vec<&TransformationArrow>> = vec![Vec::new(); degrees.len()];
    let mut by_cod: Vec<Vec<&TransformationArrow>> = vec![Vec::new(); degrees.len()];
    for g in generators {
        by_dom[g.dom].push(g);
        by_cod[g.cod].push(g);
    }
    let mut arrows: Vec<TransformationArrow> = Vec::new();
    let mut seen: BTreeSet<TransformationArrow> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for g in generators {
        if seen.insert(g.clone()) {
            arrows.push(g.clone());
            queue.push_back(g.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        let post = by_dom[x.cod].iter().map(|g| compose_arrows(&x, g));
        let pre = by_cod[x.dom].iter().map(|g| compose_arrows(g, &x));
        for y in post.chain(pre) {
            let y = y?.expect("lookup tables match types");
            if seen.insert(y.clone()) {
                arrows.push(y.clone());
                queue.push_back(y);
                check_size(arrows.len(), "generated semigroupoid")?;
            }
        }
    }
    Ok(ConcreteSemigroupoid::from_closed(degrees.to_vec(), arrows))
}

/// The full transformation semigroupoid over `graph`: every total map
/// along every arc, arcs in sorted order and maps in lexicographic order.
#[derive(Clone, Debug)]
pub struct FullTransformationSgpoid {
    graph: ArrowTypeGraph,
    inner: ConcreteSemigroupoid,
}

impl FullTransformationSgpoid {
    pub fn graph(&self) -> &ArrowTypeGraph {
        &self.graph
    }

    pub fn as_concrete(&self) -> &ConcreteSemigroupoid {
        &self.inner
    }

    pub fn degrees(&self) -> &[usize] {
        self.inner.degrees()
    }

    pub fn arrows(&self) -> &[TransformationArrow] {
        self.inner.arrows()
    }

    pub fn table(&self) -> &CompositionTable {
        self.inner.table()
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }
}

/// Number of arrows of the full transformation semigroupoid, saturating.
pub fn full_arrow_count(degrees: &[usize], graph: &ArrowTypeGraph) -> u128 {
    graph
        .arcs()
        .iter()
        .map(|&(x, y)| {
            let (dx, dy) = (degrees[x as usize] as u128, degrees[y as usize] as u128);
            dy.checked_pow(dx as u32).unwrap_or(u128::MAX)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

pub fn full_transformation_sgpoid(
    degrees: &[usize],
    graph: &ArrowTypeGraph,
) -> Result<FullTransformationSgpoid> {
    if let Some(object) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::ZeroDegree { object });
    }
    if let Some(&v) = graph.nodes().iter().find(|&&v| v as usize >= degrees.len()) {
        return Err(Error::ObjectOutOfRange {
            object: v as usize,
            count: degrees.len(),
        });
    }
    if !is_transitively_closed(graph) {
        return Err(Error::InvalidGraph(format!("{graph} is not transitively closed")));
    }
    let size = full_arrow_count(degrees, graph);
    if size > ARROW_LIMIT as u128 {
        return Err(Error::GuardExceeded {
            what: "full transformation semigroupoid",
            size,
            limit: ARROW_LIMIT as u128,
        });
    }
    let mut arrows = Vec::with_capacity(size as usize);
    for &(x, y) in graph.arcs() {
        let (dx, dy) = (degrees[x as usize], degrees[y as usize]);
        let mut map = vec![0usize; dx];
        loop {
            arrows.push(TransformationArrow {
                dom: x as usize,
                cod: y as usize,
                map: map.clone(),
            });
            // odometer, last position fastest
            let mut i = dx;
            while i > 0 && map[i - 1] == dy - 1 {
                map[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
            map[i - 1] += 1;
        }
    }
    Ok(FullTransformationSgpoid {
        graph: graph.clone(),
        inner: ConcreteSemigroupoid::from_closed(degrees.to_vec(), arrows),
    })
}

/// Injective homomorphisms of `source` into the target's table, sorted by
/// image vector.
pub fn embed(
    source: &CompositionTable,
    target: &FullTransformationSgpoid,
    strict: bool,
) -> impl Iterator<Item = ArrowMap> {
    let problem = morphism_problem(source, target.table(), Distinctness::Injective, strict);
    solutions_to_maps(problem, target.len())
}

/// The semigroupoid generated by the images of `map` inside `target`.
pub fn image_closure(target: &FullTransformationSgpoid, map: &ArrowMap) -> Result<ConcreteSemigroupoid> {
    let gens: Vec<TransformationArrow> =
        map.images.iter().map(|&i| target.arrows()[i].clone()).collect();
    generate(&gens, target.degrees())
}

/// Search settings for [`minimal_representation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepresentOptions {
    pub strict: bool,
    /// Also try every transitively closed graph with at most as many
    /// objects as the largest candidate arrow-type graph.
    pub widen: bool,
}

impl Default for RepresentOptions {
    fn default() -> Self {
        RepresentOptions {
            strict: true,
            widen: false,
        }
    }
}

/// A transformation representation of an abstract table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub graph: ArrowTypeGraph,
    pub degrees: Vec<usize>,
    /// Image of each source arrow, in source order.
    pub arrows: Vec<TransformationArrow>,
    /// Witness into the full transformation semigroupoid.
    pub map: ArrowMap,
}

/// Candidate target graphs: canonical arrow-type graphs of all type
/// structures from the minimal object count up to `2n` objects.
pub fn candidate_graphs(table: &CompositionTable, widen: bool) -> Result<Vec<ArrowTypeGraph>> {
    let n = table.n();
    let Some(m0) = minimal_objects(table) else {
        return Err(Error::NotSemigroupoid);
    };
    let mut graphs: BTreeSet<ArrowTypeGraph> = BTreeSet::new();
    for m in m0.max(1)..=(2 * n).max(1) {
        for ts in infer_types(table, m) {
            graphs.insert(canonical_form(&arrow_type_of(table, &ts)?));
        }
    }
    if widen {
        let k = graphs.iter().map(ArrowTypeGraph::m).max().unwrap_or(1);
        let mut db = ClassDatabase::new();
        enumerate_by_closure(
            &mut db,
            ClosureLimits {
                max_arrows: k * k,
                max_objects: Some(k),
            },
        )?;
        graphs.extend(db.all_classes().into_iter().filter(|g| g.arc_count() > 0));
    }
    Ok(graphs.into_iter().collect())
}

/// Every degree vector of length `m` with entries at least 1 summing to
/// `total`, in lexicographic order.
pub fn degree_vectors(m: usize, total: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let rest = m - prefix.len() - 1;
        if total < rest + 1 {
            return;
        }
        for d in 1..=total - rest {
            prefix.push(d);
            go(m, total - d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        go(m, total, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

/// The first embedding over targets ordered by total state count, then arc
/// count, then degree vector, then graph.
///
/// Totals are scanned up to `n + m` for the largest candidate object count
/// `m`: the right regular representation (states of an object are the
/// arrows into it plus one extra point) always embeds strictly there.
pub fn minimal_representation(
    table: &CompositionTable,
    options: RepresentOptions,
) -> Result<Representation> {
    if !is_semigroupoid(table) {
        return Err(Error::NotSemigroupoid);
    }
    let graphs = candidate_graphs(table, options.widen)?;
    let max_m = graphs.iter().map(ArrowTypeGraph::m).max().unwrap_or(1);
    let bound = table.n() + max_m;
    for total in 1..=bound {
        let mut targets: Vec<(usize, Vec<usize>, &ArrowTypeGraph)> = Vec::new();
        for g in &graphs {
            for d in degree_vectors(g.m(), total) {
                targets.push((g.arc_count(), d, g));
            }
        }
        targets.sort();
        for (_, degrees, graph) in targets {
            if full_arrow_count(&degrees, graph) < table.n() as u128 {
                continue;
            }
            let target = full_transformation_sgpoid(&degrees, graph)?;
            if let Some(map) = embed(table, &target, options.strict).next() {
                let arrows = map.images.iter().map(|&i| target.arrows()[i].clone()).collect();
                return Ok(Representation {
                    graph: graph.clone(),
                    degrees,
                    arrows,
                    map,
                });
            }
        }
    }
    Err(Error::NoRepresentation(bound))
}

//! Homomorphisms between semigroupoids given as composition tables.
//!
//! A map `phi` on arrows is a homomorphism when `phi(ab) = phi(a) phi(b)`
//! for every composable pair of the source. It is *strict* when, in
//! addition, non-composable pairs go to non-composable pairs. Only strict
//! maps respect type structure; a bijective strict homomorphism is an
//! isomorphism, a bijective permissive one need not be.
//!
//! The search substitutes a variable for every source arrow into the
//! source's composition relation and asks the target table to satisfy each
//! resulting equation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{Constraint, Problem, VarId};
use crate::tables::{ArrowValue, CompositionTable};
use crate::typing::TypeStructure;

/// Inverse of the composition function: each result value (including
/// `NotComposable`) with the ordered pairs producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionRelation {
    fibers: BTreeMap<ArrowValue, Vec<(usize, usize)>>,
}

impl CompositionRelation {
    /// Pairs composing to `value`, in row-major order.
    pub fn fiber(&self, value: ArrowValue) -> &[(usize, usize)] {
        self.fibers.get(&value).map_or(&[], Vec::as_slice)
    }

    /// Non-empty fibers in value order, `NotComposable` last.
    pub fn fibers(&self) -> impl Iterator<Item = (ArrowValue, &[(usize, usize)])> {
        self.fibers.iter().map(|(k, v)| (*k, v.as_slice()))
    }
}

pub fn composition_relation(table: &CompositionTable) -> CompositionRelation {
    let n = table.n();
    let mut fibers: BTreeMap<ArrowValue, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            fibers.entry(table.get(a, b)).or_default().push((a, b));
        }
    }
    CompositionRelation { fibers }
}

/// A total map from source arrows to target arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowMap {
    pub source_n: usize,
    pub target_n: usize,
    pub images: Vec<usize>,
}

impl ArrowMap {
    pub fn new(target_n: usize, images: Vec<usize>) -> Result<Self> {
        if let Some(&i) = images.iter().find(|&&i| i >= target_n) {
            return Err(Error::ArrowOutOfRange { index: i, n: target_n });
        }
        Ok(ArrowMap {
            source_n: images.len(),
            target_n,
            images,
        })
    }

    pub fn identity(n: usize) -> Self {
        ArrowMap {
            source_n: n,
            target_n: n,
            images: (0..n).collect(),
        }
    }

    #[inline]
    pub fn image(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_n];
        self.images.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source_n == self.target_n && self.is_injective()
    }

    /// Inverse of a bijective map.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut images = vec![0; self.target_n];
        for (a, &i) in self.images.iter().enumerate() {
            images[i] = a;
        }
        Some(ArrowMap {
            source_n: self.target_n,
            target_n: self.source_n,
            images,
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ArrowMap) -> Result<Self> {
        if self.target_n != next.source_n {
            return Err(Error::DimensionMismatch {
                expected: next.source_n,
                found: self.target_n,
            });
        }
        Ok(ArrowMap {
            source_n: self.source_n,
            target_n: next.target_n,
            images: self.images.iter().map(|&i| next.images[i]).collect(),
        })
    }
}

/// Which pairs must be distinct in a morphism search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distinctness {
    Any,
    /// Distinct images and equal arrow counts.
    Bijective,
    /// Distinct images; the target may be larger.
    Injective,
}

/// Builds the homomorphism search problem `source -> target`.
///
/// Variable `i` is the image of source arrow `i`, ranging over all target
/// arrows in index order, so solutions come out sorted by image vector.
pub fn morphism_problem(
    source: &CompositionTable,
    target: &CompositionTable,
    distinct: Distinctness,
    strict: bool,
) -> Problem<usize> {
    let n = source.n();
    let mut problem = Problem::new();
    let unsatisfiable = distinct == Distinctness::Bijective && n != target.n()
        || distinct != Distinctness::Any && n > target.n();
    let domain: Vec<usize> = if unsatisfiable {
        Vec::new()
    } else {
        (0..target.n()).collect()
    };
    let vars: Vec<VarId> = (0..n).map(|_| problem.add_variable(domain.clone())).collect();
    let target = Arc::new(target.clone());

    for (value, pairs) in composition_relation(source).fibers() {
        match value {
            ArrowValue::Arrow(d) => {
                for &(a, b) in pairs {
                    let (va, vb, vd) = (vars[a], vars[b], vars[d]);
                    let t = Arc::clone(&target);
                    problem.add_constraint(Constraint::new(vec![va, vb, vd], move |p| {
                        match (p.get(va), p.get(vb), p.get(vd)) {
                            (Some(x), Some(y), Some(z)) => t.get(x, y) == ArrowValue::Arrow(z),
                            (Some(x), Some(y), None) => t.get(x, y).is_composable(),
                            _ => true,
                        }
                    }));
                }
            }
            ArrowValue::NotComposable if strict => {
                for &(a, b) in pairs {
                    let (va, vb) = (vars[a], vars[b]);
                    let t = Arc::clone(&target);
                    problem.add_constraint(Constraint::new(vec![va, vb], move |p| {
                        match (p.get(va), p.get(vb)) {
                            (Some(x), Some(y)) => !t.get(x, y).is_composable(),
                            _ => true,
                        }
                    }));
                }
            }
            ArrowValue::NotComposable => {}
        }
    }
    if distinct != Distinctness::Any {
        for i in 0..n {
            for j in i + 1..n {
                problem.add_constraint(Constraint::not_equal(vars[i], vars[j]));
            }
        }
    }
    problem
}

pub(crate) fn solutions_to_maps(
    problem: Problem<usize>,
    target_n: usize,
) -> impl Iterator<Item = ArrowMap> {
    problem
        .into_solutions()
        .expect("morphism problem only watches its own variables")
        .map(move |s| {
            let images = s.into_values();
            ArrowMap {
                source_n: images.len(),
                target_n,
                images,
            }
        })
}

/// All homomorphisms `source -> target`, sorted by image vector.
///
/// The target is not required to be a semigroupoid.
pub fn find_morphisms(
    source: &CompositionTable,
    target: &CompositionTable,
    bijective: bool,
    strict: bool,
) -> impl Iterator<Item = ArrowMap> {
    let distinct = if bijective {
        Distinctness::Bijective
    } else {
        Distinctness::Any
    };
    solutions_to_maps(morphism_problem(source, target, distinct, strict), target.n())
}

/// Collects a morphism search on `jobs` threads by sharding the image of
/// arrow 0. The result is in the same order as the sequential search.
pub fn collect_morphisms_parallel(
    source: &CompositionTable,
    target: &CompositionTable,
    distinct: Distinctness,
    strict: bool,
    jobs: usize,
) -> Vec<ArrowMap> {
    let problem = morphism_problem(source, target, distinct, strict);
    if source.n() == 0 || jobs <= 1 {
        return solutions_to_maps(problem, target.n()).collect();
    }
    let first = VarId(0);
    let shards: Vec<usize> = problem.domain(first).to_vec();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        shards
            .par_iter()
            .map(|&v| solutions_to_maps(problem.with_domain(first, vec![v]), target.n()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    })
}

/// Whether `map` is a (strict) homomorphism `source -> target`.
pub fn check_morphism(
    source: &CompositionTable,
    target: &CompositionTable,
    map: &ArrowMap,
    strict: bool,
) -> Result<bool> {
    if map.source_n != source.n() || map.images.len() != source.n() {
        return Err(Error::DimensionMismatch {
            expected: source.n(),
            found: map.images.len(),
        });
    }
    if map.target_n != target.n() {
        return Err(Error::DimensionMismatch {
            expected: target.n(),
            found: map.target_n,
        });
    }
    if let Some(&i) = map.images.iter().find(|&&i| i >= target.n()) {
        return Err(Error::ArrowOutOfRange { index: i, n: target.n() });
    }
    let n = source.n();
    Ok((0..n).all(|a| {
        (0..n).all(|b| {
            let image = target.get(map.image(a), map.image(b));
            match source.get(a, b) {
                ArrowValue::Arrow(d) => image == ArrowValue::Arrow(map.image(d)),
                ArrowValue::NotComposable => !strict || !image.is_composable(),
            }
        })
    }))
}

/// Object map induced by an arrow map: `dom(a)` goes to `dom(phi a)` and
/// `cod(a)` to `cod(phi a)`. `None` if some object would need two images.
pub fn induced_type_map(
    source: &CompositionTable,
    target: &CompositionTable,
    map: &ArrowMap,
    source_types: &TypeStructure,
    target_types: &TypeStructure,
) -> Option<BTreeMap<usize, usize>> {
    if map.images.len() != source.n()
        || source_types.arrow_count() != source.n()
        || target_types.arrow_count() != target.n()
    {
        return None;
    }
    let mut objects = BTreeMap::new();
    for a in 0..source.n() {
        let (d, c) = source_types.arrow_type(a);
        let (td, tc) = target_types.arrow_type(*map.images.get(a)?);
        for (x, y) in [(d, td), (c, tc)] {
            if *objects.entry(x).or_insert(y) != y {
                return None;
            }
        }
    }
    Some(objects)
}

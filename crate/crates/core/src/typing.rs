//! Type structure inference for composition tables.
//!
//! A type structure assigns a domain and a codomain object to every arrow.
//! It is consistent with a table when
//!
//! 1. non-composable pairs `(a, b)` have `cod(a) != dom(b)`,
//! 2. composable pairs have `cod(a) == dom(b)`,
//! 3. `ab = c` implies `dom(a) == dom(c)` and `cod(b) == cod(c)`.
//!
//! A table is a semigroupoid when it is associative and admits at least one
//! consistent type structure. Neither property implies the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{Constraint, Problem, VarId};
use crate::tables::{ArrowValue, CompositionTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeStructure {
    pub m: usize,
    pub doms: Vec<usize>,
    pub cods: Vec<usize>,
}

impl TypeStructure {
    pub fn new(m: usize, doms: Vec<usize>, cods: Vec<usize>) -> Result<Self> {
        if doms.len() != cods.len() {
            return Err(Error::DimensionMismatch {
                expected: doms.len(),
                found: cods.len(),
            });
        }
        if let Some(&o) = doms.iter().chain(&cods).find(|&&o| o >= m) {
            return Err(Error::ObjectOutOfRange { object: o, count: m });
        }
        Ok(TypeStructure { m, doms, cods })
    }

    pub fn arrow_count(&self) -> usize {
        self.doms.len()
    }

    /// `(dom, cod)` of arrow `a`.
    pub fn arrow_type(&self, a: usize) -> (usize, usize) {
        (self.doms[a], self.cods[a])
    }

    /// Checks the three consistency constraints against `table`.
    pub fn is_consistent_with(&self, table: &CompositionTable) -> bool {
        let n = table.n();
        if self.doms.len() != n || self.cods.len() != n {
            return false;
        }
        if self.doms.iter().chain(&self.cods).any(|&o| o >= self.m) {
            return false;
        }
        (0..n).all(|a| {
            (0..n).all(|b| match table.get(a, b) {
                ArrowValue::NotComposable => self.cods[a] != self.doms[b],
                ArrowValue::Arrow(c) => {
                    self.cods[a] == self.doms[b]
                        && self.doms[a] == self.doms[c]
                        && self.cods[b] == self.cods[c]
                }
            })
        })
    }

    /// Applies an object permutation.
    pub fn permute_objects(&self, perm: &[usize]) -> Self {
        TypeStructure {
            m: self.m,
            doms: self.doms.iter().map(|&o| perm[o]).collect(),
            cods: self.cods.iter().map(|&o| perm[o]).collect(),
        }
    }
}

/// The type inference search problem.
///
/// Variables are `dom(0), cod(0), dom(1), cod(1), ...` over objects
/// `0..m`. With `break_symmetry`, `dom(0)` is pinned to object 0.
pub fn typing_problem(table: &CompositionTable, m: usize, break_symmetry: bool) -> Problem<usize> {
    let n = table.n();
    let mut problem = Problem::new();
    let mut doms: Vec<VarId> = Vec::with_capacity(n);
    let mut cods: Vec<VarId> = Vec::with_capacity(n);
    for a in 0..n {
        let dom_domain = if a == 0 && break_symmetry {
            vec![0; m.min(1)]
        } else {
            (0..m).collect()
        };
        doms.push(problem.add_variable(dom_domain));
        cods.push(problem.add_variable((0..m).collect()));
    }
    for a in 0..n {
        for b in 0..n {
            match table.get(a, b) {
                ArrowValue::NotComposable => {
                    problem.add_constraint(Constraint::not_equal(cods[a], doms[b]));
                }
                ArrowValue::Arrow(c) => {
                    problem.add_constraint(Constraint::equal(cods[a], doms[b]));
                    if a != c {
                        problem.add_constraint(Constraint::equal(doms[a], doms[c]));
                    }
                    if b != c {
                        problem.add_constraint(Constraint::equal(cods[b], cods[c]));
                    }
                }
            }
        }
    }
    problem
}

/// All consistent type structures with `m` objects, `dom(0)` fixed to 0.
pub fn infer_types(table: &CompositionTable, m: usize) -> impl Iterator<Item = TypeStructure> {
    infer_types_with(table, m, true)
}

/// As [`infer_types`], optionally without pinning `dom(0)`.
pub fn infer_types_with(
    table: &CompositionTable,
    m: usize,
    break_symmetry: bool,
) -> impl Iterator<Item = TypeStructure> {
    let n = table.n();
    typing_problem(table, m, break_symmetry)
        .into_solutions()
        .expect("typing problem only watches its own variables")
        .map(move |s| {
            let v = s.values();
            TypeStructure {
                m,
                doms: (0..n).map(|a| v[2 * a]).collect(),
                cods: (0..n).map(|a| v[2 * a + 1]).collect(),
            }
        })
}

/// Smallest object count admitting a consistent type structure, scanning
/// `m = 1, 2, ..., 2n`. With more than `2n` objects some object would carry
/// no arrow at all, so failing up to `2n` means no type structure exists.
pub fn minimal_objects(table: &CompositionTable) -> Option<usize> {
    minimal_typing(table).map(|ts| ts.m)
}

/// The first type structure at the minimal object count.
pub fn minimal_typing(table: &CompositionTable) -> Option<TypeStructure> {
    let n = table.n();
    if n == 0 {
        return Some(TypeStructure::new(0, vec![], vec![]).unwrap());
    }
    (1..=2 * n).find_map(|m| infer_types(table, m).next())
}

pub fn is_semigroupoid(table: &CompositionTable) -> bool {
    table.is_associative() && minimal_objects(table).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> CompositionTable {
        s.parse().unwrap()
    }

    #[test]
    fn total_table_is_single_typed() {
        let ff = t("0 1 2; 1 1 2; 2 1 2");
        let all: Vec<_> = infer_types(&ff, 1).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].doms, vec![0, 0, 0]);
        assert_eq!(minimal_objects(&ff), Some(1));
        // a total table forces every object equal, also with more objects
        assert!(infer_types_with(&ff, 3, false).all(|ts| {
            ts.doms.iter().chain(&ts.cods).all(|&o| o == ts.doms[0])
        }));
    }

    #[test]
    fn associative_table_without_typing() {
        let right = t(". 0; 0 1");
        for m in 1..=4 {
            assert_eq!(infer_types_with(&right, m, false).count(), 0);
        }
        assert_eq!(minimal_objects(&right), None);
        assert!(right.is_associative());
        assert!(!is_semigroupoid(&right));
    }

    #[test]
    fn typable_table_not_associative() {
        let left = t("0 1; 0 0");
        assert_eq!(minimal_objects(&left), Some(1));
        assert!(!is_semigroupoid(&left));
    }

    #[test]
    fn empty_table_needs_two_objects() {
        let o = CompositionTable::empty(3);
        assert_eq!(infer_types(&o, 1).count(), 0);
        assert_eq!(minimal_objects(&o), Some(2));
        let ts = TypeStructure::new(2, vec![0, 0, 0], vec![1, 1, 1]).unwrap();
        assert!(ts.is_consistent_with(&o));
        assert!(infer_types_with(&o, 2, false).any(|s| s == ts));
    }

    #[test]
    fn s1_s2() {
        assert!(is_semigroupoid(&t(". 2 .; . . .; . . .")));
        assert!(!is_semigroupoid(&t(". 1 .; . . .; . . .")));
    }

    #[test]
    fn solutions_are_consistent() {
        let s1 = t(". 2 .; . . .; . . .");
        for m in 1..=4 {
            for ts in infer_types(&s1, m) {
                assert!(ts.is_consistent_with(&s1));
                assert_eq!(ts.doms[0], 0);
            }
        }
    }

    #[test]
    fn rejects_bad_structures() {
        assert!(TypeStructure::new(1, vec![0], vec![1]).is_err());
        assert!(TypeStructure::new(2, vec![0], vec![]).is_err());
    }
}

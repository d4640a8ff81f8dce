//! A small finite-domain backtracking engine.
//!
//! Every constraint-style query in this crate (associative tables, type
//! inference, morphism and embedding search) is phrased as a [`Problem`]:
//! variables with finite ordered domains plus predicates that watch a subset
//! of the variables. The engine assigns variables in declaration order and
//! tries values in domain order, so the solution stream is fully
//! deterministic. Optional forward checking prunes the domains of later
//! variables that share a constraint with the one just assigned; it never
//! changes which solutions are produced, nor their order.

use std::fmt;
use std::sync::Arc;

use crate::error::SearchError;

/// Identifier of a variable inside a [`Problem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Read-only view of the variables bound so far.
pub struct PartialAssignment<'a, V> {
    values: &'a [Option<V>],
}

impl<V: Copy> PartialAssignment<'_, V> {
    /// Value of `var`, or `None` while it is unbound.
    ///
    /// Panics if `var` does not belong to the problem; watched variables are
    /// validated before the search starts, so this only trips on predicates
    /// reading variables they did not declare.
    #[inline]
    pub fn get(&self, var: VarId) -> Option<V> {
        self.values[var.0]
    }

    pub fn is_bound(&self, var: VarId) -> bool {
        self.values[var.0].is_some()
    }
}

type Predicate<V> = Arc<dyn Fn(&PartialAssignment<'_, V>) -> bool + Send + Sync>;

/// A predicate over partial assignments.
///
/// The predicate is consulted whenever one of its watched variables becomes
/// bound. It must return `false` only when no extension of the current
/// partial assignment can satisfy it, and it must have decided by the time
/// every watched variable is bound.
#[derive(Clone)]
pub struct Constraint<V> {
    watches: Vec<VarId>,
    check: Predicate<V>,
}

impl<V> fmt::Debug for Constraint<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Constraint")
            .field("watches", &self.watches)
            .finish_non_exhaustive()
    }
}

impl<V: Copy + 'static> Constraint<V> {
    pub fn new<F>(watches: Vec<VarId>, check: F) -> Self
    where
        F: Fn(&PartialAssignment<'_, V>) -> bool + Send + Sync + 'static,
    {
        Constraint {
            watches,
            check: Arc::new(check),
        }
    }

    /// Constraint that is only evaluated once all watched variables are
    /// bound; `check` receives their values in watch order.
    pub fn on_values<F>(watches: Vec<VarId>, check: F) -> Self
    where
        F: Fn(&[V]) -> bool + Send + Sync + 'static,
    {
        let vars = watches.clone();
        Constraint::new(watches, move |p| {
            let mut buf = Vec::with_capacity(vars.len());
            for &v in &vars {
                match p.get(v) {
                    Some(x) => buf.push(x),
                    None => return true,
                }
            }
            check(&buf)
        })
    }

    pub fn watches(&self) -> &[VarId] {
        &self.watches
    }
}

impl<V: Copy + PartialEq + Send + Sync + 'static> Constraint<V> {
    /// The two variables take different values.
    pub fn not_equal(a: VarId, b: VarId) -> Self {
        Constraint::new(vec![a, b], move |p| match (p.get(a), p.get(b)) {
            (Some(x), Some(y)) => x != y,
            _ => true,
        })
    }

    /// The two variables take equal values.
    pub fn equal(a: VarId, b: VarId) -> Self {
        Constraint::new(vec![a, b], move |p| match (p.get(a), p.get(b)) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        })
    }
}

/// Variables with ordered finite domains plus constraints.
///
/// A `Problem` is immutable once handed to the solver and can be shared
/// across threads; [`Problem::with_domain`] makes the sharded copies used
/// to split a search by the values of one variable.
#[derive(Clone, Debug)]
pub struct Problem<V> {
    domains: Vec<Vec<V>>,
    constraints: Vec<Constraint<V>>,
    forward_checking: bool,
}

impl<V> Default for Problem<V> {
    fn default() -> Self {
        Problem {
            domains: Vec::new(),
            constraints: Vec::new(),
            forward_checking: true,
        }
    }
}

impl<V: Copy + 'static> Problem<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, domain: Vec<V>) -> VarId {
        self.domains.push(domain);
        VarId(self.domains.len() - 1)
    }

    pub fn add_constraint(&mut self, constraint: Constraint<V>) {
        self.constraints.push(constraint);
    }

    pub fn set_forward_checking(&mut self, enabled: bool) {
        self.forward_checking = enabled;
    }

    pub fn forward_checking(&self) -> bool {
        self.forward_checking
    }

    pub fn variable_count(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, var: VarId) -> &[V] {
        &self.domains[var.0]
    }

    pub fn constraints(&self) -> &[Constraint<V>] {
        &self.constraints
    }

    /// Copy of the problem with the domain of `var` replaced.
    pub fn with_domain(&self, var: VarId, domain: Vec<V>) -> Self {
        let mut p = self.clone();
        p.domains[var.0] = domain;
        p
    }

    /// Product of the domain sizes (saturating).
    pub fn search_space(&self) -> u128 {
        self.domains
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128))
    }

    /// Consumes the problem into its solution stream.
    pub fn into_solutions(self) -> Result<Solutions<V>, SearchError> {
        self.validate()?;
        Ok(Solutions::new(self))
    }

    fn validate(&self) -> Result<(), SearchError> {
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some(v) = c.watches.iter().find(|v| v.0 >= self.domains.len()) {
                return Err(SearchError::UnknownVariable {
                    constraint: i,
                    variable: v.0,
                });
            }
        }
        Ok(())
    }
}

/// A complete solution: one value per variable, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment<V> {
    values: Vec<V>,
}

impl<V: Copy> Assignment<V> {
    pub fn get(&self, var: VarId) -> V {
        self.values[var.0]
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
}

/// Lazily enumerates every solution of `problem`.
pub fn solve_all<V>(problem: &Problem<V>) -> Result<Solutions<V>, SearchError>
where
    V: Copy + 'static,
{
    problem.clone().into_solutions()
}

/// The first solution in search order, if any.
pub fn solve_first<V>(problem: &Problem<V>) -> Result<Option<Assignment<V>>, SearchError>
where
    V: Copy + 'static,
{
    Ok(solve_all(problem)?.next())
}

/// Iterator over solutions; dropping it stops the search.
pub struct Solutions<V> {
    problem: Problem<V>,
    values: Vec<Option<V>>,
    // watchers[v]: constraints watching v
    watchers: Vec<Vec<usize>>,
    // neighbours[v]: later variables sharing a constraint with v, with those constraints
    neighbours: Vec<Vec<(usize, Vec<usize>)>>,
    live: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    cursor: Vec<usize>,
    mark: Vec<usize>,
    depth: usize,
    started: bool,
    done: bool,
}

impl<V: Copy + 'static> Solutions<V> {
    fn new(problem: Problem<V>) -> Self {
        let n = problem.domains.len();
        let mut watchers = vec![Vec::new(); n];
        for (ci, c) in problem.constraints.iter().enumerate() {
            let mut seen: Vec<usize> = c.watches.iter().map(|v| v.0).collect();
            seen.sort_unstable();
            seen.dedup();
            for v in seen {
                watchers[v].push(ci);
            }
        }
        let mut neighbours = vec![Vec::new(); n];
        if problem.forward_checking {
            for (v, slot) in neighbours.iter_mut().enumerate() {
                let mut by_var: std::collections::BTreeMap<usize, Vec<usize>> =
                    std::collections::BTreeMap::new();
                for &ci in &watchers[v] {
                    for w in &problem.constraints[ci].watches {
                        if w.0 > v {
                            let e = by_var.entry(w.0).or_default();
                            if e.last() != Some(&ci) {
                                e.push(ci);
                            }
                        }
                    }
                }
                *slot = by_var.into_iter().collect();
            }
        }
        let live = problem.domains.iter().map(|d| vec![true; d.len()]).collect();
        Solutions {
            problem,
            values: vec![None; n],
            watchers,
            neighbours,
            live,
            trail: Vec::new(),
            cursor: vec![0; n],
            mark: vec![0; n],
            depth: 0,
            started: false,
            done: false,
        }
    }

    fn consistent(&self, var: usize) -> bool {
        let view = PartialAssignment {
            values: &self.values,
        };
        self.watchers[var]
            .iter()
            .all(|&ci| (self.problem.constraints[ci].check)(&view))
    }

    fn forward_check(&mut self, var: usize) -> bool {
        for (j, cons) in &self.neighbours[var] {
            let j = *j;
            let mut any_live = false;
            for pos in 0..self.problem.domains[j].len() {
                if !self.live[j][pos] {
                    continue;
                }
                self.values[j] = Some(self.problem.domains[j][pos]);
                let view = PartialAssignment {
                    values: &self.values,
                };
                let ok = cons
                    .iter()
                    .all(|&ci| (self.problem.constraints[ci].check)(&view));
                if ok {
                    any_live = true;
                } else {
                    self.live[j][pos] = false;
                    self.trail.push((j, pos));
                }
            }
            self.values[j] = None;
            if !any_live {
                return false;
            }
        }
        true
    }

    fn unassign(&mut self, var: usize) {
        self.values[var] = None;
        let mark = self.mark[var];
        while self.trail.len() > mark {
            let (j, pos) = self.trail.pop().unwrap();
            self.live[j][pos] = true;
        }
    }
}

impl<V: Copy + 'static> Iterator for Solutions<V> {
    type Item = Assignment<V>;

    fn next(&mut self) -> Option<Assignment<V>> {
        if self.done {
            return None;
        }
        let n = self.values.len();
        if n == 0 {
            self.done = true;
            return Some(Assignment { values: Vec::new() });
        }
        if !self.started {
            self.started = true;
            self.cursor[0] = 0;
        }
        loop {
            let d = self.depth;
            if self.values[d].is_some() {
                self.unassign(d);
            }
            let mut advanced = false;
            while self.cursor[d] < self.problem.domains[d].len() {
                let pos = self.cursor[d];
                self.cursor[d] += 1;
                if !self.live[d][pos] {
                    continue;
                }
                self.values[d] = Some(self.problem.domains[d][pos]);
                self.mark[d] = self.trail.len();
                if self.consistent(d) && self.forward_check(d) {
                    advanced = true;
                    break;
                }
                self.unassign(d);
            }
            if advanced {
                if d + 1 == n {
                    let values = self.values.iter().map(|v| v.unwrap()).collect();
                    return Some(Assignment { values });
                }
                self.depth = d + 1;
                self.cursor[d + 1] = 0;
            } else if d == 0 {
                self.done = true;
                return None;
            } else {
                self.depth = d - 1;
            }
        }
    }
}

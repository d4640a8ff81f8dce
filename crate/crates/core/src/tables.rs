//! Partial composition tables.
//!
//! A table over `n` arrows stores, for every ordered pair `(a, b)`, either
//! the composite `ab` or [`ArrowValue::NotComposable`]. Composition reads
//! left to right: `ab` is "first `a`, then `b`". `NotComposable` behaves like
//! an absorbing extra value during associativity checks but never indexes a
//! row or column.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::search::{Constraint, Problem, VarId};

/// Result of composing two arrows.
///
/// The derived ordering puts every arrow before `NotComposable`, which is
/// also the value order used when searching for tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArrowValue {
    Arrow(usize),
    NotComposable,
}

pub use ArrowValue::NotComposable as NC;

impl ArrowValue {
    pub fn arrow(self) -> Option<usize> {
        match self {
            ArrowValue::Arrow(i) => Some(i),
            ArrowValue::NotComposable => None,
        }
    }

    pub fn is_composable(self) -> bool {
        matches!(self, ArrowValue::Arrow(_))
    }
}

impl From<usize> for ArrowValue {
    fn from(i: usize) -> Self {
        ArrowValue::Arrow(i)
    }
}

impl From<Option<usize>> for ArrowValue {
    fn from(v: Option<usize>) -> Self {
        v.map_or(ArrowValue::NotComposable, ArrowValue::Arrow)
    }
}

impl fmt::Display for ArrowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowValue::Arrow(i) => write!(f, "{i}"),
            ArrowValue::NotComposable => f.write_str("."),
        }
    }
}

/// An `n x n` composition table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionTable {
    n: usize,
    entries: Vec<ArrowValue>,
}

impl CompositionTable {
    /// Builds a table from its rows, checking shape and arrow indices.
    pub fn from_rows<R, T>(rows: R) -> Result<Self>
    where
        R: IntoIterator<Item = T>,
        T: IntoIterator,
        T::Item: Into<ArrowValue>,
    {
        let rows: Vec<Vec<ArrowValue>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for v in row {
                if let ArrowValue::Arrow(i) = v {
                    if i >= n {
                        return Err(Error::ArrowOutOfRange { index: i, n });
                    }
                }
                entries.push(v);
            }
        }
        Ok(CompositionTable { n, entries })
    }

    /// The table of `n` arrows where nothing composes.
    pub fn empty(n: usize) -> Self {
        CompositionTable {
            n,
            entries: vec![ArrowValue::NotComposable; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `ab`. Panics when an index is out of range.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> ArrowValue {
        assert!(a < self.n && b < self.n, "arrow index out of range");
        self.entries[a * self.n + b]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[ArrowValue]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn entries(&self) -> &[ArrowValue] {
        &self.entries
    }

    fn check_index(&self, v: ArrowValue) -> Result<()> {
        match v {
            ArrowValue::Arrow(i) if i >= self.n => Err(Error::ArrowOutOfRange { index: i, n: self.n }),
            _ => Ok(()),
        }
    }

    /// Composite of two values; `NotComposable` is absorbing.
    pub fn compose(&self, a: ArrowValue, b: ArrowValue) -> Result<ArrowValue> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.compose_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, a: ArrowValue, b: ArrowValue) -> ArrowValue {
        match (a, b) {
            (ArrowValue::Arrow(x), ArrowValue::Arrow(y)) => self.entries[x * self.n + y],
            _ => ArrowValue::NotComposable,
        }
    }

    /// All ordered pairs composing to `target`, in row-major order.
    pub fn pairs_composing_to(&self, target: ArrowValue) -> Result<Vec<(usize, usize)>> {
        self.check_index(target)?;
        Ok(self.pairs_unchecked(target))
    }

    fn pairs_unchecked(&self, target: ArrowValue) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.entries[a * n + b] == target)
            .collect()
    }

    /// Associativity of one triple under the four-case rule:
    /// 1. `ab` and `bc` defined and `(ab)c = a(bc)`;
    /// 2. `ab` undefined and `a(bc)` undefined;
    /// 3. `bc` undefined and `(ab)c` undefined;
    /// 4. `ab` and `bc` both undefined.
    pub fn triple_associative(&self, a: usize, b: usize, c: usize) -> bool {
        let ab = self.get(a, b);
        let bc = self.get(b, c);
        match (ab, bc) {
            (ArrowValue::Arrow(x), ArrowValue::Arrow(y)) => self.get(x, c) == self.get(a, y),
            (ArrowValue::NotComposable, ArrowValue::Arrow(y)) => !self.get(a, y).is_composable(),
            (ArrowValue::Arrow(x), ArrowValue::NotComposable) => !self.get(x, c).is_composable(),
            (ArrowValue::NotComposable, ArrowValue::NotComposable) => true,
        }
    }

    /// First triple in lexicographic order that fails associativity.
    pub fn first_non_associative_triple(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| !self.triple_associative(a, b, c))
    }

    pub fn is_associative(&self) -> bool {
        self.first_non_associative_triple().is_none()
    }

    /// Whether every pair composes (the table of a semigroup).
    pub fn is_total(&self) -> bool {
        self.entries.iter().all(|v| v.is_composable())
    }

    /// Relabels arrows by `perm` (old index to new index): rows, columns
    /// and arrow entries move together, `NotComposable` stays put.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let n = self.n;
        let mut entries = vec![ArrowValue::NotComposable; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[perm[a] * n + perm[b]] = match self.get(a, b) {
                    ArrowValue::Arrow(x) => ArrowValue::Arrow(perm[x]),
                    nc => nc,
                };
            }
        }
        Ok(CompositionTable { n, entries })
    }

    /// Restriction to the arrows in `keep`, renumbered in the given order.
    /// Returns `None` when `keep` is not closed under composition.
    pub fn subtable(&self, keep: &[usize]) -> Option<Self> {
        let mut index = vec![None; self.n];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = Some(new);
        }
        let mut rows = Vec::with_capacity(keep.len());
        for &a in keep {
            let mut row = Vec::with_capacity(keep.len());
            for &b in keep {
                row.push(match self.get(a, b) {
                    ArrowValue::Arrow(x) => ArrowValue::Arrow(index[x]?),
                    nc => nc,
                });
            }
            rows.push(row);
        }
        CompositionTable::from_rows(rows).ok()
    }
}

impl fmt::Display for CompositionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// Parses the compact notation `"0 1 2; 1 1 2; 2 1 2"`, with `.` for
/// `NotComposable`. Rows may also be separated by newlines.
impl FromStr for CompositionTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_rows(s, |tok| match tok {
            "." => Ok(ArrowValue::NotComposable),
            t => t
                .parse::<usize>()
                .map(ArrowValue::Arrow)
                .map_err(|_| Error::InvalidTable(format!("bad entry {t:?}"))),
        })?;
        CompositionTable::from_rows(rows)
    }
}

fn parse_rows<T>(s: &str, mut cell: impl FnMut(&str) -> Result<T>) -> Result<Vec<Vec<T>>> {
    s.split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| r.split_whitespace().map(&mut cell).collect())
        .collect()
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    n: usize,
    entries: Vec<Vec<Option<i64>>>,
}

fn json_cell(v: Option<i64>, n: usize) -> Result<ArrowValue> {
    match v {
        None => Ok(ArrowValue::NotComposable),
        Some(i) if i < 0 => Err(Error::InvalidTable(format!(
            "negative entry {i}; use null for non-composable pairs"
        ))),
        Some(i) if (i as u64) >= n as u64 => Err(Error::ArrowOutOfRange {
            index: i as usize,
            n,
        }),
        Some(i) => Ok(ArrowValue::Arrow(i as usize)),
    }
}

fn check_json_shape<T>(n: usize, rows: &[Vec<T>]) -> Result<()> {
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.len(),
        });
    }
    Ok(())
}

impl TryFrom<TableJson> for CompositionTable {
    type Error = Error;

    fn try_from(j: TableJson) -> Result<Self> {
        check_json_shape(j.n, &j.entries)?;
        let rows = j
            .entries
            .into_iter()
            .map(|r| r.into_iter().map(|v| json_cell(v, j.n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        CompositionTable::from_rows(rows)
    }
}

impl Serialize for CompositionTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            n: self.n,
            entries: self
                .rows()
                .map(|r| r.iter().map(|v| v.arrow().map(|i| i as i64)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompositionTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TableJson::deserialize(d)?;
        CompositionTable::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// A table with some cells left to be searched.
///
/// `None` marks an unset cell; a set cell may hold `NotComposable`, which
/// means "defined as not composable" and is kept fixed by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialTable {
    n: usize,
    cells: Vec<Option<ArrowValue>>,
}

impl PartialTable {
    pub fn unset(n: usize) -> Self {
        PartialTable {
            n,
            cells: vec![None; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> Option<ArrowValue> {
        self.cells[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: ArrowValue) -> Result<()> {
        if let ArrowValue::Arrow(i) = v {
            if i >= self.n {
                return Err(Error::ArrowOutOfRange { index: i, n: self.n });
            }
        }
        self.cells[a * self.n + b] = Some(v);
        Ok(())
    }
}

/// Same notation as [`CompositionTable`], plus `?` for unset cells.
impl FromStr for PartialTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_rows(s, |tok| match tok {
            "?" => Ok(None),
            "." => Ok(Some(ArrowValue::NotComposable)),
            t => t
                .parse::<usize>()
                .map(|i| Some(ArrowValue::Arrow(i)))
                .map_err(|_| Error::InvalidTable(format!("bad entry {t:?}"))),
        })?;
        let n = rows.len();
        check_json_shape(n, &rows)?;
        let mut p = PartialTable::unset(n);
        for (a, row) in rows.into_iter().enumerate() {
            for (b, v) in row.into_iter().enumerate() {
                if let Some(v) = v {
                    p.set(a, b, v)?;
                }
            }
        }
        Ok(p)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PartialCell {
    Value(Option<i64>),
    Unset(String),
}

#[derive(Deserialize)]
struct PartialJson {
    n: usize,
    entries: Vec<Vec<PartialCell>>,
}

/// JSON form: like a table, with the string `"?"` marking unset cells.
impl<'de> Deserialize<'de> for PartialTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PartialJson::deserialize(d)?;
        check_json_shape(j.n, &j.entries).map_err(D::Error::custom)?;
        let mut p = PartialTable::unset(j.n);
        for (a, row) in j.entries.into_iter().enumerate() {
            for (b, cell) in row.into_iter().enumerate() {
                match cell {
                    PartialCell::Unset(s) if s == "?" => {}
                    PartialCell::Unset(s) => {
                        return Err(D::Error::custom(format!("unexpected cell {s:?}")))
                    }
                    PartialCell::Value(v) => {
                        let v = json_cell(v, j.n).map_err(D::Error::custom)?;
                        p.set(a, b, v).map_err(D::Error::custom)?;
                    }
                }
            }
        }
        Ok(p)
    }
}

/// Search problem whose solutions are the associative completions of
/// `partial` (all cells unset when `None`).
///
/// One variable per cell in row-major order. Searched cells range over
/// `Arrow(0) .. Arrow(n-1)`, followed by `NotComposable` when `allow_nc`.
/// The constraint for a triple `(a, b, c)` watches row `a` and column `c`,
/// which contain every cell the four-case rule can consult.
pub fn associativity_problem(
    n: usize,
    allow_nc: bool,
    partial: Option<&PartialTable>,
) -> Result<Problem<ArrowValue>> {
    if let Some(p) = partial {
        if p.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.n,
            });
        }
    }
    let mut free: Vec<ArrowValue> = (0..n).map(ArrowValue::Arrow).collect();
    if allow_nc {
        free.push(ArrowValue::NotComposable);
    }
    let mut problem = Problem::new();
    let mut cells = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let domain = match partial.and_then(|p| p.get(a, b)) {
                Some(v) => vec![v],
                None => free.clone(),
            };
            cells.push(problem.add_variable(domain));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut watches: Vec<VarId> = (0..n).map(|y| cells[a * n + y]).collect();
                watches.extend((0..n).filter(|&x| x != a).map(|x| cells[x * n + c]));
                let cells = cells.clone();
                let cell = move |x: usize, y: usize| cells[x * n + y];
                problem.add_constraint(Constraint::new(watches, move |p| {
                    let (Some(ab), Some(bc)) = (p.get(cell(a, b)), p.get(cell(b, c))) else {
                        return true;
                    };
                    let left = match ab {
                        ArrowValue::Arrow(x) => match p.get(cell(x, c)) {
                            Some(v) => v,
                            None => return true,
                        },
                        ArrowValue::NotComposable => ArrowValue::NotComposable,
                    };
                    let right = match bc {
                        ArrowValue::Arrow(y) => match p.get(cell(a, y)) {
                            Some(v) => v,
                            None => return true,
                        },
                        ArrowValue::NotComposable => ArrowValue::NotComposable,
                    };
                    left == right
                }));
            }
        }
    }
    Ok(problem)
}

/// Lazily enumerates the labeled associative tables on `n` arrows.
///
/// No isomorphism reduction is applied. With `allow_nc` false every entry is
/// an arrow, so the output is exactly the labeled semigroups of order `n`.
pub fn enumerate_associative_tables(
    n: usize,
    allow_nc: bool,
    partial: Option<&PartialTable>,
) -> Result<impl Iterator<Item = CompositionTable>> {
    let problem = associativity_problem(n, allow_nc, partial)?;
    let solutions = problem.into_solutions()?;
    Ok(solutions.map(move |s| CompositionTable {
        n,
        entries: s.into_values(),
    }))
}

//! Isomorphism class representatives, indexed by node count, arc count and
//! signature.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::iso::{compact_canonical, compact_isomorphic, compact_signature, Compact};
use super::{ArrowTypeGraph, Edge, GraphSignature};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Entry {
    graph: ArrowTypeGraph,
    compact: Compact,
}

type Buckets = BTreeMap<usize, BTreeMap<usize, HashMap<GraphSignature, Vec<Entry>>>>;

/// Stores one canonical representative per isomorphism class.
///
/// The database also records how far it is known to be complete: every
/// class with at most `complete_arrows` arcs (and, when an object limit is
/// set, at most that many nodes) is present.
#[derive(Clone, Debug)]
pub struct ClassDatabase {
    buckets: Buckets,
    len: usize,
    complete_arrows: usize,
    object_limit: Option<usize>,
}

impl Default for ClassDatabase {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Serialize, Deserialize)]
struct Meta {
    complete_arrows: usize,
    object_limit: Option<usize>,
}

impl ClassDatabase {
    /// A database holding only the empty graph, complete up to 0 arrows.
    pub fn new() -> Self {
        let mut db = ClassDatabase {
            buckets: BTreeMap::new(),
            len: 0,
            complete_arrows: 0,
            object_limit: None,
        };
        db.insert(&ArrowTypeGraph::empty()).unwrap();
        db
    }

    /// Inserts the class of `graph`, returning whether it was new.
    pub fn insert(&mut self, graph: &ArrowTypeGraph) -> Result<bool> {
        if let Some(&v) = graph.isolated_nodes().first() {
            return Err(Error::IsolatedNode(v));
        }
        let (raw, _) = Compact::new(graph)?;
        Ok(self.insert_compact(&raw))
    }

    pub(crate) fn insert_compact(&mut self, raw: &Compact) -> bool {
        let canon = compact_canonical(raw);
        let sig = compact_signature(&canon);
        let bucket = self
            .buckets
            .entry(sig.node_count)
            .or_default()
            .entry(sig.arc_count)
            .or_default()
            .entry(sig)
            .or_default();
        let canon_graph = canon.to_graph();
        if bucket
            .iter()
            .any(|e| e.graph == canon_graph || compact_isomorphic(&e.compact, &canon))
        {
            return false;
        }
        bucket.push(Entry {
            graph: canon_graph,
            compact: canon,
        });
        self.len += 1;
        true
    }

    /// Whether the class of `graph` is stored.
    pub fn contains(&self, graph: &ArrowTypeGraph) -> bool {
        let Ok((raw, _)) = Compact::new(&graph.compact()) else {
            return false;
        };
        let canon = compact_canonical(&raw);
        let sig = compact_signature(&canon);
        self.buckets
            .get(&sig.node_count)
            .and_then(|b| b.get(&sig.arc_count))
            .and_then(|b| b.get(&sig))
            .is_some_and(|entries| {
                entries.iter().any(|e| compact_isomorphic(&e.compact, &canon))
            })
    }

    /// Number of stored classes, including the empty graph.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Stored representatives with `nodes` nodes and `arcs` arcs, sorted.
    pub fn classes(&self, nodes: usize, arcs: usize) -> Vec<ArrowTypeGraph> {
        let mut out: Vec<ArrowTypeGraph> = self
            .buckets
            .get(&nodes)
            .and_then(|b| b.get(&arcs))
            .into_iter()
            .flat_map(|b| b.values().flatten().map(|e| e.graph.clone()))
            .collect();
        out.sort();
        out
    }

    /// Stored representatives with `arcs` arcs, by node count then sorted.
    pub fn classes_with_arcs(&self, arcs: usize) -> Vec<ArrowTypeGraph> {
        self.buckets
            .keys()
            .flat_map(|&m| self.classes(m, arcs))
            .collect()
    }

    /// All representatives ordered by node count, arc count, then arcs.
    pub fn all_classes(&self) -> Vec<ArrowTypeGraph> {
        self.buckets
            .iter()
            .flat_map(|(&m, by_arcs)| by_arcs.keys().map(move |&n| (m, n)))
            .flat_map(|(m, n)| self.classes(m, n))
            .collect()
    }

    pub fn count(&self, nodes: usize, arcs: usize) -> usize {
        self.buckets
            .get(&nodes)
            .and_then(|b| b.get(&arcs))
            .map_or(0, |b| b.values().map(Vec::len).sum())
    }

    /// Largest arc count up to which the database is complete.
    pub fn complete_arrows(&self) -> usize {
        self.complete_arrows
    }

    /// Node bound of the completeness claim, if any.
    pub fn object_limit(&self) -> Option<usize> {
        self.object_limit
    }

    /// Records completeness up to `arrows` arcs within `object_limit` nodes.
    pub fn mark_complete(&mut self, arrows: usize, object_limit: Option<usize>) {
        self.complete_arrows = arrows;
        self.object_limit = object_limit;
    }

    /// Class counts for arcs `1..=max_arrows` and nodes `1..=max_objects`.
    pub fn count_table(&self, max_arrows: usize, max_objects: usize) -> Result<CountTable> {
        if self.complete_arrows < max_arrows {
            return Err(Error::StaleDatabase {
                complete: self.complete_arrows,
                requested: max_arrows,
            });
        }
        if let Some(limit) = self.object_limit {
            if limit < max_objects && limit < 2 * max_arrows {
                return Err(Error::StaleDatabase {
                    complete: self.complete_arrows,
                    requested: max_arrows,
                });
            }
        }
        let counts = (1..=max_arrows)
            .map(|n| (1..=max_objects).map(|m| self.count(m, n)).collect())
            .collect();
        Ok(CountTable { counts })
    }

    /// Writes one JSON file per `(nodes, arcs)` bucket plus `meta.json`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for (&m, by_arcs) in &self.buckets {
            for &n in by_arcs.keys() {
                let lists: Vec<Vec<[u32; 2]>> = self
                    .classes(m, n)
                    .iter()
                    .map(|g| g.arcs().iter().map(|&(d, c)| [d, c]).collect())
                    .collect();
                write_json(&dir.join(bucket_file(m, n)), &lists)?;
            }
        }
        write_json(
            &dir.join("meta.json"),
            &Meta {
                complete_arrows: self.complete_arrows,
                object_limit: self.object_limit,
            },
        )
    }

    /// Reads a database written by [`Self::save`]. Representatives are
    /// re-canonicalized on load.
    pub fn load(dir: &Path) -> Result<Self> {
        let meta: Meta = read_json(&dir.join("meta.json"))?;
        let mut db = ClassDatabase::new();
        let entries = fs::read_dir(dir).map_err(|e| io_err(dir, e))?;
        let mut files: Vec<PathBuf> = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| io_err(dir, e))?.path();
            let is_bucket = path
                .file_name()
                .and_then(|s| s.to_str())
                .is_some_and(|s| s.starts_with("nodes") && s.ends_with(".json"));
            if is_bucket {
                files.push(path);
            }
        }
        files.sort();
        for path in files {
            let lists: Vec<Vec<[u32; 2]>> = read_json(&path)?;
            for arcs in lists {
                let g = ArrowTypeGraph::from_arcs(arcs.into_iter().map(|[d, c]| (d, c) as Edge));
                db.insert(&g)?;
            }
        }
        db.mark_complete(meta.complete_arrows, meta.object_limit);
        Ok(db)
    }

    /// Loads `dir` if it holds a database, otherwise starts fresh.
    pub fn open(dir: &Path) -> Result<Self> {
        if dir.join("meta.json").exists() {
            Self::load(dir)
        } else {
            Ok(Self::new())
        }
    }
}

fn bucket_file(nodes: usize, arcs: usize) -> String {
    format!("nodes{nodes}_arcs{arcs}.json")
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Class counts: `counts[n - 1][m - 1]` is the number of classes with `n`
/// arcs on `m` nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub counts: Vec<Vec<usize>>,
}

impl CountTable {
    pub fn max_arrows(&self) -> usize {
        self.counts.len()
    }

    pub fn max_objects(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    /// Count for `n` arcs on `m` nodes (both from 1).
    pub fn get(&self, n: usize, m: usize) -> usize {
        self.counts[n - 1][m - 1]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    /// Markdown table, zero cells left blank.
    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| arrows |");
        for m in 1..=self.max_objects() {
            let _ = write!(s, " {m} |");
        }
        s.push_str(" sum |\n|---|");
        for _ in 0..=self.max_objects() {
            s.push_str("---|");
        }
        s.push('\n');
        for (i, row) in self.counts.iter().enumerate() {
            let _ = write!(s, "| {} |", i + 1);
            for &c in row {
                if c == 0 {
                    s.push_str(" |");
                } else {
                    let _ = write!(s, " {c} |");
                }
            }
            let _ = writeln!(s, " {} |", row.iter().sum::<usize>());
        }
        s
    }

    /// CSV with a header row, zero cells left empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("arrows");
        for m in 1..=self.max_objects() {
            let _ = write!(s, ",{m}");
        }
        s.push_str(",sum\n");
        for (i, row) in self.counts.iter().enumerate() {
            let _ = write!(s, "{}", i + 1);
            for &c in row {
                if c == 0 {
                    s.push(',');
                } else {
                    let _ = write!(s, ",{c}");
                }
            }
            let _ = writeln!(s, ",{}", row.iter().sum::<usize>());
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("counts serialize")
    }
}

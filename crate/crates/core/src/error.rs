use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Configuration errors raised by the search engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("constraint {constraint} watches unknown variable {variable}")]
    UnknownVariable { constraint: usize, variable: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Search(#[from] SearchError),

    #[error("arrow index {index} out of range for {n} arrows")]
    ArrowOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("node {0} has no arcs; graphs must not contain isolated nodes")]
    IsolatedNode(u32),

    #[error("{what}: search space {size} exceeds limit {limit}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("database is complete up to {complete} arrows, {requested} requested")]
    StaleDatabase { complete: usize, requested: usize },

    #[error("table is not a semigroupoid")]
    NotSemigroupoid,

    #[error("object {object} has degree 0")]
    ZeroDegree { object: usize },

    #[error("object {object} out of range for {count} objects")]
    ObjectOutOfRange { object: usize, count: usize },

    #[error("state {state} out of range for degree {degree}")]
    StateOutOfRange { state: usize, degree: usize },

    #[error("no representation found within {0} total states")]
    NoRepresentation(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

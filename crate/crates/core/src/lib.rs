//! Computational exploration of finite semigroupoids.
//!
//! The crate covers the abstract side (partial composition tables, the
//! associativity rule for non-composable pairs, type structure inference),
//! morphisms between semigroupoids, the enumeration of arrow-type
//! semigroupoids (transitively closed digraphs without parallel edges), and
//! the concrete side: semigroupoids of typed transformations and embeddings
//! of abstract tables into full transformation semigroupoids.
//!
//! All searches run on the small backtracking engine in [`search`].

pub mod arrowtype;
pub mod catalog;
pub mod error;
pub mod genrep;
pub mod morphisms;
pub mod search;
pub mod tables;
pub mod typing;

pub use error::{Error, Result, SearchError};
pub use tables::{ArrowValue, CompositionTable, PartialTable, NC};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/typing.md")]
    mod typing {}
    #[doc = include_str!("../../../book/src/morphisms.md")]
    mod morphisms {}
    #[doc = include_str!("../../../book/src/arrowtypes.md")]
    mod arrowtypes {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

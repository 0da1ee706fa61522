//! Pattern occurrences, maximizers and packing densities for set partitions.
//!
//! A set partition of `[n]` is carried around as its restricted-growth
//! string ([`CanonicalWord`]). Patterns are counted in two senses:
//!
//! * **restricted**: the subsequence is order-isomorphic to the pattern;
//! * **unrestricted**: the subsequence canonizes to the pattern.
//!
//! On top of counting, [`search`] computes the maxima `μ(S,n,k)` and the
//! densities `δ(S,n,k) = μ(S,n,k) / C(n,m)` by exhaustive or
//! structure-guided search, [`closedform`] evaluates the known closed forms,
//! and [`verify`] runs every quantitative claim as a finite computation.

pub mod closedform;
pub mod count;
pub mod enumerate;
mod error;
pub mod ratio;
pub mod search;
pub mod verify;
pub mod word;

pub use count::{DensityValue, Occurrence};
pub use error::{Error, Result};
pub use ratio::Rational;
pub use search::{SearchConfig, SearchResult, SearchSpace, Searcher};
pub use word::{BlockStructure, CanonicalWord, Layering, Mode, PatternSet, Word};

/// Version string recorded alongside cached search results.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

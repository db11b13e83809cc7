//! t-Latin trades: construction, verification, composition, decomposition,
//! and exhaustive spectrum search.
//!
//! A `T(t,v,k)` trade is a pair of disjoint equal-size multisets of ordered
//! k-tuples over `{1..v}` in which every pattern on every t-subset of
//! coordinates is covered equally often by both sides. This crate provides:
//!
//! - the trade data model with a direct-counting verifier ([`trade`]),
//! - the sparse t-inclusion matrix whose integer null vectors are exactly
//!   the trades, as an independent second verification oracle ([`inclusion`]),
//! - constructive operations: padding, doubling, cyclic trades, signed
//!   polynomial products for the critical volumes, composition and
//!   relabeling ([`construct`]),
//! - level-trade extraction and decomposition ([`levels`]),
//! - spectrum machinery: the feasible-volume closure, certificate
//!   construction, and a bounded exhaustive existence search with
//!   per-coordinate symmetry breaking ([`search`]),
//! - a transcribed corpus of published trades used as fixtures
//!   ([`fixtures`]).

pub mod construct;
pub mod error;
pub mod fixtures;
pub mod frequency;
pub mod inclusion;
pub mod levels;
pub mod search;
pub mod trade;

mod combinatorics;

pub use error::{Error, Result};
pub use frequency::FrequencyVector;
pub use inclusion::{build_inclusion_matrix, InclusionMatrix, NullCheckReport};
pub use trade::{Block, Params, SubBlockKey, Trade, VerifyReport, Violation};

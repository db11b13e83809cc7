//! Error type shared by all modules.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter triple violates `t <= k`, `k >= 1` or `v >= 1`.
    #[error("invalid parameters: t={t}, k={k}, v={v} ({reason})")]
    InvalidParams { t: u32, k: u32, v: u32, reason: &'static str },

    /// A block has the wrong length or a symbol outside `1..=v`.
    #[error("structural error: {0}")]
    Structural(String),

    /// The two sides of a trade cover different symbol sets.
    #[error("foundation mismatch: symbols {only_in_t1:?} appear only in T1, {only_in_t2:?} only in T2")]
    FoundationMismatch {
        only_in_t1: Vec<u32>,
        only_in_t2: Vec<u32>,
    },

    /// Two objects that must share parameters do not.
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),

    /// Requested strength exceeds the block length.
    #[error("strength {t} exceeds block length {k}")]
    StrengthTooLarge { t: u32, k: u32 },

    /// An index argument (subscript, direction, coordinate) is out of range.
    #[error("{what} {value} out of range {min}..={max}")]
    IndexOutOfRange {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    /// Building the object would exceed the configured size cap.
    #[error("capacity exceeded: {what} would need {required}, cap is {cap}")]
    CapacityExceeded { what: &'static str, required: u128, cap: u64 },

    /// A relabeling map is not a bijection on the symbols it must cover.
    #[error("relabel map for coordinate {coordinate} is not a bijection: {reason}")]
    NonBijectiveRelabel { coordinate: u32, reason: String },

    /// The requested object is known not to exist.
    #[error("nonexistent: {0}")]
    Nonexistent(String),

    /// A construction failed its own postcondition. This signals a bug in the
    /// construction, never a property of the inputs.
    #[error("construction postcondition failed: {0}")]
    Construction(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A transmissivity fell outside the closed interval [0, 1].
    #[error("splitter transmissivity {name} = {value} is outside [0, 1]")]
    InvalidTransmissivity { name: &'static str, value: f64 },

    /// P(Aalter) = (1 - P_B)/(1 - P_A) is undefined because P_A = 1.
    #[error("alter ratio undefined: P_A = 1")]
    UndefinedAlterRatio,

    /// No finite sequence count can push the alter probability below the threshold.
    #[error("no finite m: P(Aalter) = {p_alter} >= 1")]
    NoFiniteSequenceCount { p_alter: f64 },

    /// A threshold or probability argument was outside its documented range.
    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A per-slot knowledge probability of exactly 0 or 1 has no finite planner answer.
    #[error("degenerate per-slot probability p_B = {p_b}; sequence length is unbounded or trivial")]
    DegenerateKnowledgeRate { p_b: f64 },

    /// Opening or sequence shape does not match the agreed (m, n).
    #[error("dimension mismatch: expected {expected_m}x{expected_n}, got {got_m}x{got_n}")]
    DimensionMismatch {
        expected_m: u32,
        expected_n: u32,
        got_m: u32,
        got_n: u32,
    },

    #[error("grid resolution {0} too coarse; need at least {1} points per axis")]
    GridTooCoarse(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.
//!
//! Errors fall into three classes that the CLI maps to exit codes:
//! usage/domain problems (bad arguments, malformed input), resource caps
//! (a configured limit was hit before the answer), and I/O.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the operation's domain (wrong prime, not a
    /// subgroup, reducible word where an irreducible one is needed, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input text that failed to parse; position is 1-based.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A configured cap was exceeded. `cap` names which one.
    #[error("resource cap exceeded: {cap} = {limit}, needed {needed}")]
    Cap { cap: &'static str, limit: u128, needed: u128 },

    /// A bounded search ran out of budget; the answer is only bracketed.
    #[error("work cap exceeded in {context}: answer in [{lower}, {upper}]")]
    WorkCap { context: &'static str, lower: u64, upper: u64 },

    /// Weighted degree of a series element exceeds the truncation cap.
    /// The element may be trivial or merely of very high degree.
    #[error("degree exceeds cap {cap}: element vanishes below truncation")]
    DegreeCap { cap: u32 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Exit code class for the CLI: 2 = usage/domain/parse, 3 = resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse { .. } => 2,
            Error::Cap { .. } | Error::WorkCap { .. } | Error::DegreeCap { .. } => 3,
            Error::Io(_) | Error::Json(_) => 2,
        }
    }
}

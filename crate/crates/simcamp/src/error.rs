//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong while building, executing, rewriting or
/// verifying campaigns. Variants mirror the failure classes of the
/// individual modules so callers can match on the kind.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed value outside a constructor's domain (bad gap, empty
    /// alphabet, inverted interval, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Event value not a member of the model's alphabet.
    #[error("alphabet error: {0}")]
    Alphabet(String),

    /// Duration not a positive multiple of the model's base step.
    #[error("step error: {0}")]
    Step(String),

    /// State key that the model cannot decode.
    #[error("codec error: {0}")]
    Codec(String),

    /// LOAD or FREE addressed a label absent from simulator memory.
    #[error("memory error: {0}")]
    Memory(String),

    /// STORE would break the one-label-per-state invariant.
    #[error("label error: {0}")]
    Label(String),

    /// Campaign normalization could not ground a loaded state in a
    /// run path from a labeled initial state.
    #[error("normalize error: {0}")]
    Normalize(String),

    /// Campaign synthesis prerequisites violated (empty scenario set,
    /// unregistered root).
    #[error("synthesis error: {0}")]
    Synthesis(String),

    /// Safety property inconsistent with the model (output index out of
    /// range) or misused verdict.
    #[error("property error: {0}")]
    Property(String),

    /// Numerical integration produced a non-finite value.
    #[error("numerics error: {0}")]
    Numerics(String),

    /// Text format violation while reading a scenario/campaign/spec file.
    #[error("parse error: line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A campaign command failed; carries the index of the offending
    /// command. The full partial record travels on
    /// [`crate::engine::ExecutionFailure`].
    #[error("command {index} failed: {source}")]
    Execution {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

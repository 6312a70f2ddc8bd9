use std::io;
use thiserror::Error;

/// Errors produced by the toi-core pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: malformed token id {text:?} (ids are unsigned 32-bit integers)")]
    MalformedId { line: usize, text: String },

    #[error("bad token file magic (expected {expected:?}, found {found:?})")]
    BadMagic { expected: String, found: String },

    #[error("truncated token file: header declares {declared} ids, payload holds {actual}")]
    TruncatedTokenFile { declared: usize, actual: usize },

    #[error("overlap count p={p} must satisfy 1 <= p <= n (n={n})")]
    OverlapOutOfRange { n: usize, p: usize },

    #[error("n={n} is not divisible by p={p}; pass allow_nondivisible to floor the step")]
    NondivisibleOverlap { n: usize, p: usize },

    #[error("data points of n={n} tokens do not fit a stream of t={t} tokens")]
    PointLongerThanStream { n: usize, t: usize },

    #[error("batch size must be at least 1")]
    ZeroBatchSize,

    #[error("overlap count must be at least 1")]
    ZeroOverlaps,

    #[error("alleviated strategy requires p >= 2; p=1 is the standard strategy, use `standard`")]
    AlleviatedRequiresOverlap,

    #[error("prime suggestion requires k >= 2, got k={k}")]
    PrimeBelowRange { k: u64 },

    #[error("cannot render an empty batch matrix")]
    EmptyMatrix,

    #[error("unknown strategy {input:?}: {reason}")]
    StrategyParse { input: String, reason: String },

    #[error("plan document line {line}: {reason}")]
    PlanParse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

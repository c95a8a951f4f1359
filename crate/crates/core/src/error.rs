use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("{side} composition has total {total}, which exceeds the bound {bound}")]
    TotalOutOfBounds {
        side: &'static str,
        total: String,
        bound: String,
    },

    #[error("type A needs both totals equal to n = {n}, got {top} and {bottom}")]
    UnequalTotals {
        n: String,
        top: String,
        bottom: String,
    },

    #[error("cannot parse spec {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("{what} of size {size} exceeds the bound {bound}")]
    TooLarge {
        what: &'static str,
        size: String,
        bound: String,
    },

    #[error("meander has {0} non-invariant segments; expected an even count")]
    OddNonInvariantSegments(usize),

    #[error("wrong algebra type: expected {expected}, got {got}")]
    WrongType { expected: &'static str, got: char },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("at least one oracle trial is required")]
    ZeroTrials,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid qubit count {n}: {reason}")]
    InvalidQubitCount { n: usize, reason: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid product formula order {0}: must be even and at least 2")]
    InvalidOrder(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lowest eigenpair is degenerate (separation {separation:e})")]
    DegenerateSpectrum { separation: f64 },

    #[error(
        "depth search exhausted: n={n}, q={q}, epsilon={epsilon}, level={level}, \
         last r={last_r}, overlap={last_overlap} < threshold {threshold}"
    )]
    SearchExhausted {
        n: usize,
        q: u32,
        epsilon: f64,
        level: u32,
        last_r: u64,
        last_overlap: f64,
        threshold: f64,
    },

    #[error("inconsistent closed forms: {what} ({lhs:e} vs {rhs:e})")]
    Inconsistent {
        what: &'static str,
        lhs: f64,
        rhs: f64,
    },
}

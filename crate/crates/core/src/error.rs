use thiserror::Error;

/// Errors produced by frame construction, spectral analysis, and the
/// optimization / search routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector lengths or frame sizes disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation's stated precondition does not hold for the input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Exact sign enumeration was requested beyond the enumeration cutoff.
    #[error(
        "system has {n} vectors but exact enumeration is capped at {cutoff}; \
         use randomized_constant for a certified lower bound"
    )]
    EnumerationCapacity { n: usize, cutoff: usize },

    /// Every vector pair was dropped as zero; nothing left to split.
    #[error("system is empty after dropping zero pairs")]
    EmptySystem,

    /// The eigensolver or a derived quantity left its validated range.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A witness search exhausted its enumeration or sampling budget.
    #[error("witness search failed: {0}")]
    SearchFailure(String),

    /// A generator was asked for parameters outside its domain.
    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.

/// Errors produced by analysis, assembly, decomposition and solver routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Physical parameters violate the elastic-medium invariants.
    #[error("invalid medium: {0}")]
    Medium(String),
    /// An argument lies outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation requested at (or too close to) a singular wavenumber.
    #[error("singular point at k = {k}: {reason}")]
    SingularPoint { k: f64, reason: String },
    /// Bracketed root search exhausted its growth limit without a sign change.
    #[error("root not found: {0}")]
    RootNotFound(String),
    /// API misuse (inconsistent sizes, bad enumerator, malformed grid, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A degrees-of-freedom partition does not cover the whole space.
    #[error("partition error: {0}")]
    Partition(String),
    /// Direct factorization hit a numerically singular pivot.
    #[error("singular factorization{}", match .subdomain { Some(i) => format!(" in subdomain {i}"), None => String::new() })]
    SingularFactorization { subdomain: Option<usize> },
    /// Experiment configuration failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),
    /// A solve failed or diverged where convergence was required.
    #[error("solver failure: {0}")]
    Solver(String),
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

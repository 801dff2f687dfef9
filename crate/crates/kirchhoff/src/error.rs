//! Error taxonomy shared by all modules.
//!
//! Exit-code mapping used by the CLI: `Usage`/`Config` are caller mistakes
//! (exit 2), everything else is a numerical or runtime failure (exit 1).

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration (grid spec, model parameters, sweep schedule).
    #[error("configuration error: {0}")]
    Config(String),
    /// API misuse: mismatched grids, unnormalized input, wrong call order.
    #[error("usage error: {0}")]
    Usage(String),
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Requested point outside the admissible parameter range.
    #[error("range error: {0}")]
    Range(String),
    /// An iterative solver failed to bracket or converge.
    #[error("solver error: {0}")]
    Solver(String),
    /// A result was produced but could not meet the requested tolerance.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// The grid cannot resolve the requested scale.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// Linear algebra or floating-point breakdown.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Case the implementation deliberately does not cover.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

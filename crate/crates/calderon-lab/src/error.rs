//! Crate-wide error type.
//!
//! Three failure classes, mirrored by the CLI exit codes: `Usage` and
//! `Domain` are caller mistakes (exit 1), `NonConvergence` is a numeric
//! failure that still carries the best value found (exit 2).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed call: dimension mismatch, parameter out of its stated range,
    /// empty input where a nonzero one is required.
    #[error("usage error: {0}")]
    Usage(String),

    /// A point lies outside the domain an operation is defined on
    /// (e.g. |z| >= 1 for a disk point, Re s outside (0,1) for a strip point).
    #[error("domain error: {0}")]
    Domain(String),

    /// An unsupported evaluation point for a family (e.g. a variable-exponent
    /// family evaluated where alpha is not real).
    #[error("unsupported point: {0}")]
    UnsupportedPoint(String),

    /// Iterative solver ran out of iterations. `best` is the last objective
    /// value, `residual` the last per-sweep change.
    #[error("numeric non-convergence after {iterations} iterations (best {best:.17e}, residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        best: f64,
        residual: f64,
    },

    /// The three-arc linear system is (numerically) singular, which happens
    /// exactly when two cut angles collapse.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// Non-finite value encountered in input data.
    #[error("numeric error: {0}")]
    NonFinite(String),

    /// Configuration file could not be parsed.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// CLI exit code class for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_)
            | Error::Domain(_)
            | Error::UnsupportedPoint(_)
            | Error::SingularSystem(_)
            | Error::Config(_) => 1,
            Error::NonConvergence { .. } | Error::NonFinite(_) => 2,
        }
    }
}

//! Error taxonomy shared by the library and the CLI.
//!
//! The CLI maps these onto process exit codes: usage/parameter problems
//! exit 2, resource-budget violations exit 3, numerical failures exit 4.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    /// Invalid argument value (outside the documented domain).
    #[error("domain error: {0}")]
    Domain(String),

    /// Bad user-facing input: unknown names, malformed syntax, violated
    /// parameter constraints.
    #[error("usage error: {0}")]
    Usage(String),

    /// A configured memory or work budget would be exceeded.
    #[error("resource error: {what} = {requested} exceeds budget {budget}")]
    Resource {
        what: &'static str,
        requested: u64,
        budget: u64,
    },

    /// Requested order/size beyond what the implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Evaluation at a pole of the requested function.
    #[error("pole error: {0}")]
    Pole(String),

    /// A numeric procedure failed to stabilize (extrapolation residuals not
    /// decreasing, etc.).
    #[error("numerical instability: {0}")]
    Numerical(String),

    /// A series that was expected to converge shows non-decreasing changes;
    /// carries the observed (cutoff, change) trace instead of a silent value.
    #[error("divergence warning: {context}; trace {trace:?}")]
    Divergence {
        context: String,
        trace: Vec<(u64, f64)>,
    },

    /// Fewer usable data points than the procedure needs.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code the CLI should use for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) | Error::Unsupported(_) => 2,
            Error::Resource { .. } => 3,
            Error::Numerical(_) | Error::Divergence { .. } | Error::Pole(_) => 4,
            Error::InsufficientData(_) => 2,
            Error::Io(_) | Error::Json(_) => 2,
        }
    }
}

use std::path::PathBuf;

/// Errors produced by the geometry, special-function, solver and harness layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate polygon: {0}")]
    Degenerate(String),

    #[error("polygon is not convex: {0}")]
    NotConvex(String),

    #[error("polygon is not normalized: {0}")]
    NotNormalized(String),

    #[error("argument out of supported range: {0}")]
    OutOfRange(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("special-function cross-check failed: {0}")]
    CrossCheck(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("matrix is not positive definite (pivot {index}: {value:e})")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of a numerical solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::NotPositiveDefinite { .. }
                | Error::Bracket(_)
                | Error::CrossCheck(_)
                | Error::Mesh(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("ill-conditioned system in the {context} update: factorization failed at pivot {pivot}")]
    IllConditioned { context: &'static str, pivot: usize },

    #[error("non-finite entries in the {context} system")]
    NonFinite { context: &'static str },

    #[error("regularizer `{0}` is not differentiable; use the proximal z-mode")]
    NotDifferentiable(&'static str),

    #[error("solver diverged: non-finite {what} at iteration {iter}")]
    Divergence { iter: usize, what: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

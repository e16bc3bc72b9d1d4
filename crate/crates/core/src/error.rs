use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GtldError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("x = {x} lies below the support lower bound {low}")]
    OutOfSupport { x: f64, low: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    #[error("series did not converge after {terms} terms (partial sum {partial}, last term {last_term})")]
    SeriesNonConvergence {
        partial: f64,
        last_term: f64,
        terms: usize,
    },

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("non-finite value at sample index {index}")]
    NonFinite { index: usize },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("unknown estimation method `{0}`")]
    UnknownMethod(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("hessian is singular or not positive definite")]
    SingularHessian,

    #[error("every optimizer start failed")]
    AllStartsFailed,

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, GtldError>;

impl GtldError {
    pub(crate) fn invalid(name: &str, value: f64, reason: &str) -> Self {
        GtldError::InvalidParameter {
            name: name.to_string(),
            value,
            reason: reason.to_string(),
        }
    }
}

use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("standing assumption violated: {0}")]
    StandingAssumption(String),

    /// A quantity is not defined for this law (e.g. J+ when P{xi>0} = 0).
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("quadrature failed to reach tolerance {tol:e} after {subdivisions} subdivisions (error estimate {estimate:e})")]
    Quadrature {
        tol: f64,
        subdivisions: usize,
        estimate: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("coupling must be independent: {0}")]
    Coupling(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

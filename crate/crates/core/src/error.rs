use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("could not bracket a root of {0}")]
    Bracket(String),

    #[error("{0} did not converge after {1} iterations")]
    NoConvergence(&'static str, usize),

    #[error("supremum diverges: {0}")]
    Divergent(String),

    #[error("adaptive quadrature failed: estimated error {error:e} exceeds tolerance {tol:e}")]
    Quadrature { error: f64, tol: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config {
            field: "<json>".into(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

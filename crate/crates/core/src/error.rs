use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Validation(String),

    #[error("failed to parse config: {0}")]
    Parse(String),

    #[error("{0} is outside the absorption table range [{1}, {2}] Hz")]
    OutOfRange(f64, f64, f64),

    #[error("infeasible requirement: {0}")]
    Infeasible(String),

    #[error("quadrature did not converge: partial value {partial:e}, error bound {bound:e}")]
    NonConvergence { partial: f64, bound: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

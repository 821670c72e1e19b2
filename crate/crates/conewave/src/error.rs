use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    NonConvergence { estimate: f64, error: f64 },
    #[error("tail extrapolation did not settle: last two sums {last:e} and {previous:e}")]
    Extrapolation { last: f64, previous: f64 },
    #[error("invalid exponent: {0}")]
    Exponent(String),
    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

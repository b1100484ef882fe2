use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} too large: exact coefficients are supported up to degree {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-invertible series: constant term is zero")]
    NonInvertible,

    #[error("parameter p = {p} is not admissible for the {family} family ({delta})")]
    Inadmissible {
        family: String,
        p: f64,
        delta: String,
    },

    #[error("tail bound {bound:e} too large at truncation order {order} (limit {limit:e})")]
    TailTooLarge { bound: f64, order: usize, limit: f64 },

    #[error("coefficient {index} is {value:e}, below the rounding floor")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

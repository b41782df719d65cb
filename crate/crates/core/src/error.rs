use thiserror::Error;

use crate::types::DensityVerdict;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix failed density-matrix validation.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(DensityVerdict),

    /// An integrand produced a non-finite value.
    #[error("non-finite integrand value {value} at node {node:?}")]
    NonFinite { value: f64, node: Vec<(f64, f64)> },

    /// The tensor-product quadrature grid exceeds the evaluation budget.
    #[error(
        "quadrature needs {required} evaluations, budget is {budget}; use smaller grids or fewer parties"
    )]
    Budget { required: u128, budget: u64 },

    /// Scenario configuration could not be parsed or validated.
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

use thiserror::Error;

use crate::surface_model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of a function (e.g. `sigma(0)`).
    #[error("domain error: {0}")]
    Domain(String),
    /// Two series or monomials do not live over the same basis, or a basis
    /// is malformed.
    #[error("structural error: {0}")]
    Structural(String),
    /// A monomial lies outside the truncation window of a series.
    #[error("monomial {0} lies outside the truncation window")]
    OutOfWindow(String),
    /// An exhaustive enumeration was requested at a size we refuse to run.
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("descriptor parse error: {0}")]
    Parse(String),
    #[error("descriptor is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
    #[error("internal error: {0}")]
    Internal(String),
}

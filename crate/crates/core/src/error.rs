//! Error type shared by all numerical routines in this crate.

use std::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    Domain(String),
    /// An iterative method exhausted its iteration budget.
    NoConvergence(String),
    /// A root bracket could not be established (no sign change).
    NoSignChange(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NoConvergence(msg) => write!(f, "did not converge: {msg}"),
            Error::NoSignChange(msg) => write!(f, "no sign change: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(value: f64, name: &str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be strictly positive and finite, got {value}"
        )))
    }
}

pub(crate) fn check_non_negative(value: f64, name: &str) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}

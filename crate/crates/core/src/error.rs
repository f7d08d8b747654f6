use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside its mathematical domain (negative, zero or non-finite).
    #[error("parameter `{name}` = {value} is out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The oscillatory quadrature exhausted its panel budget.
    #[error(
        "quadrature did not converge within {panels} panels \
         (partial value {partial:e}, error bound {bound:e})"
    )]
    NonConvergence {
        partial: f64,
        bound: f64,
        panels: usize,
    },

    /// The crossing-level scan found no sign change away from the trivial root.
    #[error("no nontrivial crossing level for beta = {beta}, theta*tau = {theta_tau}")]
    NoRoot { beta: f64, theta_tau: f64 },

    /// A fit was requested with too few or too narrowly spread samples.
    #[error("insufficient data for fit: {0}")]
    InsufficientData(String),

    /// A ratio whose denominator underflowed to zero.
    #[error("ratio denominator underflows at z = {z}, theta*tau = {theta_tau}")]
    DivisionDomain { z: f64, theta_tau: f64 },

    /// Invalid Monte Carlo configuration.
    #[error("invalid simulation config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be finite",
        })
    }
}

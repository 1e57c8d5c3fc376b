use thiserror::Error;

/// Errors produced by the numerical kernels and the bound/key-rate pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("enumerating {count} patterns exceeds the limit of {limit}")]
    Resource { count: u128, limit: u128 },

    #[error("computation failed: {0}")]
    Computation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain { name, value, domain }
}

/// Rejects values outside `(0, ∞)`, including NaN.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(name, value, "(0, inf)"))
    }
}

/// Rejects values outside `[lo, hi]`, including NaN.
pub(crate) fn require_in(name: &'static str, value: f64, lo: f64, hi: f64, label: &'static str) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(domain(name, value, label))
    }
}

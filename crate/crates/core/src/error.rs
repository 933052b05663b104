use alloc::string::String;

/// Errors raised by model construction, diagonalization and the closed-form
/// oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input parameter is outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A deformation function violated its contract (negative value under a
    /// square root, `Φ(0) ≠ 0`, or `Φ(F) ≠ 0` where nilpotency requires it).
    #[error("deformation contract violated at x = {x}: Φ(x) = {value} ({reason})")]
    DeformationContract { x: f64, value: f64, reason: &'static str },

    /// A matrix handed to the eigensolver (or produced by a builder) is not
    /// Hermitian within tolerance.
    #[error("matrix of dimension {dim} is not Hermitian: max |H - H†| = {deviation:e}")]
    NotHermitian { dim: usize, deviation: f64 },

    /// The implicit-shift iteration did not converge within its cap.
    #[error("eigensolver failed to converge for a {dim}x{dim} matrix after {iterations} iterations")]
    NoConvergence { dim: usize, iterations: usize },

    /// A closed-form formula was requested outside the regime it was
    /// derived for.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// A closed-form formula hit a numerical domain problem (negative
    /// radicand, division by zero).
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter { name, reason: reason.into() }
    }

    /// True for errors caused by bad inputs rather than by the numerics.
    pub fn is_parameter_error(&self) -> bool {
        matches!(self, Error::Parameter { .. } | Error::DeformationContract { .. } | Error::OutOfRegime(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;

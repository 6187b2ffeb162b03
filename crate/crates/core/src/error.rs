//! Error type shared by every evaluation path.

use thiserror::Error;

/// Errors produced by evaluations, censuses and audits.
///
/// Domain-style errors (`Pole`, `ZeroArgument`, `Domain`, `DenominatorZero`)
/// mean the request itself was invalid at the given point; the numerical
/// errors (`Precision`, `BoundaryZero`, `NonConvergence`) mean a tolerance
/// or budget could not be met.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    /// The function has a pole at (or within tolerance of) the argument.
    #[error("pole at s = {at}")]
    Pole { at: String },

    /// Logarithm of an argument indistinguishable from zero.
    #[error("logarithm of (near-)zero argument")]
    ZeroArgument,

    /// The argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quotient was requested where the denominator is a (near-)zero.
    #[error("denominator vanishes near s = {at}")]
    DenominatorZero { at: String },

    /// The requested accuracy cannot be met within configured budgets.
    #[error("precision target unreachable: {0}")]
    Precision(String),

    /// A zero (or pole) sits on a contour or sampling path and the
    /// automatic perturbation schedule failed to move the path off it.
    #[error("zero or pole on contour near {at}")]
    BoundaryZero { at: String },

    /// Adaptive refinement exhausted its sample budget.
    #[error("refinement budget exhausted: {0}")]
    NonConvergence(String),
}

impl EvalError {
    /// Process exit code used by the CLI: 2 for domain-style errors,
    /// 3 for numerical nonconvergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            EvalError::Pole { .. }
            | EvalError::ZeroArgument
            | EvalError::Domain(_)
            | EvalError::DenominatorZero { .. } => 2,
            EvalError::Precision(_)
            | EvalError::BoundaryZero { .. }
            | EvalError::NonConvergence(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, EvalError>;

//! Error taxonomy shared by all evaluators.

use std::fmt;

use num_complex::Complex64;

/// Coarse classification of an evaluation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// An argument sits within snap tolerance of a pole (or of a zero that
    /// would be divided by).
    PoleProximity,
    /// A truncated product, sum or quadrature did not reach its tolerance
    /// within the allowed number of terms.
    NonConvergence,
    /// An input lies outside the declared domain of the operation.
    DomainViolation,
    /// The period lattice is (numerically) commensurate.
    DegenerateLattice,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorKind::PoleProximity => "pole proximity",
            ErrorKind::NonConvergence => "non-convergence",
            ErrorKind::DomainViolation => "domain violation",
            ErrorKind::DegenerateLattice => "degenerate lattice",
        };
        f.write_str(s)
    }
}

/// An evaluation error. `detail` always names the offending value and the
/// bound it violated; `location` carries the complex point when there is one.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct EvalError {
    pub kind: ErrorKind,
    pub detail: String,
    pub location: Option<Complex64>,
}

impl EvalError {
    pub fn new(kind: ErrorKind, detail: impl Into<String>, location: Option<Complex64>) -> Self {
        EvalError {
            kind,
            detail: detail.into(),
            location,
        }
    }

    pub fn pole(detail: impl Into<String>, at: Complex64) -> Self {
        Self::new(ErrorKind::PoleProximity, detail, Some(at))
    }

    pub fn domain(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::DomainViolation, detail, None)
    }

    pub fn domain_at(detail: impl Into<String>, at: Complex64) -> Self {
        Self::new(ErrorKind::DomainViolation, detail, Some(at))
    }

    pub fn nonconvergence(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::NonConvergence, detail, None)
    }

    pub fn degenerate(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::DegenerateLattice, detail, None)
    }
}

pub type Result<T> = std::result::Result<T, EvalError>;

use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of an operation (bad index, wrong length, non-finite entry).
    #[error("domain error: {0}")]
    Domain(String),

    /// A pivot of a factorisation was not strictly positive.
    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    Definiteness { index: usize, pivot: f64 },

    /// A geometric constraint (centered frame, unit determinant, trace) was violated.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// The Eisenhart metric is undefined where the potential vanishes.
    #[error("degenerate metric: potential is {0:e}")]
    DegenerateMetric(f64),

    /// Adaptive step size collapsed.
    #[error("step size underflow at t = {t}: dt = {dt:e}")]
    Stiffness { t: f64, dt: f64 },

    /// The integrated state left the finite numbers.
    #[error("non-finite state at t = {0}")]
    Divergence(f64),

    /// A scaling probe showed the function is not homogeneous of the declared degree.
    #[error("function is not homogeneous of degree {degree} (relative mismatch {mismatch:e})")]
    NotHomogeneous { degree: usize, mismatch: f64 },

    /// A linear solve did not reproduce its right-hand side.
    #[error("linear solve residual {0:e} exceeds gate")]
    Conditioning(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return domain(format!("{what} has length {got}, expected {want}"));
    }
    Ok(())
}

pub(crate) fn check_finite(what: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return domain(format!("{what} contains non-finite entries"));
    }
    Ok(())
}

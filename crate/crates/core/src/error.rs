use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the stability library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation hit a pole (of `coth`, or of the transfer function).
    #[error("pole encountered at S = {at}")]
    Pole { at: Complex64 },

    /// A computed residue had a non-negligible imaginary part, which means the
    /// supplied root of the Love function was not converged.
    #[error("inconsistent residue at C = {c}: imaginary part {im:e} vs real part {re:e}")]
    InconsistentResidue { c: f64, re: f64, im: f64 },

    /// The argument principle and the Newton search disagree on the number of
    /// roots in a window, even after subdivision.
    #[error("incomplete root search: winding count {expected}, found {found} roots")]
    IncompleteSearch { expected: i64, found: usize },

    /// The counting contour passes too close to a zero or a singularity.
    #[error("ill-conditioned contour near S = {near}: {reason}")]
    IllConditionedContour { near: Complex64, reason: String },

    /// A predictor was asked for outside the regime it describes.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("newton iteration did not converge from seed {seed} (last |residual| = {residual:e})")]
    NoConvergence { seed: Complex64, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(s: Complex64, what: &str) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} must be finite, got {s}"
        )))
    }
}

pub(crate) fn ensure_positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} must be positive, got {x}"
        )))
    }
}

//! Error types shared across the crate.

use thiserror::Error;

/// Errors reported by the estimation and simulation routines.
///
/// Numerical routines in this crate prefer returning a value over failing:
/// degenerate normal matrices are absorbed by the Moore–Penrose
/// pseudo-inverse and empty kernel windows yield a zero prediction. The
/// variants below therefore cover genuine contract violations (bad inputs,
/// impossible requests) plus the one numerical signal that carries
/// information of its own, [`Error::QuadratureDiverged`].
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix argument contained NaN or infinite entries.
    #[error("matrix has non-finite entries")]
    InvalidMatrix,

    /// The adaptive quadrature exhausted its subdivision budget without
    /// meeting the requested tolerance; for endpoint singularities this is
    /// the numerical signal that the integrand is likely not integrable.
    #[error("quadrature failed to converge (integrand may not be integrable)")]
    QuadratureDiverged,

    /// A scalar or structural parameter was outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Singular-kernel exponent outside `[0, d/2)`, which would make the
    /// kernel's square non-integrable.
    #[error("kernel exponent a = {a} outside [0, {limit}) for dimension {d}")]
    InvalidExponent { a: f64, d: usize, limit: f64 },

    /// `singularity_bound` could not certify a positive lower bound for the
    /// kernel on the inner half of its support.
    #[error("kernel admits no positive lower bound near the origin")]
    NoLowerBound,

    /// A singular kernel was evaluated exactly at a data point outside of
    /// `predict`, which routes such points to the interpolation branch.
    #[error("singular kernel evaluated at data point index {0}")]
    DataPointCoincidence(usize),

    /// Two design points were bitwise identical; interpolation is ill-posed
    /// on tied designs.
    #[error("design points {0} and {1} are identical")]
    DuplicateDesignPoints(usize, usize),

    /// `taylor_eval` was not given every derivative of order at most `ℓ`.
    #[error("missing derivative entry for multi-index {0:?}")]
    IncompleteDerivatives(Vec<u32>),

    /// The adaptive split needs at least three points per half.
    #[error("sample of size {0} is too small to split (need n/2 >= 3)")]
    SampleTooSmall(usize),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

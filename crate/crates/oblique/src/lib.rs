//! Moving and oblique observation of the 1-D Schrödinger equation, the 1-D
//! beam equation and rectangular plates.
//!
//! The crate combines three ingredients:
//!
//! * exact lattice geometry on the circles `x² − ax + y² + ay = 0` ([`exact`]),
//! * uniform gaps and Haraux tail gaps of the quadratic exponent families
//!   attached to each equation ([`spectra`]),
//! * truncated Gram matrices of the restricted exponential systems, whose
//!   extremal eigenvalues quantify observability along a moving segment
//!   ([`gram`]).
//!
//! On top of these sit explicit solution constructors and energy checks
//! ([`solutions`]) and the two-segment obstruction graph with its kernel
//! oracle ([`obstruction`]). Everything is reachable from the `oblique`
//! binary ([`cli`]) and from the runnable programs in `examples/`.

pub mod cli;
pub mod exact;
pub mod gram;
pub mod obstruction;
pub mod quadrature;
pub mod solutions;
pub mod spectra;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("label set is not a subset of the exponent set labels: {0}")]
    NotASubset(String),
    #[error("eigensolver failed to converge after {iterations} iterations (size {size})")]
    EigenFailed { size: usize, iterations: usize },
    #[error("energy paths disagree: gram={gram:.6e}, quadrature={quadrature:.6e}")]
    EnergyMismatch { gram: f64, quadrature: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

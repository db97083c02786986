//! Exact and error-correcting recovery of polynomials and rational
//! functions from samples, plus the bound calculators behind the noisy
//! reduction's certificate.

mod bounds;
mod bw;
mod polynomial;
mod rational_fn;

use thiserror::Error;

use crate::arith::ArithError;

pub use bounds::{paturi_bound, rakhmanov_bound, rakhmanov_node, rakhmanov_radius, Magnitude};
pub use bw::{berlekamp_welch, bw_threshold};
pub use polynomial::{vandermonde_interpolate, ExactPolynomial, SampleSet};
pub use rational_fn::{reconstruct_rational, RationalFunction, RationalReconstruction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("sample abscissae are not pairwise distinct")]
    DuplicateAbscissa,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("no unique polynomial meets the agreement threshold")]
    DecodingFailure,
    #[error("the linear system admits no nonzero denominator")]
    DegenerateSystem,
    #[error("interval radius must be positive")]
    NonPositiveEpsilon,
    #[error("point lies outside the admissible radius")]
    PointOutsideRadius,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeExceeded { degree: usize, bound: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

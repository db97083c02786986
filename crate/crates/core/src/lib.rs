//! Exact PEPS contraction and the worst-to-average-case reductions built on
//! it: blend paths, faulty oracles, error-correcting interpolation, majority
//! vote, and Lipton's permanent self-reduction as a baseline.

pub mod arith;
pub mod harness;
pub mod interp;
pub mod permanent;
pub mod reduction;
pub mod tensor;

pub use arith::{ComplexRational, Field, FieldKind, FieldScalar, PrimeFieldElement, Rational};

//! Exact scalar arithmetic: rationals, Gaussian rationals Q(i), prime fields
//! F_q, and exact linear algebra over any of them.
//!
//! Every algorithm above this layer is written against the [`Field`] trait so
//! one code path serves both the PEPS reductions (over Q(i)) and the permanent
//! baseline (over F_q).

mod complex;
mod dyadic;
mod linalg;
mod prime;
mod rational;
mod scalar;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use thiserror::Error;

pub use complex::{ComplexRational, GaussInt};
pub use dyadic::snap_to_dyadic;
pub use linalg::{mat_vec, nullspace, rank, solve_consistent, solve_linear_system};
pub use prime::{is_prime, ModularImage, PrimeFieldElement};
pub use rational::Rational;
pub use scalar::{common_kind, solve_scalar_system, FieldKind, FieldScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("input is not a finite number")]
    NonFiniteInput,
    #[error("bit budget must be at least 1")]
    InvalidBits,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// An exact field. Elements carry whatever context they need (the prime
/// modulus, for F_q), so constants are produced from an existing element.
pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    /// Accumulator type for the contraction kernels. For Q(i) this is the
    /// Gaussian integers, reached by clearing denominators.
    type Kernel: KernelScalar;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    fn over(&self, rhs: &Self) -> Option<Self> {
        Some(self.times(&rhs.inverse()?))
    }

    /// Complex conjugation; the identity on F_q.
    fn conj(&self) -> Self;

    fn same_field(&self, other: &Self) -> bool;

    fn kind(&self) -> FieldKind;
    fn to_scalar(&self) -> FieldScalar;
    fn from_scalar(s: &FieldScalar) -> Option<Self>;

    /// Size heuristic used to pick cheap pivots.
    fn weight(&self) -> u64 {
        0
    }

    /// Image under a homomorphism into a small prime field, if one exists
    /// for this element.
    fn mod_image(&self, _image: &ModularImage) -> Option<PrimeFieldElement> {
        None
    }

    /// A multiplier that makes every entry of `row` integral (1 if the
    /// field has no such notion).
    fn integral_scale(row: &[Self]) -> Option<Self> {
        row.first().map(|e| e.one_like())
    }

    /// Converts a tensor to kernel scalars, returning `(entries, s)` with
    /// `tensor[i] = from_kernel(entries[i]) * s`.
    fn to_kernel(tensor: &[Self]) -> (Vec<Self::Kernel>, Self);

    fn from_kernel(k: &Self::Kernel, like: &Self) -> Self;

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self = self.plus(&a.times(b));
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..exp {
            acc = acc.times(self);
        }
        acc
    }
}

/// Ring used inside the hot contraction loops.
pub trait KernelScalar: Clone + Debug + Send + Sync {
    fn kernel_zero(&self) -> Self;
    fn kernel_one(&self) -> Self;
    fn is_kernel_zero(&self) -> bool;
    /// `self += a * b`
    fn mul_add(&mut self, a: &Self, b: &Self);
    /// `self += a * conj(b)`
    fn mul_conj_add(&mut self, a: &Self, b: &Self);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complex() -> impl Strategy<Value = ComplexRational> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| {
            ComplexRational::new(Rational::new(a, b).unwrap(), Rational::new(c, d).unwrap())
        })
    }

    fn prime(q: u64) -> impl Strategy<Value = PrimeFieldElement> {
        (0..q).prop_map(move |v| PrimeFieldElement::new(v, q))
    }

    fn axioms<F: Field>(a: &F, b: &F, c: &F) {
        assert_eq!(a.plus(b).plus(c), a.plus(&b.plus(c)));
        assert_eq!(a.times(b).times(c), a.times(&b.times(c)));
        assert_eq!(a.plus(b), b.plus(a));
        assert_eq!(a.times(b), b.times(a));
        assert_eq!(a.times(&b.plus(c)), a.times(b).plus(&a.times(c)));
        assert_eq!(a.minus(a), a.zero_like());
        assert_eq!(a.plus(&a.negate()), a.zero_like());
        assert_eq!(a.conj().conj(), *a);
        if !a.is_zero() {
            assert!(a.times(&a.inverse().unwrap()).is_one());
        }
    }

    proptest! {
        #[test]
        fn complex_rational_axioms(a in complex(), b in complex(), c in complex()) {
            axioms(&a, &b, &c);
            prop_assert!(a.norm_sqr().signum() >= 0);
        }

        #[test]
        fn prime_field_axioms(a in prime(101), b in prime(101), c in prime(101)) {
            axioms(&a, &b, &c);
        }

        #[test]
        fn large_prime_field_axioms(
            a in prime(2_305_843_009_213_693_951),
            b in prime(2_305_843_009_213_693_951),
            c in prime(2_305_843_009_213_693_951),
        ) {
            axioms(&a, &b, &c);
        }
    }
}

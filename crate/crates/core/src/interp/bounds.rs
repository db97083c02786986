//! Extrapolation and interpolation bounds for noisy evaluations.
//!
//! Magnitudes are carried as base-2 logarithms so bounds like
//! `e^(2r(1 + 1/eps))` with tiny `eps` stay representable. Every operation
//! rounds the logarithm upward by a relative slack far above f64 error.

use std::f64::consts::{LOG2_E, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::InterpError;
use crate::arith::{ComplexRational, Rational};

const SLACK: f64 = 1e-12;

fn round_up(v: f64) -> f64 {
    v + v.abs() * SLACK + f64::MIN_POSITIVE
}

/// Nonnegative real `2^log2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Magnitude {
    log2: f64,
}

impl Magnitude {
    pub fn zero() -> Self {
        Magnitude { log2: f64::NEG_INFINITY }
    }

    pub fn one() -> Self {
        Magnitude { log2: 0.0 }
    }

    pub fn from_log2(log2: f64) -> Self {
        Magnitude { log2 }
    }

    pub fn pow2(exp: i64) -> Self {
        Magnitude { log2: exp as f64 }
    }

    /// Upper bound for a nonnegative float.
    pub fn from_f64(v: f64) -> Self {
        assert!(v >= 0.0, "magnitudes are nonnegative");
        if v == 0.0 {
            return Self::zero();
        }
        Magnitude { log2: round_up(v.log2()) }
    }

    /// Upper bound on `|v|`.
    pub fn of_rational(v: &Rational) -> Self {
        Magnitude { log2: v.log2_upper() }
    }

    /// Upper bound on `|z|`.
    pub fn of_complex(z: &ComplexRational) -> Self {
        if z.re.is_zero() && z.im.is_zero() {
            return Self::zero();
        }
        Magnitude { log2: z.log2_abs_upper() }
    }

    pub fn log2(&self) -> f64 {
        self.log2
    }

    /// Nearest float; may overflow to infinity.
    pub fn to_f64(&self) -> f64 {
        self.log2.exp2()
    }

    pub fn is_zero(&self) -> bool {
        self.log2 == f64::NEG_INFINITY
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Magnitude { log2: round_up(self.log2 + rhs.log2) }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "2^{:.6}", self.log2)
        }
    }
}

/// `delta * e^(2r(1 + 1/eps))`: bound on `|p(1)|` for a degree-`r` real
/// polynomial with `|p| <= delta` on `[-eps, eps]`. Also bounds `|p(y)|` for
/// every `|y| <= 1`.
pub fn paturi_bound(delta: Magnitude, r: usize, eps: f64) -> Result<Magnitude, InterpError> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(InterpError::NonPositiveEpsilon);
    }
    let exponent = round_up(2.0 * r as f64 * (1.0 + 1.0 / eps) * LOG2_E);
    Ok(delta.mul(&Magnitude::from_log2(exponent)))
}

/// `sqrt(1 - r^2 / k^2)`
pub fn rakhmanov_radius(k: usize, r: usize) -> f64 {
    let ratio = r as f64 / k as f64;
    (1.0 - ratio * ratio).sqrt()
}

/// `C log(pi / arctan((k/r) sqrt(R^2 - x^2)))` for a degree-`r` polynomial
/// bounded by 1 on the `k` equidistant points `-1 + (2j - 1)/k`, valid for
/// `|x| < R` with `R` from [`rakhmanov_radius`].
pub fn rakhmanov_bound(k: usize, r: usize, x: f64, c: f64) -> Result<Magnitude, InterpError> {
    if r == 0 || k <= r {
        return Err(InterpError::InvalidParameters(format!("need k > r >= 1, got k = {k}, r = {r}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(InterpError::InvalidParameters(format!("constant must be positive, got {c}")));
    }
    let radius = rakhmanov_radius(k, r);
    if !(x.abs() < radius) {
        return Err(InterpError::PointOutsideRadius);
    }
    let arg = (k as f64 / r as f64) * (radius * radius - x * x).sqrt();
    let value = c * (PI / arg.atan()).ln();
    Ok(Magnitude::from_f64(value))
}

/// Node `j` (0-based) of the equidistant set used by [`rakhmanov_bound`].
pub fn rakhmanov_node(k: usize, j: usize) -> f64 {
    -1.0 + (2 * j + 1) as f64 / k as f64
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Assign, Integer};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ArithError;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(rug::Rational);

impl Rational {
    pub fn zero() -> Self {
        Rational(rug::Rational::new())
    }

    pub fn one() -> Self {
        Rational(rug::Rational::from(1))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(rug::Rational::from(v))
    }

    /// Builds `num/den`, normalizing sign and common factors.
    pub fn new(num: i64, den: i64) -> Result<Self, ArithError> {
        if den == 0 {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(rug::Rational::from((num, den))))
    }

    pub fn from_integers(num: Integer, den: Integer) -> Result<Self, ArithError> {
        if den == 0 {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(rug::Rational::from((num, den))))
    }

    /// Exact value of a finite binary float.
    pub fn from_f64_exact(v: f64) -> Result<Self, ArithError> {
        rug::Rational::from_f64(v)
            .map(Rational)
            .ok_or(ArithError::NonFiniteInput)
    }

    /// `2^exp` for any integer exponent.
    pub fn pow2(exp: i32) -> Self {
        let mut r = rug::Rational::from(1);
        if exp >= 0 {
            r <<= exp as u32;
        } else {
            r >>= exp.unsigned_abs();
        }
        Rational(r)
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn inner(&self) -> &rug::Rational {
        &self.0
    }

    pub fn into_inner(self) -> rug::Rational {
        self.0
    }

    pub fn from_inner(r: rug::Rational) -> Self {
        Rational(r)
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_one(&self) -> bool {
        *self.0.numer() == 1 && *self.0.denom() == 1
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.clone().abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.clone().recip()))
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = rug::Rational::from(1);
        for _ in 0..exp {
            acc *= &self.0;
        }
        Rational(acc)
    }

    /// Nearest binary float (round-to-nearest by GMP).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Upper bound on `log2(|self|)`, valid for nonzero values.
    pub fn log2_upper(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        // |p/q| < 2^bits(p) / 2^(bits(q)-1)
        let p = self.0.numer().significant_bits() as f64;
        let q = self.0.denom().significant_bits() as f64;
        let crude = p - (q - 1.0);
        // Tighten with the float approximation when it is representable.
        let f = self.to_f64().abs();
        if f.is_finite() && f > 0.0 {
            let est = f.log2();
            let slack = 1e-9 * est.abs().max(1.0);
            return (est + slack).min(crude);
        }
        crude
    }

    /// Number of bits in numerator plus denominator.
    pub fn bit_size(&self) -> u64 {
        u64::from(self.0.numer().significant_bits()) + u64::from(self.0.denom().significant_bits())
    }

    /// Serialized form: explicit sign, always with a denominator, e.g. `+3/4`.
    pub fn to_signed_string(&self) -> String {
        let sign = if self.signum() < 0 { '-' } else { '+' };
        format!("{}{}/{}", sign, self.0.numer().clone().abs(), self.0.denom())
    }

    pub fn floor(&self) -> Integer {
        let mut i = Integer::new();
        i.assign(self.0.floor_ref());
        i
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    /// Accepts `p`, `p/q`, with an optional leading `+` or `-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ArithError::Parse(format!("invalid rational '{s}'"));
        let body = s.strip_prefix('+').unwrap_or(s);
        if body.starts_with('+') || body.is_empty() {
            return Err(bad());
        }
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, d),
            None => (body, "1"),
        };
        let num: Integer = num.parse().map_err(|_| bad())?;
        let den: Integer = den.parse().map_err(|_| bad())?;
        if den.cmp0() != Ordering::Greater && den.cmp0() != Ordering::Less {
            return Err(ArithError::DivisionByZero);
        }
        Rational::from_integers(num, den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_signed_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<Integer> for Rational {
    fn from(v: Integer) -> Self {
        Rational(rug::Rational::from(v))
    }
}

macro_rules! rational_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(rug::Rational::from(&self.0 $op &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);

impl Div<&Rational> for &Rational {
    type Output = Rational;

    /// Panics on division by zero; use [`Rational::recip`] to check.
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "rational division by zero");
        Rational(rug::Rational::from(&self.0 / &rhs.0))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(rug::Rational::from(-&self.0))
    }
}

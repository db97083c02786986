use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::prime::{ModularImage, PrimeFieldElement};
use super::{Field, FieldKind, FieldScalar, KernelScalar, Rational};

/// Element of the Gaussian rationals Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRational { re, im: Rational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        ComplexRational::real(Rational::from_int(v))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ComplexRational::new(Rational::from_int(re), Rational::from_int(im))
    }

    pub fn zero() -> Self {
        ComplexRational::default()
    }

    pub fn one() -> Self {
        ComplexRational::from_int(1)
    }

    pub fn i() -> Self {
        ComplexRational::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        ComplexRational { re: self.re.clone(), im: -&self.im }
    }

    /// |z|^2 = re^2 + im^2.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ComplexRational { re: &self.re * s, im: &self.im * s }
    }

    /// Upper bound on `log2 |z|`.
    pub fn log2_abs_upper(&self) -> f64 {
        let a = self.re.log2_upper();
        let b = self.im.log2_upper();
        // |z| <= sqrt(2) * max(|re|, |im|)
        a.max(b) + 0.5
    }

    pub fn bit_size(&self) -> u64 {
        self.re.bit_size() + self.im.bit_size()
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.signum() < 0 {
            write!(f, "{} - {}i", self.re, self.im.abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for ComplexRational {
    fn from(re: Rational) -> Self {
        ComplexRational::real(re)
    }
}

impl Add<&ComplexRational> for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&ComplexRational> for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&ComplexRational> for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return ComplexRational::real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ComplexRational { re, im }
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational { re: -&self.re, im: -&self.im }
    }
}

impl Field for ComplexRational {
    type Kernel = GaussInt;

    fn zero_like(&self) -> Self {
        ComplexRational::zero()
    }

    fn one_like(&self) -> Self {
        ComplexRational::one()
    }

    fn from_i64_like(&self, v: i64) -> Self {
        ComplexRational::from_int(v)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negate(&self) -> Self {
        -self
    }

    fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr();
        let inv = n.recip()?;
        Some(ComplexRational { re: &self.re * &inv, im: -(&self.im * &inv) })
    }

    fn conj(&self) -> Self {
        self.conjugate()
    }

    fn same_field(&self, _other: &Self) -> bool {
        true
    }

    fn kind(&self) -> FieldKind {
        FieldKind::ComplexRational
    }

    fn to_scalar(&self) -> FieldScalar {
        FieldScalar::Complex(self.clone())
    }

    fn from_scalar(s: &FieldScalar) -> Option<Self> {
        s.as_complex().cloned()
    }

    fn weight(&self) -> u64 {
        self.bit_size()
    }

    fn mod_image(&self, image: &ModularImage) -> Option<PrimeFieldElement> {
        let re = image.reduce_rational(&self.re)?;
        let im = image.reduce_rational(&self.im)?;
        let i = PrimeFieldElement::new(image.sqrt_neg_one, image.modulus);
        Some(re.plus(&i.times(&im)))
    }

    fn integral_scale(row: &[Self]) -> Option<Self> {
        let mut lcm = Integer::from(1);
        for z in row {
            lcm.lcm_mut(z.re.denom());
            lcm.lcm_mut(z.im.denom());
        }
        Some(ComplexRational::real(Rational::from(lcm)))
    }

    fn to_kernel(tensor: &[Self]) -> (Vec<GaussInt>, Self) {
        let mut lcm = Integer::from(1);
        for z in tensor {
            lcm.lcm_mut(z.re.denom());
            lcm.lcm_mut(z.im.denom());
        }
        let ints = tensor
            .iter()
            .map(|z| GaussInt {
                re: Integer::from(z.re.numer() * Integer::from(&lcm / z.re.denom())),
                im: Integer::from(z.im.numer() * Integer::from(&lcm / z.im.denom())),
            })
            .collect();
        let scale = Rational::from_integers(Integer::from(1), lcm).expect("lcm is positive");
        (ints, ComplexRational::real(scale))
    }

    fn from_kernel(k: &GaussInt, _like: &Self) -> Self {
        ComplexRational {
            re: Rational::from(k.re.clone()),
            im: Rational::from(k.im.clone()),
        }
    }
}

/// Gaussian integer used as the accumulation type of the contraction kernels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GaussInt {
    pub re: Integer,
    pub im: Integer,
}

impl KernelScalar for GaussInt {
    fn kernel_zero(&self) -> Self {
        GaussInt::default()
    }

    fn kernel_one(&self) -> Self {
        GaussInt { re: Integer::from(1), im: Integer::new() }
    }

    fn is_kernel_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn mul_add(&mut self, a: &Self, b: &Self) {
        self.re += &a.re * &b.re;
        if a.im != 0 || b.im != 0 {
            self.re -= &a.im * &b.im;
            self.im += &a.re * &b.im;
            self.im += &a.im * &b.re;
        }
    }

    fn mul_conj_add(&mut self, a: &Self, b: &Self) {
        // a * conj(b) = (ar br + ai bi) + i (ai br - ar bi)
        self.re += &a.re * &b.re;
        if a.im != 0 || b.im != 0 {
            self.re += &a.im * &b.im;
            self.im += &a.im * &b.re;
            self.im -= &a.re * &b.im;
        }
    }
}

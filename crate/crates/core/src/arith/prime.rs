use std::fmt;
use std::sync::OnceLock;

use rug::Integer;

use super::{Field, FieldKind, FieldScalar, KernelScalar, Rational};

/// Element of the prime field F_q. The modulus travels with the value; the
/// arithmetic panics if two different moduli meet, which the dynamic
/// [`FieldScalar`](super::FieldScalar) layer rules out with a typed error.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    value: u64,
    modulus: u64,
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u64::from(u32::MAX) {
        (a * b) % m
    } else {
        ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PrimeFieldElement {
    /// Reduces `value` modulo `modulus`. The modulus is assumed prime; use
    /// [`PrimeFieldElement::checked`] to validate it.
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        PrimeFieldElement { value: value % modulus, modulus }
    }

    pub fn checked(value: u64, modulus: u64) -> Option<Self> {
        is_prime(modulus).then(|| PrimeFieldElement::new(value, modulus))
    }

    pub fn from_i64(v: i64, modulus: u64) -> Self {
        let r = v.rem_euclid(modulus as i64) as u64;
        PrimeFieldElement { value: r, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "mixed prime moduli");
    }

    pub fn pow(&self, exp: u64) -> Self {
        PrimeFieldElement { value: pow_mod(self.value, exp, self.modulus), modulus: self.modulus }
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Field for PrimeFieldElement {
    type Kernel = PrimeFieldElement;

    fn zero_like(&self) -> Self {
        PrimeFieldElement { value: 0, modulus: self.modulus }
    }

    fn one_like(&self) -> Self {
        PrimeFieldElement { value: 1, modulus: self.modulus }
    }

    fn from_i64_like(&self, v: i64) -> Self {
        PrimeFieldElement::from_i64(v, self.modulus)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn plus(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = self.value + rhs.value;
        let value = if s >= self.modulus || s < self.value { s.wrapping_sub(self.modulus) } else { s };
        PrimeFieldElement { value, modulus: self.modulus }
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        PrimeFieldElement { value, modulus: self.modulus }
    }

    fn times(&self, rhs: &Self) -> Self {
        self.check(rhs);
        PrimeFieldElement { value: mul_mod(self.value, rhs.value, self.modulus), modulus: self.modulus }
    }

    fn negate(&self) -> Self {
        let value = if self.value == 0 { 0 } else { self.modulus - self.value };
        PrimeFieldElement { value, modulus: self.modulus }
    }

    fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Extended Euclid; valid for any modulus coprime to the value.
        let (mut r0, mut r1) = (i128::from(self.modulus), i128::from(self.value));
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        let m = i128::from(self.modulus);
        Some(PrimeFieldElement { value: t0.rem_euclid(m) as u64, modulus: self.modulus })
    }

    fn conj(&self) -> Self {
        *self
    }

    fn same_field(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Prime { modulus: self.modulus }
    }

    fn to_scalar(&self) -> FieldScalar {
        FieldScalar::Prime(*self)
    }

    fn from_scalar(s: &FieldScalar) -> Option<Self> {
        s.as_prime().copied()
    }

    fn to_kernel(tensor: &[Self]) -> (Vec<Self>, Self) {
        let one = tensor.first().map(|e| e.one_like()).unwrap_or(PrimeFieldElement::new(1, 2));
        (tensor.to_vec(), one)
    }

    fn from_kernel(k: &Self, _like: &Self) -> Self {
        *k
    }
}

impl KernelScalar for PrimeFieldElement {
    fn kernel_zero(&self) -> Self {
        Field::zero_like(self)
    }

    fn kernel_one(&self) -> Self {
        Field::one_like(self)
    }

    fn is_kernel_zero(&self) -> bool {
        self.value == 0
    }

    fn mul_add(&mut self, a: &Self, b: &Self) {
        *self = self.plus(&a.times(b));
    }

    fn mul_conj_add(&mut self, a: &Self, b: &Self) {
        self.mul_add(a, b);
    }
}

/// A ring homomorphism Z[i] -> F_p (p = 1 mod 4), extended to the Gaussian
/// rationals whose denominators are units mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularImage {
    pub modulus: u64,
    pub sqrt_neg_one: u64,
}

impl ModularImage {
    pub fn new(modulus: u64) -> Option<Self> {
        if !is_prime(modulus) || modulus % 4 != 1 {
            return None;
        }
        // g^((p-1)/4) is a square root of -1 for any quadratic non-residue g.
        let half = (modulus - 1) / 2;
        let g = (2..).find(|&g| pow_mod(g, half, modulus) == modulus - 1)?;
        let s = pow_mod(g, (modulus - 1) / 4, modulus);
        Some(ModularImage { modulus, sqrt_neg_one: s })
    }

    /// A fixed list of primes just below 2^31 that are 1 mod 4, so products
    /// fit in a u64.
    pub fn standard() -> &'static [ModularImage] {
        static PRIMES: OnceLock<Vec<ModularImage>> = OnceLock::new();
        PRIMES.get_or_init(|| {
            let mut out = Vec::new();
            let mut p = (1u64 << 31) - 1;
            while out.len() < 8 {
                if p % 4 == 1 {
                    if let Some(img) = ModularImage::new(p) {
                        out.push(img);
                    }
                }
                p -= 2;
            }
            out
        })
    }

    pub fn reduce_integer(&self, v: &Integer) -> PrimeFieldElement {
        if let Ok(m) = u32::try_from(self.modulus) {
            return PrimeFieldElement::new(u64::from(v.mod_u(m)), self.modulus);
        }
        let m = Integer::from(self.modulus);
        let mut r = Integer::from(v % &m);
        if r < 0 {
            r += &m;
        }
        PrimeFieldElement::new(r.to_u64().expect("residue fits"), self.modulus)
    }

    pub fn reduce_rational(&self, v: &Rational) -> Option<PrimeFieldElement> {
        let n = self.reduce_integer(v.numer());
        let d = self.reduce_integer(v.denom());
        Some(n.times(&d.inverse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes = [2u64, 3, 101, 65537, 2_147_483_647, 1_000_000_007, (1 << 61) - 1];
        for p in primes {
            assert!(is_prime(p), "{p}");
        }
        for n in [0u64, 1, 4, 100, 561, 1_000_000_008, 3_215_031_751] {
            assert!(!is_prime(n), "{n}");
        }
    }

    #[test]
    fn inverses_mod_101() {
        for v in 1..101 {
            let a = PrimeFieldElement::new(v, 101);
            assert!(a.times(&a.inverse().unwrap()).is_one());
        }
        assert!(PrimeFieldElement::new(0, 101).inverse().is_none());
    }

    #[test]
    fn large_modulus_arithmetic() {
        let p = (1u64 << 61) - 1;
        let a = PrimeFieldElement::new(p - 1, p);
        assert_eq!(a.plus(&a).value(), p - 2);
        assert_eq!(a.times(&a).value(), 1);
        assert_eq!(a.negate().value(), 1);
    }

    #[test]
    fn modular_images_have_square_roots_of_minus_one() {
        for img in ModularImage::standard() {
            let s = PrimeFieldElement::new(img.sqrt_neg_one, img.modulus);
            assert_eq!(s.times(&s).value(), img.modulus - 1);
        }
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        use crate::arith::ComplexRational;
        let img = ModularImage::standard()[0];
        let a = ComplexRational::new(Rational::new(3, 7).unwrap(), Rational::new(-2, 9).unwrap());
        let b = ComplexRational::new(Rational::new(-11, 4).unwrap(), Rational::new(5, 1).unwrap());
        let lhs = a.times(&b).mod_image(&img).unwrap();
        let rhs = a.mod_image(&img).unwrap().times(&b.mod_image(&img).unwrap());
        assert_eq!(lhs, rhs);
    }
}

use std::cmp::Ordering;

use rug::Integer;

use super::{ArithError, Rational};

/// Rounds a binary float to the nearest `m / 2^bits`, ties to even `m`.
pub fn snap_to_dyadic(sample: f64, bits: u32) -> Result<Rational, ArithError> {
    if bits == 0 {
        return Err(ArithError::InvalidBits);
    }
    if !sample.is_finite() {
        return Err(ArithError::NonFiniteInput);
    }
    let scaled = Rational::from_f64_exact(sample)? * Rational::pow2(bits as i32);
    let mut m = scaled.floor();
    let frac = &scaled - &Rational::from(m.clone());
    match frac.cmp(&Rational::new(1, 2)?) {
        Ordering::Greater => m += 1,
        Ordering::Equal if m.is_odd() => m += 1,
        _ => {}
    }
    Rational::from_integers(m, Integer::from(1) << bits)
}

//! Berlekamp–Welch decoding.
//!
//! The decoder first solves the classical error-locator system with
//! `deg E = floor((k - r - 1) / 2)`, which decodes uniquely whenever that
//! many errors or fewer occurred. When `k - r` is even, a codeword may also
//! sit exactly at distance `(k - r) / 2`; the homogeneous system then has a
//! two-dimensional solution space and every such codeword appears as a
//! member of that pencil vanishing on its error positions. A result is
//! returned only if exactly one polynomial meets the agreement threshold.
//!
//! Over Q(i) the linear algebra is run in small prime fields first. The
//! reduction map is a ring homomorphism, so a codeword over Q(i) stays a
//! codeword mod p; the exact polynomial is then recovered by interpolating
//! through agreeing positions and checked against every sample.

use std::collections::HashMap;

use super::{ExactPolynomial, InterpError, SampleSet};
use crate::arith::{nullspace, solve_consistent, Field, ModularImage, PrimeFieldElement};

/// Minimum number of agreeing samples for unique decoding:
/// `max(r + 1, ceil((k + r) / 2))`.
pub fn bw_threshold(k: usize, r: usize) -> usize {
    (r + 1).max((k + r).div_ceil(2))
}

/// Recovers the degree-`r` polynomial that agrees with at least
/// [`bw_threshold`] of the `k > r` samples, or reports `DecodingFailure`.
pub fn berlekamp_welch<F: Field>(samples: &SampleSet<F>, r: usize) -> Result<ExactPolynomial<F>, InterpError> {
    let k = samples.len();
    if k <= r {
        return Err(InterpError::InsufficientSamples { needed: r + 1, got: k });
    }
    let xs = samples.xs();
    let ys = samples.ys();

    let mut modular_failures = 0;
    for img in ModularImage::standard() {
        let Some((mx, my)) = reduce_all(&xs, &ys, img) else {
            continue;
        };
        match decode_direct(&mx, &my, r) {
            Ok(pm) => {
                if let Some(p) = lift(&xs, &ys, &mx, &my, &pm, r) {
                    return Ok(p);
                }
            }
            Err(_) => {
                modular_failures += 1;
                if modular_failures == 2 {
                    return Err(InterpError::DecodingFailure);
                }
            }
        }
    }
    decode_direct(&xs, &ys, r)
}

fn reduce_all<F: Field>(xs: &[F], ys: &[F], img: &ModularImage) -> Option<(Vec<PrimeFieldElement>, Vec<PrimeFieldElement>)> {
    let mx = xs.iter().map(|x| x.mod_image(img)).collect::<Option<Vec<_>>>()?;
    let my = ys.iter().map(|y| y.mod_image(img)).collect::<Option<Vec<_>>>()?;
    let mut seen = std::collections::HashSet::with_capacity(mx.len());
    mx.iter().all(|x| seen.insert(x.value())).then_some((mx, my))
}

/// Exact interpolation through `r + 1` positions where the modular decode
/// agrees, accepted only if it meets the threshold over the original field.
fn lift<F: Field>(
    xs: &[F],
    ys: &[F],
    mx: &[PrimeFieldElement],
    my: &[PrimeFieldElement],
    pm: &ExactPolynomial<PrimeFieldElement>,
    r: usize,
) -> Option<ExactPolynomial<F>> {
    let picks: Vec<(F, F)> = (0..xs.len())
        .filter(|&j| pm.eval(&mx[j]) == my[j])
        .take(r + 1)
        .map(|j| (xs[j].clone(), ys[j].clone()))
        .collect();
    if picks.len() < r + 1 {
        return None;
    }
    let p = super::vandermonde_interpolate(&SampleSet::new(picks).ok()?, r).ok()?;
    let agree = xs.iter().zip(ys).filter(|(x, y)| p.eval(x) == **y).count();
    (agree >= bw_threshold(xs.len(), r)).then_some(p)
}

fn powers<F: Field>(x: &F, n: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(n);
    let mut acc = x.one_like();
    for _ in 0..n {
        out.push(acc.clone());
        acc = acc.times(x);
    }
    out
}

fn agreements<F: Field>(p: &ExactPolynomial<F>, xs: &[F], ys: &[F]) -> usize {
    xs.iter().zip(ys).filter(|(x, y)| p.eval(x) == **y).count()
}

fn quotient_candidate<F: Field>(e: &ExactPolynomial<F>, q: &ExactPolynomial<F>, xs: &[F], ys: &[F], r: usize) -> Option<ExactPolynomial<F>> {
    let (p, rem) = q.divrem(e)?;
    if !rem.is_zero() || p.degree().is_some_and(|d| d > r) {
        return None;
    }
    (agreements(&p, xs, ys) >= bw_threshold(xs.len(), r)).then(|| p.with_bound(r).expect("degree checked"))
}

/// Decoding by linear algebra over the samples' own field.
fn decode_direct<F: Field>(xs: &[F], ys: &[F], r: usize) -> Result<ExactPolynomial<F>, InterpError> {
    let k = xs.len();
    let zero = xs[0].zero_like();
    let one = zero.one_like();

    // Monic locator of degree e1: unknowns E_0..E_{e1-1}, Q_0..Q_{r+e1},
    // equations Q(x) - y E'(x) = y x^e1.
    let e1 = (k - r - 1) / 2;
    let cols = e1 + r + e1 + 1;
    let mut rows = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for (x, y) in xs.iter().zip(ys) {
        let pw = powers(x, r + e1 + 1);
        let mut row: Vec<F> = pw[..e1].iter().map(|p| p.times(y).negate()).collect();
        row.extend(pw.iter().cloned());
        rows.push(row);
        rhs.push(y.times(&pw[e1]));
    }
    if let Some(sol) = solve_consistent(&rows, &rhs, cols, &zero) {
        let mut ec = sol[..e1].to_vec();
        ec.push(one.clone());
        let e = ExactPolynomial::from_coeffs(ec)?;
        let q = ExactPolynomial::from_coeffs(sol[e1..].to_vec())?;
        if let Some(p) = quotient_candidate(&e, &q, xs, ys, r) {
            return Ok(p);
        }
    }
    if (k - r) % 2 == 1 {
        return Err(InterpError::DecodingFailure);
    }

    // Boundary radius e = (k - r) / 2: homogeneous system in E_0..E_e,
    // Q_0..Q_{r+e}.
    let e = (k - r) / 2;
    let cols = e + 1 + r + e + 1;
    let rows: Vec<Vec<F>> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let pw = powers(x, r + e + 1);
            let mut row: Vec<F> = pw[..=e].iter().map(|p| p.times(y).negate()).collect();
            row.extend(pw);
            row
        })
        .collect();
    let basis = nullspace(&rows, cols, &zero);
    // A codeword at distance exactly e pins the space to dimension 2.
    if basis.len() != 2 {
        return Err(InterpError::DecodingFailure);
    }
    let split = |v: &Vec<F>| -> Result<(ExactPolynomial<F>, ExactPolynomial<F>), InterpError> {
        Ok((ExactPolynomial::from_coeffs(v[..=e].to_vec())?, ExactPolynomial::from_coeffs(v[e + 1..].to_vec())?))
    };
    let (e_a, q_a) = split(&basis[0])?;
    let (e_b, q_b) = split(&basis[1])?;

    // Locators E_a + lambda E_b vanishing at x_j; `None` stands for E_b.
    let mut votes: HashMap<Option<F>, usize> = HashMap::new();
    let mut everywhere = 0;
    for x in xs {
        let (a, b) = (e_a.eval(x), e_b.eval(x));
        if !b.is_zero() {
            *votes.entry(Some(a.over(&b).expect("b nonzero").negate())).or_default() += 1;
        } else if !a.is_zero() {
            *votes.entry(None).or_default() += 1;
        } else {
            everywhere += 1;
        }
    }
    let mut found: Vec<ExactPolynomial<F>> = Vec::new();
    for (lambda, count) in votes {
        if count + everywhere < e {
            continue;
        }
        let (loc, q) = match &lambda {
            Some(l) => (e_a.add(&e_b.scale(l)), q_a.add(&q_b.scale(l))),
            None => (e_b.clone(), q_b.clone()),
        };
        if let Some(p) = quotient_candidate(&loc, &q, xs, ys, r) {
            if !found.contains(&p) {
                found.push(p);
            }
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("one candidate")),
        _ => Err(InterpError::DecodingFailure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ComplexRational, Rational};
    use crate::interp::vandermonde_interpolate;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P61: u64 = (1 << 61) - 1;

    fn fp(v: u64, q: u64) -> PrimeFieldElement {
        PrimeFieldElement::new(v, q)
    }

    fn random_poly(rng: &mut ChaCha8Rng, r: usize, q: u64) -> ExactPolynomial<PrimeFieldElement> {
        ExactPolynomial::from_coeffs((0..=r).map(|_| fp(rng.gen_range(0..q), q)).collect()).unwrap()
    }

    #[test]
    fn threshold_values() {
        assert_eq!(bw_threshold(7, 2), 5);
        assert_eq!(bw_threshold(3, 2), 3);
        assert_eq!(bw_threshold(41, 18), 30);
        assert_eq!(bw_threshold(120, 12), 66);
    }

    #[test]
    fn small_field_two_errors() {
        let q = 7;
        let xs: Vec<_> = (0..7).map(|v| fp(v, q)).collect();
        let mut ys: Vec<_> = xs.iter().map(|x| x.times(x).plus(&fp(1, q))).collect();
        ys[1] = ys[1].plus(&fp(3, q));
        ys[5] = ys[5].plus(&fp(1, q));
        let s = SampleSet::from_xy(xs.clone(), ys).unwrap();
        let p = berlekamp_welch(&s, 2).unwrap();
        assert_eq!(p.coeffs(), &[fp(1, q), fp(0, q), fp(1, q)]);
        for x in &xs {
            assert_eq!(p.eval(x), x.times(x).plus(&fp(1, q)));
        }
    }

    #[test]
    fn zero_errors_match_interpolation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for r in 0..8 {
            let truth = random_poly(&mut rng, r, 101);
            let xs: Vec<_> = (1..=r as u64 + 1).map(|v| fp(v, 101)).collect();
            let ys = xs.iter().map(|x| truth.eval(x)).collect();
            let s = SampleSet::from_xy(xs, ys).unwrap();
            assert_eq!(berlekamp_welch(&s, r).unwrap(), vandermonde_interpolate(&s, r).unwrap());
        }
    }

    #[test]
    fn random_recovery_below_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let r = rng.gen_range(0..10);
            let k = rng.gen_range(r + 1..=r + 20);
            let e = rng.gen_range(0..=(k - r - 1) / 2);
            let truth = random_poly(&mut rng, r, P61);
            let xs: Vec<_> = sample(&mut rng, 1 << 40, k).into_iter().map(|v| fp(v as u64, P61)).collect();
            let mut ys: Vec<_> = xs.iter().map(|x| truth.eval(x)).collect();
            for j in sample(&mut rng, k, e) {
                ys[j] = ys[j].plus(&fp(rng.gen_range(1..P61), P61));
            }
            let s = SampleSet::from_xy(xs, ys).unwrap();
            assert_eq!(berlekamp_welch(&s, r).unwrap(), truth.clone().with_bound(r).unwrap());
        }
    }

    #[test]
    fn boundary_radius_with_generic_errors() {
        // k - r even and exactly (k - r)/2 random corruptions, e >= 2.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let r = rng.gen_range(0..8);
            let e = rng.gen_range(2..6);
            let k = r + 2 * e;
            let truth = random_poly(&mut rng, r, P61);
            let xs: Vec<_> = (1..=k as u64).map(|v| fp(v, P61)).collect();
            let mut ys: Vec<_> = xs.iter().map(|x| truth.eval(x)).collect();
            for j in sample(&mut rng, k, e) {
                ys[j] = fp(rng.gen_range(0..P61), P61);
            }
            let s = SampleSet::from_xy(xs, ys).unwrap();
            assert_eq!(berlekamp_welch(&s, r).unwrap(), truth.clone().with_bound(r).unwrap());
        }
    }

    #[test]
    fn single_error_at_k_equal_r_plus_two_is_ambiguous() {
        // Every r of the r + 1 clean points together with the corrupted one
        // spans another polynomial with r + 1 = (k + r)/2 agreements.
        let q = 101;
        let xs: Vec<_> = (1..=5).map(|v| fp(v, q)).collect();
        let mut ys: Vec<_> = xs.iter().map(|x| x.times(x)).collect();
        ys[2] = fp(0, q);
        let s = SampleSet::from_xy(xs, ys).unwrap();
        assert_eq!(berlekamp_welch(&s, 3), Err(InterpError::DecodingFailure));
    }

    #[test]
    fn beyond_radius_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let r = rng.gen_range(0..10);
            let k = rng.gen_range(r + 1..=r + 20);
            let e = (k - r) / 2 + 1;
            if e > k {
                continue;
            }
            let truth = random_poly(&mut rng, r, P61);
            let xs: Vec<_> = (1..=k as u64).map(|v| fp(v, P61)).collect();
            let mut ys: Vec<_> = xs.iter().map(|x| truth.eval(x)).collect();
            for j in sample(&mut rng, k, e) {
                ys[j] = ys[j].plus(&fp(rng.gen_range(1..P61), P61));
            }
            let s = SampleSet::from_xy(xs, ys).unwrap();
            match berlekamp_welch(&s, r) {
                Err(InterpError::DecodingFailure) => {}
                Ok(p) => assert!(s.agreements(&p) >= bw_threshold(k, r)),
                Err(other) => panic!("unexpected {other}"),
            }
        }
    }

    fn gauss(rng: &mut ChaCha8Rng) -> ComplexRational {
        let mut part = || Rational::new(rng.gen_range(-1i64 << 40..1i64 << 40), 1 << rng.gen_range(0..30)).unwrap();
        ComplexRational::new(part(), part())
    }

    #[test]
    fn gaussian_rationals_through_modular_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for trial in 0..20 {
            let r = 6 + trial % 5;
            let k = 3 * r + 2;
            let e = (k - r - 1) / 2;
            let truth = ExactPolynomial::from_coeffs((0..=r).map(|_| gauss(&mut rng)).collect()).unwrap();
            let xs: Vec<_> = (1..=k as i64).map(ComplexRational::from_int).collect();
            let mut ys: Vec<_> = xs.iter().map(|x| truth.eval(x)).collect();
            for j in sample(&mut rng, k, e) {
                ys[j] = ys[j].plus(&gauss(&mut rng));
            }
            let s = SampleSet::from_xy(xs.clone(), ys.clone()).unwrap();
            let got = berlekamp_welch(&s, r).unwrap();
            assert_eq!(got, truth.clone().with_bound(r).unwrap());
            assert_eq!(decode_direct(&xs, &ys, r).unwrap(), got);
        }
    }

    #[test]
    fn needs_more_samples_than_degree() {
        let s = SampleSet::from_xy(vec![fp(1, 7), fp(2, 7)], vec![fp(0, 7), fp(0, 7)]).unwrap();
        assert!(matches!(berlekamp_welch(&s, 2), Err(InterpError::InsufficientSamples { .. })));
    }
}

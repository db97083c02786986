//! Interpolation from `r + 1` noisy answers and its error certificate.
//!
//! Let `p = q~ - q` be the interpolation error and `Delta` the promised
//! per-component noise, so `|Re p|, |Im p| <= Delta` at the nodes. The nodes
//! `t_i = i eps / r` are mapped affinely onto the equidistant set
//! `x_i = -1 + (2i + 1)/(r + 1)` by `x = r (2t/eps - 1) / (r + 1)`. The
//! interpolation bound (with constant `C`) then controls `Re p` and `Im p` on
//! `|x| <= R/2`, `R = sqrt(1 - r^2/(r+1)^2)`; its value is largest at the
//! ends, `|x| = R/2`. Extrapolation runs in `y = x / x(1)`, which places
//! `t = 1` at `y = 1` and the controlled interval at `|y| <= R / (2 x(1))`.
//! Combining real and imaginary parts costs a factor `sqrt 2`.

use serde::Serialize;

use super::exact::{Outcome, Recovered, RepeatRecord, ReductionReport, Vote};
use super::{repeat_rng, sample_peps_data, BlendPath, DistributionSpec, Oracle, Quantity, ReductionConfig, ReductionError, Variant};
use crate::arith::{ComplexRational, Rational};
use crate::interp::{paturi_bound, rakhmanov_bound, rakhmanov_radius, vandermonde_interpolate, Magnitude, SampleSet};
use crate::tensor::PepsData;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoisyCertificate {
    /// Promised per-component noise.
    pub noise: Magnitude,
    pub rakhmanov_c: f64,
    /// Admissible radius in the normalized variable.
    pub rakhmanov_radius: f64,
    /// Interpolation factor on the inner half of that radius.
    pub rakhmanov_factor: Magnitude,
    /// Half-width of the controlled interval after rescaling `t = 1` to 1.
    pub paturi_eps: f64,
    /// Upper bound on `|q~(1) - q(1)|`.
    pub bound: Magnitude,
}

impl NoisyCertificate {
    /// Whether `|error| <= bound`, judged with an upper estimate of `|error|`.
    pub fn covers(&self, error: &ComplexRational) -> bool {
        let m = Magnitude::of_complex(error);
        m.is_zero() || m.log2() <= self.bound.log2()
    }
}

pub fn noisy_certificate(r: usize, eps: &Rational, noise: Magnitude, c: f64) -> Result<NoisyCertificate, ReductionError> {
    if r == 0 {
        return Err(ReductionError::InvalidConfig("degree bound must be positive".into()));
    }
    let k = r + 1;
    let radius = rakhmanov_radius(k, r);
    let factor = rakhmanov_bound(k, r, radius / 2.0, c)?;
    let eps = eps.to_f64();
    let x1 = r as f64 * (2.0 / eps - 1.0) / (r + 1) as f64;
    // shrink slightly: a smaller interval only weakens the claim
    let paturi_eps = radius / (2.0 * x1) * (1.0 - 1e-12);
    let inner = noise.mul(&factor).mul(&Magnitude::from_log2(0.5));
    let bound = paturi_bound(inner, r, paturi_eps)?;
    Ok(NoisyCertificate { noise, rakhmanov_c: c, rakhmanov_radius: radius, rakhmanov_factor: factor, paturi_eps, bound })
}

/// One pass: `r + 1` equidistant queries on `[0, eps]`, exact interpolation
/// through the (noisy) answers, evaluation at `t = 1`, plus the certificate.
pub fn reduce_noisy<O: Oracle>(
    target: &PepsData<ComplexRational>,
    dist: &DistributionSpec,
    mut oracle: O,
    cfg: &ReductionConfig,
    seed: u64,
) -> Result<ReductionReport, ReductionError> {
    let cfg = ReductionConfig { variant: Variant::Noisy, ..cfg.clone() };
    let (plan, eps) = cfg.resolve(target.bond(), target.d(), target.n())?;
    let r = ReductionConfig::degree(target.n());
    let step = plan.step(&eps);
    let us = plan.abscissae();
    let ts: Vec<Rational> = us.iter().map(|&u| &step * &Rational::from_int(u as i64)).collect();

    let q = sample_peps_data(target, dist, &mut repeat_rng(seed, 0))?;
    let path = BlendPath::new(target.clone(), q)?;
    let mut answers = Vec::with_capacity(ts.len());
    let mut correct = Some(0);
    for t in &ts {
        let ans = oracle.answer(&path.at(&ComplexRational::real(t.clone())), Quantity::Norm)?;
        correct = match (correct, ans.correct) {
            (Some(c), Some(ok)) => Some(c + usize::from(ok)),
            _ => None,
        };
        answers.push(ans.value);
    }
    let xs = us.iter().map(|&u| ComplexRational::from_int(u as i64)).collect();
    let p = vandermonde_interpolate(&SampleSet::from_xy(xs, answers.clone())?, r)?;
    let value = p.eval(&ComplexRational::real(step.recip().expect("eps is positive")));

    let noise = cfg.noise_bits.map_or(Magnitude::zero(), |b| Magnitude::pow2(-i64::from(b)));
    let certificate = noisy_certificate(r, &eps, noise, cfg.rakhmanov_c)?;
    let record = RepeatRecord {
        index: 0,
        answers,
        correct_answers: correct,
        recovered: Some(Recovered::Polynomial(p)),
        value: Some(value.clone()),
        failure: None,
    };
    Ok(ReductionReport {
        variant: Variant::Noisy,
        seed,
        degree_bound: r,
        eps,
        sample_points: ts,
        repeats: vec![record],
        votes: vec![Vote { value: value.clone(), count: 1 }],
        outcome: Outcome::Recovered,
        value: Some(value),
        certificate: Some(certificate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{epsilon_for, ExactOracle};
    use crate::tensor::{build_cluster_peps, contract_norm, LatticeSpec, Limits};
    use std::f64::consts::LOG2_E;

    #[test]
    fn exact_oracle_is_exact() {
        let target = build_cluster_peps(LatticeSpec::new(2, 2));
        let report = reduce_noisy(&target, &DistributionSpec::default(), ExactOracle::default(), &ReductionConfig::new(Variant::Noisy), 3).unwrap();
        assert_eq!(report.sample_points.len(), 9);
        assert_eq!(report.value, Some(contract_norm(&target, &Limits::default()).unwrap()));
        assert!(report.certificate.unwrap().bound.is_zero());
    }

    #[test]
    fn certificate_composition() {
        let (_, eps) = epsilon_for(2, 2, 4);
        let noise = Magnitude::pow2(-128);
        let cert = noisy_certificate(8, &eps, noise, 1.0).unwrap();
        let radius = (1.0f64 - 64.0 / 81.0).sqrt();
        assert!((cert.rakhmanov_radius - radius).abs() < 1e-15);
        let direct = rakhmanov_bound(9, 8, radius / 2.0, 1.0).unwrap();
        assert_eq!(cert.rakhmanov_factor, direct);
        // the controlled interval is a strict part of [0, eps] in t units
        assert!(cert.paturi_eps < eps.to_f64());
        let expected = -128.0 + 0.5 + direct.log2() + 16.0 * (1.0 + 1.0 / cert.paturi_eps) * LOG2_E;
        assert!((cert.bound.log2() - expected).abs() < 1e-6 * expected.abs());
        assert!(cert.covers(&ComplexRational::zero()));
    }
}

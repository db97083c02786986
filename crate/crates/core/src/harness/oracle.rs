use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::arith::{ComplexRational, Field, PrimeFieldElement, Rational};
use crate::permanent::{permanent_bruteforce, PermanentAnswer, PermanentError, PermanentOracle, SquareMatrix};
use crate::reduction::{exact_value, Oracle, OracleAnswer, Quantity, ReductionError};
use crate::tensor::{Limits, PepsData};

/// What a failing query returns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WrongValueRule {
    /// Truth plus a fresh uniformly random nonzero offset.
    #[default]
    RandomOffset,
    /// Truth plus one, every time. Lies of this kind are mutually
    /// consistent, so a large enough subset of them decodes to a wrong
    /// polynomial instead of failing.
    FixedOffset,
    /// Zero.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum OracleMode {
    AlwaysCorrect,
    /// Each query fails independently with probability `p`.
    IidFailure { p: f64 },
    /// Exactly `floor(j * fraction)` of the first `j` queries fail, spread
    /// evenly, for every `j`.
    AdversarialSubset {
        fraction: f64,
        #[serde(default)]
        rule: WrongValueRule,
    },
    /// Every answer is perturbed by at most `2^-bits` in each component.
    AdditiveNoise { bits: u32 },
}

impl OracleMode {
    /// Nominal failure probability, 0 for the exact and noisy modes.
    pub fn failure_rate(&self) -> f64 {
        match *self {
            OracleMode::IidFailure { p } => p,
            OracleMode::AdversarialSubset { fraction, .. } => fraction,
            OracleMode::AlwaysCorrect | OracleMode::AdditiveNoise { .. } => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OraclePolicy {
    #[serde(flatten)]
    pub mode: OracleMode,
    #[serde(default)]
    pub seed: u64,
}

impl OraclePolicy {
    pub fn new(mode: OracleMode, seed: u64) -> Self {
        OraclePolicy { mode, seed }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let unit = |x: f64, what: &str| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(HarnessError::ConfigInvalid(format!("{what} must lie in [0, 1], got {x}")))
            }
        };
        match self.mode {
            OracleMode::AlwaysCorrect => Ok(()),
            OracleMode::IidFailure { p } => unit(p, "failure probability"),
            OracleMode::AdversarialSubset { fraction, .. } => unit(fraction, "failure fraction"),
            OracleMode::AdditiveNoise { bits: 0 } => Err(HarnessError::ConfigInvalid("noise bits must be at least 1".into())),
            OracleMode::AdditiveNoise { .. } => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleAudit {
    pub queries: usize,
    /// Answers that differ from the truth.
    pub wrong: usize,
}

/// Fields the faulty oracle knows how to corrupt.
pub trait Corruptible: Field {
    fn random_nonzero<R: Rng + ?Sized>(like: &Self, rng: &mut R) -> Self;
    /// A perturbation of at most `2^-bits` per component, if the field has a
    /// notion of size.
    fn small_noise<R: Rng + ?Sized>(like: &Self, bits: u32, rng: &mut R) -> Option<Self>;
}

/// Resolution of offsets and noise below their scale.
const OFFSET_BITS: u32 = 20;

impl Corruptible for ComplexRational {
    fn random_nonzero<R: Rng + ?Sized>(_like: &Self, rng: &mut R) -> Self {
        let span = 1i64 << OFFSET_BITS;
        loop {
            let (a, b) = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
            if a != 0 || b != 0 {
                let s = Rational::pow2(-(OFFSET_BITS as i32 / 2));
                return ComplexRational::from_ints(a, b).scale(&s);
            }
        }
    }

    fn small_noise<R: Rng + ?Sized>(_like: &Self, bits: u32, rng: &mut R) -> Option<Self> {
        let span = 1i64 << OFFSET_BITS;
        let s = Rational::pow2(-((bits + OFFSET_BITS) as i32));
        Some(ComplexRational::from_ints(rng.gen_range(-span..=span), rng.gen_range(-span..=span)).scale(&s))
    }
}

impl Corruptible for PrimeFieldElement {
    fn random_nonzero<R: Rng + ?Sized>(like: &Self, rng: &mut R) -> Self {
        PrimeFieldElement::new(rng.gen_range(1..like.modulus()), like.modulus())
    }

    fn small_noise<R: Rng + ?Sized>(_like: &Self, _bits: u32, _rng: &mut R) -> Option<Self> {
        None
    }
}

/// Wraps an exact engine and corrupts its answers according to a policy.
/// Serves both the PEPS quantities and the permanent.
#[derive(Clone, Debug)]
pub struct FaultyOracle {
    policy: OraclePolicy,
    limits: Limits,
    rng: ChaCha8Rng,
    audit: OracleAudit,
}

pub fn make_faulty_oracle(policy: OraclePolicy, limits: Limits) -> Result<FaultyOracle, HarnessError> {
    policy.validate()?;
    Ok(FaultyOracle { policy, limits, rng: ChaCha8Rng::seed_from_u64(policy.seed), audit: OracleAudit::default() })
}

impl FaultyOracle {
    pub fn policy(&self) -> &OraclePolicy {
        &self.policy
    }

    pub fn audit(&self) -> OracleAudit {
        self.audit
    }

    /// Turns the true value into the answer actually returned.
    pub fn corrupt<F: Corruptible>(&mut self, truth: F) -> Result<(F, bool), HarnessError> {
        let j = self.audit.queries;
        self.audit.queries += 1;
        let (fail, rule) = match self.policy.mode {
            OracleMode::AlwaysCorrect => (false, WrongValueRule::RandomOffset),
            OracleMode::IidFailure { p } => (self.rng.gen_bool(p), WrongValueRule::RandomOffset),
            OracleMode::AdversarialSubset { fraction, rule } => {
                ((((j + 1) as f64) * fraction).floor() > ((j as f64) * fraction).floor(), rule)
            }
            OracleMode::AdditiveNoise { bits } => {
                let noise = F::small_noise(&truth, bits, &mut self.rng)
                    .ok_or_else(|| HarnessError::ConfigInvalid("additive noise needs a field with a size".into()))?;
                let exact = noise.is_zero();
                self.audit.wrong += usize::from(!exact);
                return Ok((truth.plus(&noise), exact));
            }
        };
        if !fail {
            return Ok((truth, true));
        }
        let value = match rule {
            WrongValueRule::RandomOffset => truth.plus(&F::random_nonzero(&truth, &mut self.rng)),
            WrongValueRule::FixedOffset => truth.plus(&truth.one_like()),
            WrongValueRule::Zero => truth.zero_like(),
        };
        let ok = value == truth;
        self.audit.wrong += usize::from(!ok);
        Ok((value, ok))
    }
}

impl Oracle for FaultyOracle {
    fn answer(&mut self, instance: &PepsData<ComplexRational>, quantity: Quantity<'_>) -> Result<OracleAnswer, ReductionError> {
        let truth = exact_value(instance, quantity, &self.limits)?;
        let (value, ok) = self.corrupt(truth).map_err(|e| ReductionError::InvalidConfig(e.to_string()))?;
        Ok(OracleAnswer { value, correct: Some(ok) })
    }
}

impl PermanentOracle for FaultyOracle {
    fn permanent(&mut self, m: &SquareMatrix<PrimeFieldElement>) -> Result<PermanentAnswer, PermanentError> {
        let truth = permanent_bruteforce(m)?;
        let (value, ok) = self.corrupt(truth).map_err(|e| PermanentError::InvalidConfig(e.to_string()))?;
        Ok(PermanentAnswer { value, correct: Some(ok) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::Magnitude;
    use crate::tensor::{build_cluster_peps, LatticeSpec};

    fn oracle(mode: OracleMode) -> FaultyOracle {
        make_faulty_oracle(OraclePolicy::new(mode, 7), Limits::default()).unwrap()
    }

    #[test]
    fn always_correct_is_the_engine() {
        let peps = build_cluster_peps(LatticeSpec::new(2, 2));
        let mut o = oracle(OracleMode::AlwaysCorrect);
        let ans = o.answer(&peps, Quantity::Norm).unwrap();
        assert_eq!(ans.value, crate::tensor::contract_norm(&peps, &Limits::default()).unwrap());
        assert_eq!(ans.correct, Some(true));
        assert_eq!(o.audit(), OracleAudit { queries: 1, wrong: 0 });
    }

    #[test]
    fn iid_failure_rate_within_three_sigma() {
        let mut o = oracle(OracleMode::IidFailure { p: 0.25 });
        let truth = ComplexRational::from_ints(3, -1);
        let n = 10_000;
        let mut wrong = 0;
        for _ in 0..n {
            let (v, ok) = o.corrupt(truth.clone()).unwrap();
            assert_eq!(ok, v == truth);
            wrong += usize::from(!ok);
        }
        let sigma = (0.25f64 * 0.75 / n as f64).sqrt();
        assert!((wrong as f64 / n as f64 - 0.25).abs() <= 3.0 * sigma, "{wrong}");
        assert_eq!(o.audit().wrong, wrong);
    }

    #[test]
    fn additive_noise_is_bounded() {
        let mut o = oracle(OracleMode::AdditiveNoise { bits: 64 });
        let truth = ComplexRational::from_ints(1, 2);
        let limit = Rational::pow2(-64);
        for _ in 0..1000 {
            let (v, _) = o.corrupt(truth.clone()).unwrap();
            let e = v.minus(&truth);
            assert!(e.re.abs() <= limit && e.im.abs() <= limit);
            assert!(Magnitude::of_complex(&e).log2() <= -63.4);
        }
    }

    #[test]
    fn adversarial_subset_is_exact_and_even() {
        let mut o = oracle(OracleMode::AdversarialSubset { fraction: 0.3, rule: WrongValueRule::FixedOffset });
        let truth = PrimeFieldElement::new(5, 101);
        let flags: Vec<bool> = (0..100).map(|_| o.corrupt(truth.clone()).unwrap().1).collect();
        assert_eq!(flags.iter().filter(|ok| !**ok).count(), 30);
        for j in [10, 20, 33, 70] {
            assert_eq!(flags[..j].iter().filter(|ok| !**ok).count(), (j as f64 * 0.3).floor() as usize);
        }
    }

    #[test]
    fn prime_field_offsets_are_nonzero() {
        let mut o = oracle(OracleMode::IidFailure { p: 1.0 });
        let truth = PrimeFieldElement::new(0, 3);
        for _ in 0..200 {
            assert_ne!(o.corrupt(truth.clone()).unwrap().0, truth);
        }
        let mut noisy = oracle(OracleMode::AdditiveNoise { bits: 8 });
        assert!(noisy.corrupt(truth).is_err());
    }

    #[test]
    fn policy_validation_and_json() {
        assert!(OraclePolicy::new(OracleMode::IidFailure { p: 1.5 }, 0).validate().is_err());
        assert!(OraclePolicy::new(OracleMode::AdditiveNoise { bits: 0 }, 0).validate().is_err());
        let p = OraclePolicy::new(OracleMode::AdversarialSubset { fraction: 0.1, rule: WrongValueRule::Zero }, 3);
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"adversarial-subset\""), "{text}");
        assert_eq!(serde_json::from_str::<OraclePolicy>(&text).unwrap(), p);
        let parsed: OraclePolicy = serde_json::from_str(r#"{"mode":"iid-failure","p":0.2}"#).unwrap();
        assert_eq!(parsed, OraclePolicy::new(OracleMode::IidFailure { p: 0.2 }, 0));
    }
}

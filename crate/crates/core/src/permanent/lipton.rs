use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{permanent_bruteforce, PermanentError, SquareMatrix};
use crate::arith::{Field, PrimeFieldElement};
use crate::interp::{berlekamp_welch, SampleSet};
use crate::reduction::{majority_vote, repeat_rng, vote_decided, Outcome, Vote};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermanentAnswer {
    pub value: PrimeFieldElement,
    pub correct: Option<bool>,
}

/// A (possibly unreliable) permanent machine over F_q.
pub trait PermanentOracle {
    fn permanent(&mut self, m: &SquareMatrix<PrimeFieldElement>) -> Result<PermanentAnswer, PermanentError>;
}

impl<T: PermanentOracle + ?Sized> PermanentOracle for &mut T {
    fn permanent(&mut self, m: &SquareMatrix<PrimeFieldElement>) -> Result<PermanentAnswer, PermanentError> {
        (**self).permanent(m)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactPermanentOracle;

impl PermanentOracle for ExactPermanentOracle {
    fn permanent(&mut self, m: &SquareMatrix<PrimeFieldElement>) -> Result<PermanentAnswer, PermanentError> {
        Ok(PermanentAnswer { value: permanent_bruteforce(m)?, correct: Some(true) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LiptonConfig {
    /// Queries per repeat; defaults to `4n`.
    pub k: Option<usize>,
    pub repeats: usize,
    pub early_stop: bool,
}

impl Default for LiptonConfig {
    fn default() -> Self {
        LiptonConfig { k: None, repeats: 15, early_stop: true }
    }
}

impl LiptonConfig {
    /// Resolved query count for dimension `n` over F_q. The `k` abscissae
    /// are `1..=k`, so `q > k` is required.
    pub fn resolve(&self, n: usize, q: u64) -> Result<usize, PermanentError> {
        let k = self.k.unwrap_or(4 * n);
        if k <= n {
            return Err(PermanentError::InvalidConfig(format!("k = {k} must exceed n = {n}")));
        }
        if q <= k as u64 {
            return Err(PermanentError::InvalidConfig(format!("modulus q = {q} must exceed k = {k}")));
        }
        if self.repeats == 0 {
            return Err(PermanentError::InvalidConfig("repeats must be at least 1".into()));
        }
        Ok(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiptonReport {
    pub n: usize,
    pub modulus: u64,
    pub k: usize,
    pub seed: u64,
    /// Decoded `perm(A)` per repeat run; `None` where decoding failed.
    pub decoded: Vec<Option<u64>>,
    pub correct_answers: Vec<Option<usize>>,
    pub votes: Vec<Vote<u64>>,
    pub outcome: Outcome,
    pub value: Option<u64>,
}

impl LiptonReport {
    pub fn success(&self) -> bool {
        self.value.is_some()
    }

    pub fn into_value(self) -> Result<PrimeFieldElement, PermanentError> {
        match (self.outcome, self.value) {
            (Outcome::Recovered, Some(v)) => Ok(PrimeFieldElement::new(v, self.modulus)),
            (Outcome::MajorityTie, _) => Err(PermanentError::MajorityTie),
            _ => Err(PermanentError::AllRepeatsFailedDecoding),
        }
    }

    pub fn to_json(&self) -> Value {
        json!(self)
    }
}

/// Recovers `perm(A)` from an oracle that is right on most uniformly random
/// matrices. Each repeat draws a fresh uniform `B`, queries `perm(A + t B)`
/// at `t = 1..=k`, decodes the degree-`n` polynomial and reads off its
/// constant term. The repeats are combined by plurality vote.
pub fn lipton_reduce<O: PermanentOracle>(
    a: &SquareMatrix<PrimeFieldElement>,
    mut oracle: O,
    cfg: &LiptonConfig,
    seed: u64,
) -> Result<LiptonReport, PermanentError> {
    let n = a.n();
    let like = a.get(0, 0).clone();
    let q = like.modulus();
    let k = cfg.resolve(n, q)?;
    let ts: Vec<PrimeFieldElement> = (1..=k as u64).map(|t| PrimeFieldElement::new(t, q)).collect();

    let mut values: Vec<Option<u64>> = Vec::with_capacity(cfg.repeats);
    let mut correct_answers = Vec::with_capacity(cfg.repeats);
    for index in 0..cfg.repeats {
        let mut rng = repeat_rng(seed, index as u64);
        let b = SquareMatrix::from_fn(n, &like, |_, _| PrimeFieldElement::new(rng.gen_range(0..q), q))?;
        let mut answers = Vec::with_capacity(k);
        let mut correct = Some(0);
        for t in &ts {
            let ans = oracle.permanent(&a.line(&b, t)?)?;
            correct = match (correct, ans.correct) {
                (Some(c), Some(ok)) => Some(c + usize::from(ok)),
                _ => None,
            };
            answers.push(ans.value);
        }
        correct_answers.push(correct);
        let samples = SampleSet::from_xy(ts.clone(), answers)?;
        values.push(berlekamp_welch(&samples, n).ok().map(|p| p.eval(&like.zero_like()).value()));
        if cfg.early_stop && vote_decided(&values, cfg.repeats - index - 1) {
            break;
        }
    }
    let (votes, outcome, value) = majority_vote(&values);
    Ok(LiptonReport { n, modulus: q, k, seed, decoded: values, correct_answers, votes, outcome, value })
}

use serde::Serialize;
use serde_json::{json, Value};

use super::noisy::NoisyCertificate;
use super::{
    repeat_rng, sample_peps_data, BlendPath, DistributionSpec, Oracle, Quantity, ReductionConfig, ReductionError, SamplePlan,
    Variant,
};
use crate::arith::{ComplexRational, Rational};
use crate::interp::{berlekamp_welch, reconstruct_rational, ExactPolynomial, RationalFunction, SampleSet};
use crate::tensor::{LocalObservable, PepsData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovered {
    Polynomial(ExactPolynomial<ComplexRational>),
    Rational(RationalFunction<ComplexRational>),
}

impl Recovered {
    pub fn to_json(&self) -> Value {
        match self {
            Recovered::Polynomial(p) => json!({ "polynomial": p.to_json() }),
            Recovered::Rational(f) => json!({ "rational": f.to_json() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepeatRecord {
    pub index: usize,
    pub answers: Vec<ComplexRational>,
    /// Number of exactly correct answers, when the oracle reports it.
    pub correct_answers: Option<usize>,
    pub recovered: Option<Recovered>,
    /// The recovered function at `t = 1`.
    pub value: Option<ComplexRational>,
    pub failure: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Recovered,
    MajorityTie,
    AllRepeatsFailedDecoding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vote<T = ComplexRational> {
    pub value: T,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub variant: Variant,
    pub seed: u64,
    pub degree_bound: usize,
    pub eps: Rational,
    /// Queried blend parameters `t_i`.
    pub sample_points: Vec<Rational>,
    pub repeats: Vec<RepeatRecord>,
    /// Tally sorted by decreasing count.
    pub votes: Vec<Vote>,
    pub outcome: Outcome,
    /// Present iff the outcome is `Recovered`.
    pub value: Option<ComplexRational>,
    pub certificate: Option<NoisyCertificate>,
}

impl ReductionReport {
    pub fn success(&self) -> bool {
        self.value.is_some()
    }

    pub fn into_value(self) -> Result<ComplexRational, ReductionError> {
        match self.outcome {
            Outcome::Recovered => Ok(self.value.expect("value present on success")),
            Outcome::MajorityTie => Err(ReductionError::MajorityTie),
            Outcome::AllRepeatsFailedDecoding => Err(ReductionError::AllRepeatsFailedDecoding),
        }
    }

    /// Full report; `with_answers` adds every oracle answer.
    pub fn to_json(&self, with_answers: bool) -> Value {
        let repeats: Vec<Value> = self
            .repeats
            .iter()
            .map(|rep| {
                let mut v = json!({
                    "index": rep.index,
                    "correct_answers": rep.correct_answers,
                    "recovered": rep.recovered.as_ref().map(Recovered::to_json),
                    "value": rep.value,
                    "failure": rep.failure,
                });
                if with_answers {
                    v["answers"] = json!(rep.answers);
                }
                v
            })
            .collect();
        json!({
            "variant": self.variant,
            "seed": self.seed,
            "degree_bound": self.degree_bound,
            "eps": self.eps,
            "sample_points": self.sample_points,
            "repeats": repeats,
            "votes": self.votes,
            "outcome": self.outcome,
            "success": self.success(),
            "value": self.value,
            "certificate": self.certificate,
        })
    }
}

/// Plurality vote with exact equality over the decoded values (`None` for
/// failed repeats). Returns the sorted tally and the winner, if unique.
pub fn majority_vote<T: PartialEq + Clone>(values: &[Option<T>]) -> (Vec<Vote<T>>, Outcome, Option<T>) {
    let mut votes: Vec<Vote<T>> = Vec::new();
    for v in values.iter().flatten() {
        match votes.iter_mut().find(|e| &e.value == v) {
            Some(e) => e.count += 1,
            None => votes.push(Vote { value: v.clone(), count: 1 }),
        }
    }
    votes.sort_by(|a, b| b.count.cmp(&a.count));
    match votes.as_slice() {
        [] => (votes, Outcome::AllRepeatsFailedDecoding, None),
        [a, b, ..] if a.count == b.count => (votes, Outcome::MajorityTie, None),
        [a, ..] => {
            let w = a.value.clone();
            (votes, Outcome::Recovered, Some(w))
        }
    }
}

/// True once the leader's lead exceeds the number of repeats still to run,
/// so the final plurality winner is already fixed.
pub fn vote_decided<T: PartialEq + Clone>(values: &[Option<T>], remaining: usize) -> bool {
    let (votes, _, _) = majority_vote(values);
    match votes.as_slice() {
        [] => false,
        [a] => a.count > remaining,
        [a, b, ..] => a.count > b.count + remaining,
    }
}

fn decode(variant: Variant, samples: &SampleSet<ComplexRational>, r: usize, at: &ComplexRational) -> Result<(Recovered, ComplexRational), ReductionError> {
    if variant == Variant::Nev {
        let f = reconstruct_rational(samples, r)?.function;
        let v = f.eval(at).ok_or(ReductionError::ZeroDenominatorAtOne)?;
        Ok((Recovered::Rational(f), v))
    } else {
        let p = berlekamp_welch(samples, r)?;
        let v = p.eval(at);
        Ok((Recovered::Polynomial(p), v))
    }
}

fn run<O: Oracle>(
    variant: Variant,
    target: &PepsData<ComplexRational>,
    quantity: Quantity<'_>,
    dist: &DistributionSpec,
    mut oracle: O,
    cfg: &ReductionConfig,
    seed: u64,
) -> Result<ReductionReport, ReductionError> {
    let cfg = ReductionConfig { variant, ..cfg.clone() };
    let (plan, eps) = cfg.resolve(target.bond(), target.d(), target.n())?;
    let r = ReductionConfig::degree(target.n());
    let step = plan.step(&eps);
    let us = plan.abscissae();
    let at = ComplexRational::real(step.recip().expect("eps is positive"));
    let ts: Vec<Rational> = us.iter().map(|&u| &step * &Rational::from_int(u as i64)).collect();
    debug_assert!(matches!(plan, SamplePlan::Exact { .. }));

    let mut records = Vec::with_capacity(cfg.repeats);
    let mut values = Vec::with_capacity(cfg.repeats);
    for index in 0..cfg.repeats {
        let q = sample_peps_data(target, dist, &mut repeat_rng(seed, index as u64))?;
        let path = BlendPath::new(target.clone(), q)?;
        let mut answers = Vec::with_capacity(ts.len());
        let mut correct = Some(0);
        for t in &ts {
            let ans = oracle.answer(&path.at(&ComplexRational::real(t.clone())), quantity)?;
            correct = match (correct, ans.correct) {
                (Some(c), Some(ok)) => Some(c + usize::from(ok)),
                _ => None,
            };
            answers.push(ans.value);
        }
        let xs = us.iter().map(|&u| ComplexRational::from_int(u as i64)).collect();
        let samples = SampleSet::from_xy(xs, answers.clone())?;
        let (recovered, value, failure) = match decode(variant, &samples, r, &at) {
            Ok((rec, v)) => (Some(rec), Some(v), None),
            Err(e @ (ReductionError::Interp(_) | ReductionError::ZeroDenominatorAtOne)) => (None, None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        values.push(value.clone());
        records.push(RepeatRecord { index, answers, correct_answers: correct, recovered, value, failure });
        if cfg.early_stop && vote_decided(&values, cfg.repeats - index - 1) {
            break;
        }
    }
    let (votes, outcome, value) = majority_vote(&values);
    Ok(ReductionReport {
        variant,
        seed,
        degree_bound: r,
        eps,
        sample_points: ts,
        repeats: records,
        votes,
        outcome,
        value,
        certificate: None,
    })
}

/// Recovers `<psi|psi>` of `target` from an oracle that is right on most
/// blended instances: per repeat a fresh random `Q`, `k` queries along the
/// blend path, Berlekamp–Welch decoding, evaluation at `t = 1`; then a
/// plurality vote over repeats.
pub fn reduce_exact<O: Oracle>(
    target: &PepsData<ComplexRational>,
    dist: &DistributionSpec,
    oracle: O,
    cfg: &ReductionConfig,
    seed: u64,
) -> Result<ReductionReport, ReductionError> {
    run(Variant::Exact, target, Quantity::Norm, dist, oracle, cfg, seed)
}

/// As [`reduce_exact`] for `<psi|A|psi>`.
pub fn reduce_uev<O: Oracle>(
    target: &PepsData<ComplexRational>,
    observable: &LocalObservable<ComplexRational>,
    dist: &DistributionSpec,
    oracle: O,
    cfg: &ReductionConfig,
    seed: u64,
) -> Result<ReductionReport, ReductionError> {
    observable.validate(target)?;
    run(Variant::Uev, target, Quantity::Uev(observable), dist, oracle, cfg, seed)
}

/// `<psi|A|psi> / <psi|psi>` by exact rational reconstruction from at least
/// `4N + 1` answers per repeat, then a plurality vote.
pub fn reduce_nev<O: Oracle>(
    target: &PepsData<ComplexRational>,
    observable: &LocalObservable<ComplexRational>,
    dist: &DistributionSpec,
    oracle: O,
    cfg: &ReductionConfig,
    seed: u64,
) -> Result<ReductionReport, ReductionError> {
    observable.validate(target)?;
    run(Variant::Nev, target, Quantity::Nev(observable), dist, oracle, cfg, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{ExactOracle, OracleAnswer};
    use crate::tensor::{build_cluster_peps, contract_nev, contract_norm, contract_uev, LatticeSpec, Limits};

    fn cz(n: i64) -> ComplexRational {
        ComplexRational::from_int(n)
    }

    #[test]
    fn vote_outcomes() {
        let (_, o, v) = majority_vote(&[Some(cz(1)), None, Some(cz(2)), Some(cz(1))]);
        assert_eq!((o, v), (Outcome::Recovered, Some(cz(1))));
        let (votes, o, v) = majority_vote(&[Some(cz(1)), Some(cz(2)), None]);
        assert_eq!((o, v), (Outcome::MajorityTie, None));
        assert_eq!(votes.len(), 2);
        let (_, o, _) = majority_vote::<ComplexRational>(&[None, None]);
        assert_eq!(o, Outcome::AllRepeatsFailedDecoding);
        // plurality, not absolute majority
        let (_, o, v) = majority_vote(&[Some(cz(3)), Some(cz(3)), Some(cz(1)), Some(cz(2)), None]);
        assert_eq!((o, v), (Outcome::Recovered, Some(cz(3))));
    }

    #[test]
    fn early_stop_rule() {
        assert!(vote_decided(&[Some(cz(1)), Some(cz(1))], 1));
        assert!(!vote_decided(&[Some(cz(1)), Some(cz(1))], 2));
        assert!(!vote_decided(&[Some(cz(1)), Some(cz(2))], 0));
        assert!(!vote_decided::<ComplexRational>(&[None], 0));
    }

    #[test]
    fn exact_oracle_recovers_norm() {
        let target = build_cluster_peps(LatticeSpec::new(2, 2));
        let truth = contract_norm(&target, &Limits::default()).unwrap();
        let cfg = ReductionConfig { repeats: 3, ..ReductionConfig::new(Variant::Exact) };
        let report = reduce_exact(&target, &DistributionSpec::default(), ExactOracle::default(), &cfg, 7).unwrap();
        assert_eq!(report.value, Some(truth));
        // unanimous after two repeats with one left
        assert_eq!(report.repeats.len(), 2);
        assert_eq!(report.repeats[0].correct_answers, Some(80));
        assert_eq!(report.sample_points.len(), 80);
        let j = report.to_json(false);
        assert_eq!(j["outcome"], "recovered");
        assert!(j["repeats"][0].get("answers").is_none());
    }

    #[test]
    fn uev_and_nev_with_exact_oracle() {
        let target = build_cluster_peps(LatticeSpec::new(2, 2));
        let z = ComplexRational::zero();
        let obs = LocalObservable::new(
            vec![0, 3],
            vec![
                vec![cz(1), z.clone(), z.clone(), cz(2)],
                vec![z.clone(), cz(-1), z.clone(), z.clone()],
                vec![z.clone(), z.clone(), cz(-1), z.clone()],
                vec![cz(2), z.clone(), z.clone(), cz(1)],
            ],
        )
        .unwrap();
        let lim = Limits::default();
        let cfg = ReductionConfig { repeats: 1, ..ReductionConfig::new(Variant::Uev) };
        let uev = reduce_uev(&target, &obs, &DistributionSpec::default(), ExactOracle::default(), &cfg, 1).unwrap();
        assert_eq!(uev.into_value().unwrap(), contract_uev(&target, &obs, &lim).unwrap());
        let nev = reduce_nev(&target, &obs, &DistributionSpec::default(), ExactOracle::default(), &cfg, 1).unwrap();
        assert_eq!(nev.sample_points.len(), 17);
        assert_eq!(nev.into_value().unwrap(), contract_nev(&target, &obs, &lim).unwrap());
        let id = LocalObservable::identity(2, 2, &z);
        let one = reduce_nev(&target, &id, &DistributionSpec::default(), ExactOracle::default(), &cfg, 2).unwrap();
        assert_eq!(one.into_value().unwrap(), cz(1));
    }

    struct Liar;

    impl Oracle for Liar {
        fn answer(&mut self, _: &PepsData<ComplexRational>, _: Quantity<'_>) -> Result<OracleAnswer, ReductionError> {
            Ok(OracleAnswer { value: cz(0), correct: Some(false) })
        }
    }

    #[test]
    fn constant_liar_decodes_to_zero() {
        // Always answering 0 is itself a polynomial; the reduction then
        // reports a confident wrong value, which only a ground-truth check
        // can catch.
        let target = build_cluster_peps(LatticeSpec::new(2, 2));
        let cfg = ReductionConfig { repeats: 3, ..ReductionConfig::new(Variant::Exact) };
        let report = reduce_exact(&target, &DistributionSpec::default(), Liar, &cfg, 0).unwrap();
        assert_eq!(report.value, Some(cz(0)));
        assert_eq!(report.repeats[0].correct_answers, Some(0));
    }
}

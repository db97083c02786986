//! Worst-to-average-case reductions for PEPS contraction.
//!
//! A target instance `P` is blended with random data `Q` along
//! `R(t) = t P + (1 - t) Q`. Every contraction quantity of `R(t)` is a
//! polynomial (or, for normalized expectation values, a rational function)
//! of degree at most `2N` in `t`, so an oracle that is only right on most
//! random-looking instances can be queried at small `t` and its answers
//! decoded back to `t = 1`.
//!
//! Sample points are `t_i = u_i * h` with small integers `u_i`; decoding runs
//! in the variable `u` and the recovered function is evaluated at `u = 1/h`.

mod blend;
mod exact;
mod markov;
mod noisy;
mod sampling;
mod schedule;
mod tv;

use thiserror::Error;

use crate::arith::{ArithError, ComplexRational};
use crate::interp::InterpError;
use crate::tensor::{contract_nev, contract_norm, contract_uev, Limits, LocalObservable, PepsData, TensorError};

pub use blend::{blend, BlendPath};
pub use exact::{majority_vote, reduce_exact, vote_decided, reduce_nev, reduce_uev, Outcome, Recovered, ReductionReport, RepeatRecord, Vote};
pub use markov::{markov_bound, MarkovCheck};
pub use noisy::{noisy_certificate, reduce_noisy, NoisyCertificate};
pub use sampling::{repeat_rng, sample_peps_data, DistributionKind, DistributionSpec};
pub use schedule::{choose_sample_points, epsilon_for, ReductionConfig, SamplePlan, Variant};
pub use tv::{blend_tv_bound, tv_bound_scale, tv_bound_shift, tv_numeric_scale, tv_numeric_shift};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("majority vote is tied")]
    MajorityTie,
    #[error("every repeat failed to decode")]
    AllRepeatsFailedDecoding,
    #[error("recovered rational function has a pole at t = 1")]
    ZeroDenominatorAtOne,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// What an oracle is asked to compute on an instance.
#[derive(Clone, Copy, Debug)]
pub enum Quantity<'a> {
    Norm,
    Uev(&'a LocalObservable<ComplexRational>),
    Nev(&'a LocalObservable<ComplexRational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub value: ComplexRational,
    /// Whether the answer is the true value, when the oracle knows.
    pub correct: Option<bool>,
}

/// A (possibly unreliable) contraction machine.
pub trait Oracle {
    fn answer(&mut self, instance: &PepsData<ComplexRational>, quantity: Quantity<'_>) -> Result<OracleAnswer, ReductionError>;
}

/// The exact contraction engine for any quantity.
pub fn exact_value(
    instance: &PepsData<ComplexRational>,
    quantity: Quantity<'_>,
    limits: &Limits,
) -> Result<ComplexRational, TensorError> {
    match quantity {
        Quantity::Norm => contract_norm(instance, limits),
        Quantity::Uev(obs) => contract_uev(instance, obs, limits),
        Quantity::Nev(obs) => contract_nev(instance, obs, limits),
    }
}

/// Always answers with the exact contraction.
#[derive(Clone, Debug, Default)]
pub struct ExactOracle {
    pub limits: Limits,
}

impl Oracle for ExactOracle {
    fn answer(&mut self, instance: &PepsData<ComplexRational>, quantity: Quantity<'_>) -> Result<OracleAnswer, ReductionError> {
        Ok(OracleAnswer { value: exact_value(instance, quantity, &self.limits)?, correct: Some(true) })
    }
}

impl<T: Oracle + ?Sized> Oracle for &mut T {
    fn answer(&mut self, instance: &PepsData<ComplexRational>, quantity: Quantity<'_>) -> Result<OracleAnswer, ReductionError> {
        (**self).answer(instance, quantity)
    }
}

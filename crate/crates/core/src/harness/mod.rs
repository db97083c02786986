//! Faulty-oracle simulation and reproducible experiments.
//!
//! Every output of an experiment is a function of its configuration and
//! master seed: trial `i` draws its seeds from stream `i` of the master
//! generator, and trials are reassembled in index order whatever the
//! parallelism. Success rates come with 95% Wilson intervals; acceptance
//! checks elsewhere use a 3-sigma margin on the binomial standard error.

mod experiment;
mod lemmas;
mod oracle;
mod stats;

use thiserror::Error;

use crate::permanent::PermanentError;
use crate::reduction::ReductionError;
use crate::tensor::TensorError;

pub use experiment::{
    run_experiment, run_permanent_experiment, trial_seeds, ExperimentConfig, ExperimentReport, InstanceSource, OutputPaths,
    PermanentExperimentConfig, TrialRecord, TrialRow, TRIAL_COLUMNS,
};
pub use lemmas::{verify_degree_bound, verify_gaussian_tv, verify_paturi, verify_rakhmanov, LemmaCheck, LemmaReport};
pub use oracle::{make_faulty_oracle, Corruptible, FaultyOracle, OracleAudit, OracleMode, OraclePolicy, WrongValueRule};
pub use stats::{wilson_interval, SuccessSummary, Z95};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Permanent(#[from] PermanentError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

use std::path::{Path, PathBuf};

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::oracle::{make_faulty_oracle, OracleMode, OraclePolicy};
use super::stats::SuccessSummary;
use super::HarnessError;
use crate::arith::{ComplexRational, Field, PrimeFieldElement};
use crate::permanent::{lipton_reduce, permanent_bruteforce, LiptonConfig, SquareMatrix};
use crate::reduction::{
    exact_value, reduce_exact, reduce_nev, reduce_noisy, reduce_uev, repeat_rng, sample_peps_data, DistributionSpec,
    Quantity, ReductionConfig, SamplePlan, Variant,
};
use crate::tensor::{build_cluster_peps, AnyPeps, LatticeSpec, Limits, LocalObservable, PepsData};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    File { path: PathBuf },
    Cluster { width: usize, height: usize },
    /// A fresh target per trial, drawn from the experiment's distribution.
    Random { width: usize, height: usize, d: usize, bond: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputPaths {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
}

fn default_parallel() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    #[serde(default)]
    pub distribution: DistributionSpec,
    pub reduction: ReductionConfig,
    pub oracle: OraclePolicy,
    /// Observable for the expectation-value variants, in the observable
    /// JSON format. Defaults to `diag(1, -1, 0, ...)` on vertex 0.
    #[serde(default)]
    pub observable: Option<Value>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_parallel")]
    pub parallel: usize,
    #[serde(default)]
    pub output: OutputPaths,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermanentExperimentConfig {
    pub n: usize,
    pub modulus: u64,
    #[serde(default)]
    pub lipton: LiptonConfig,
    pub oracle: OraclePolicy,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_parallel")]
    pub parallel: usize,
    #[serde(default)]
    pub output: OutputPaths,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRow {
    pub seed: u64,
    pub variant: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub bond: Option<usize>,
    pub d: Option<usize>,
    pub k: usize,
    pub m: usize,
    pub failure_rate: f64,
    pub success: bool,
    pub value_re: Option<String>,
    pub value_im: Option<String>,
    pub bound: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    #[serde(flatten)]
    pub row: TrialRow,
    pub truth: String,
    pub outcome: Value,
    pub queries: usize,
    pub wrong_answers: usize,
    pub repeats_run: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub master_seed: u64,
    pub config: Value,
    pub summary: SuccessSummary,
    pub trials: Vec<TrialRecord>,
}

impl ExperimentReport {
    fn assemble(master_seed: u64, config: Value, trials: Vec<TrialRecord>) -> Self {
        let successes = trials.iter().filter(|t| t.row.success).count();
        ExperimentReport { master_seed, config, summary: SuccessSummary::from_counts(successes, trials.len()), trials }
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(TRIAL_COLUMNS).map_err(io_err)?;
        for t in &self.trials {
            w.serialize(&t.row).map_err(io_err)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Value {
        json!(self)
    }

    pub fn write(&self, paths: &OutputPaths) -> Result<(), HarnessError> {
        if let Some(p) = &paths.csv {
            write_file(p, &self.to_csv()?)?;
        }
        if let Some(p) = &paths.json {
            let text = serde_json::to_string_pretty(&self.to_json()).map_err(io_err)?;
            write_file(p, &text)?;
        }
        Ok(())
    }
}

pub const TRIAL_COLUMNS: [&str; 12] =
    ["seed", "variant", "N", "D", "d", "k", "m", "failure_rate", "success", "value_re", "value_im", "bound"];

fn io_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io(e.to_string())
}

fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// `(reduction, oracle, instance)` seeds for one trial.
pub fn trial_seeds(master: u64, trial: usize) -> (u64, u64, u64) {
    let mut rng = repeat_rng(master, trial as u64);
    (rng.next_u64(), rng.next_u64(), rng.next_u64())
}

fn run_parallel<T: Send>(
    parallel: usize,
    trials: usize,
    f: impl Fn(usize) -> Result<T, HarnessError> + Sync + Send,
) -> Result<Vec<T>, HarnessError> {
    if parallel <= 1 {
        return (0..trials).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(parallel).build().map_err(|e| HarnessError::ConfigInvalid(e.to_string()))?;
    // indexed collect keeps trial order
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

fn default_observable(d: usize) -> LocalObservable<ComplexRational> {
    let diag: Vec<ComplexRational> = (0..d)
        .map(|i| match i {
            0 => ComplexRational::one(),
            1 => ComplexRational::from_int(-1),
            _ => ComplexRational::zero(),
        })
        .collect();
    LocalObservable::diagonal(0, &diag)
}

fn zero_shape(width: usize, height: usize, d: usize, bond: usize) -> Result<PepsData<ComplexRational>, HarnessError> {
    let lat = LatticeSpec::new(width, height);
    let tensors = (0..lat.n()).map(|v| vec![ComplexRational::zero(); d * bond.pow(lat.degree(v) as u32)]).collect();
    Ok(PepsData::new(lat, d, bond, tensors, false)?)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        self.oracle.validate()?;
        self.distribution.validate()?;
        if self.parallel == 0 {
            return Err(HarnessError::ConfigInvalid("parallel must be at least 1".into()));
        }
        if let InstanceSource::Cluster { width, height } | InstanceSource::Random { width, height, .. } = self.instance {
            if width == 0 || height == 0 {
                return Err(HarnessError::ConfigInvalid("lattice must be at least 1x1".into()));
            }
        }
        if let InstanceSource::Random { d, bond, .. } = self.instance {
            if d == 0 || bond == 0 {
                return Err(HarnessError::ConfigInvalid("d and D must be at least 1".into()));
            }
        }
        if self.reduction.variant == Variant::Noisy && !matches!(self.oracle.mode, OracleMode::AdditiveNoise { .. } | OracleMode::AlwaysCorrect) {
            return Err(HarnessError::ConfigInvalid("the noisy variant needs an additive-noise or exact oracle".into()));
        }
        Ok(())
    }

    fn fixed_instance(&self) -> Result<Option<PepsData<ComplexRational>>, HarnessError> {
        match &self.instance {
            InstanceSource::File { path } => match AnyPeps::from_path(path)? {
                AnyPeps::Complex(p) => Ok(Some(p)),
                AnyPeps::Prime(_) => Err(HarnessError::ConfigInvalid("reductions need a complex-rational instance".into())),
            },
            InstanceSource::Cluster { width, height } => Ok(Some(build_cluster_peps(LatticeSpec::new(*width, *height)))),
            InstanceSource::Random { .. } => Ok(None),
        }
    }
}

/// Runs every trial of a PEPS reduction experiment against an independently
/// computed ground truth and writes the configured outputs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let fixed = cfg.fixed_instance()?;
    let observable = match &cfg.observable {
        Some(v) => Some(LocalObservable::from_json(v)?),
        None => None,
    };
    let mut reduction = cfg.reduction.clone();
    if let (Variant::Noisy, None, OracleMode::AdditiveNoise { bits }) = (reduction.variant, reduction.noise_bits, cfg.oracle.mode) {
        reduction.noise_bits = Some(bits);
    }
    let limits = Limits::default();

    let trials = run_parallel(cfg.parallel, cfg.trials, |trial| {
        let (seed, oracle_seed, instance_seed) = trial_seeds(cfg.seed, trial);
        let target = match (&fixed, &cfg.instance) {
            (Some(p), _) => p.clone(),
            (None, InstanceSource::Random { width, height, d, bond }) => {
                let shape = zero_shape(*width, *height, *d, *bond)?;
                sample_peps_data(&shape, &cfg.distribution, &mut repeat_rng(instance_seed, 0))?
            }
            _ => unreachable!("fixed instances are resolved up front"),
        };
        let obs = observable.clone().unwrap_or_else(|| default_observable(target.d()));
        let quantity = match reduction.variant {
            Variant::Exact | Variant::Noisy => Quantity::Norm,
            Variant::Uev => Quantity::Uev(&obs),
            Variant::Nev => Quantity::Nev(&obs),
        };
        let truth = exact_value(&target, quantity, &limits)?;
        let policy = OraclePolicy { seed: cfg.oracle.seed ^ oracle_seed, ..cfg.oracle };
        let mut oracle = make_faulty_oracle(policy, limits)?;
        let report = match reduction.variant {
            Variant::Exact => reduce_exact(&target, &cfg.distribution, &mut oracle, &reduction, seed)?,
            Variant::Uev => reduce_uev(&target, &obs, &cfg.distribution, &mut oracle, &reduction, seed)?,
            Variant::Nev => reduce_nev(&target, &obs, &cfg.distribution, &mut oracle, &reduction, seed)?,
            Variant::Noisy => reduce_noisy(&target, &cfg.distribution, &mut oracle, &reduction, seed)?,
        };
        let success = match (&report.value, &report.certificate) {
            (Some(v), Some(cert)) => cert.covers(&v.minus(&truth)),
            (Some(v), None) => *v == truth,
            (None, _) => false,
        };
        let (plan, _) = reduction.resolve(target.bond(), target.d(), target.n())?;
        let k = match plan {
            SamplePlan::Exact { k } => k,
            SamplePlan::Noisy { r } => r + 1,
        };
        let audit = oracle.audit();
        let row = TrialRow {
            seed,
            variant: reduction.variant.to_string(),
            n: target.n(),
            bond: Some(target.bond()),
            d: Some(target.d()),
            k,
            m: reduction.repeats,
            failure_rate: cfg.oracle.mode.failure_rate(),
            success,
            value_re: report.value.as_ref().map(|v| v.re.to_string()),
            value_im: report.value.as_ref().map(|v| v.im.to_string()),
            bound: report.certificate.as_ref().map(|c| c.bound.to_string()),
        };
        Ok(TrialRecord {
            trial,
            row,
            truth: truth.to_string(),
            outcome: json!(report.outcome),
            queries: audit.queries,
            wrong_answers: audit.wrong,
            repeats_run: report.repeats.len(),
        })
    })?;
    let report = ExperimentReport::assemble(cfg.seed, serde_json::to_value(cfg).map_err(io_err)?, trials);
    report.write(&cfg.output)?;
    Ok(report)
}

/// Lipton's reduction on uniformly random `n x n` matrices over F_q, checked
/// against the brute-force permanent.
pub fn run_permanent_experiment(cfg: &PermanentExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.oracle.validate()?;
    if matches!(cfg.oracle.mode, OracleMode::AdditiveNoise { .. }) {
        return Err(HarnessError::ConfigInvalid("additive noise is undefined over F_q".into()));
    }
    if !crate::arith::is_prime(cfg.modulus) {
        return Err(HarnessError::ConfigInvalid(format!("modulus {} is not prime", cfg.modulus)));
    }
    if cfg.n == 0 || cfg.parallel == 0 {
        return Err(HarnessError::ConfigInvalid("n and parallel must be at least 1".into()));
    }
    let k = cfg.lipton.resolve(cfg.n, cfg.modulus)?;
    let q = cfg.modulus;
    let like = PrimeFieldElement::new(0, q);

    let trials = run_parallel(cfg.parallel, cfg.trials, |trial| {
        let (seed, oracle_seed, instance_seed) = trial_seeds(cfg.seed, trial);
        let mut rng = repeat_rng(instance_seed, 0);
        let a = SquareMatrix::from_fn(cfg.n, &like, |_, _| PrimeFieldElement::new(rand::Rng::gen_range(&mut rng, 0..q), q))?;
        let truth = permanent_bruteforce(&a)?;
        let policy = OraclePolicy { seed: cfg.oracle.seed ^ oracle_seed, ..cfg.oracle };
        let mut oracle = make_faulty_oracle(policy, Limits::default())?;
        let report = lipton_reduce(&a, &mut oracle, &cfg.lipton, seed)?;
        let audit = oracle.audit();
        let row = TrialRow {
            seed,
            variant: "permanent".into(),
            n: cfg.n,
            bond: None,
            d: None,
            k,
            m: cfg.lipton.repeats,
            failure_rate: cfg.oracle.mode.failure_rate(),
            success: report.value == Some(truth.value()),
            value_re: report.value.map(|v| v.to_string()),
            value_im: None,
            bound: None,
        };
        Ok(TrialRecord {
            trial,
            row,
            truth: truth.value().to_string(),
            outcome: json!(report.outcome),
            queries: audit.queries,
            wrong_answers: audit.wrong,
            repeats_run: report.decoded.len(),
        })
    })?;
    let report = ExperimentReport::assemble(cfg.seed, serde_json::to_value(cfg).map_err(io_err)?, trials);
    report.write(&cfg.output)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::ReductionConfig;

    fn small(variant: Variant, mode: OracleMode, trials: usize) -> ExperimentConfig {
        let mut reduction = ReductionConfig::new(variant);
        reduction.repeats = 3;
        ExperimentConfig {
            instance: InstanceSource::Cluster { width: 1, height: 2 },
            distribution: DistributionSpec::default(),
            reduction,
            oracle: OraclePolicy::new(mode, 0),
            observable: None,
            trials,
            seed: 42,
            parallel: 1,
            output: OutputPaths::default(),
        }
    }

    #[test]
    fn zero_trials_is_an_empty_report() {
        let report = run_experiment(&small(Variant::Exact, OracleMode::AlwaysCorrect, 0)).unwrap();
        assert!(report.trials.is_empty());
        assert_eq!(report.summary.trials, 0);
        assert_eq!(report.to_csv().unwrap().lines().count(), 1);
    }

    #[test]
    fn exact_oracle_always_succeeds() {
        for variant in [Variant::Exact, Variant::Uev, Variant::Nev, Variant::Noisy] {
            let report = run_experiment(&small(variant, OracleMode::AlwaysCorrect, 2)).unwrap();
            assert_eq!(report.summary.successes, 2, "{variant}");
        }
    }

    #[test]
    fn deterministic_and_parallel_invariant() {
        let cfg = small(Variant::Exact, OracleMode::IidFailure { p: 0.2 }, 4);
        let a = run_experiment(&cfg).unwrap().to_csv().unwrap();
        let b = run_experiment(&cfg).unwrap().to_csv().unwrap();
        let c = run_experiment(&ExperimentConfig { parallel: 3, ..cfg }).unwrap().to_csv().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.starts_with("seed,variant,N,D,d,k,m,failure_rate,success,value_re,value_im,bound\n"));
    }

    #[test]
    fn writes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let output = OutputPaths { csv: Some(dir.path().join("r.csv")), json: Some(dir.path().join("r.json")) };
        let cfg = ExperimentConfig { output, ..small(Variant::Exact, OracleMode::AlwaysCorrect, 1) };
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("r.csv")).unwrap(), report.to_csv().unwrap());
        let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
        assert_eq!(json["master_seed"], 42);
        assert_eq!(json["trials"][0]["success"], true);
    }

    #[test]
    fn random_instances_and_bad_configs() {
        let cfg = ExperimentConfig {
            instance: InstanceSource::Random { width: 2, height: 1, d: 2, bond: 1 },
            ..small(Variant::Exact, OracleMode::IidFailure { p: 0.1 }, 2)
        };
        assert_eq!(run_experiment(&cfg).unwrap().summary.successes, 2);
        let bad = ExperimentConfig { oracle: OraclePolicy::new(OracleMode::IidFailure { p: 2.0 }, 0), ..cfg.clone() };
        assert!(matches!(run_experiment(&bad), Err(HarnessError::ConfigInvalid(_))));
        let noisy = small(Variant::Noisy, OracleMode::IidFailure { p: 0.1 }, 1);
        assert!(matches!(run_experiment(&noisy), Err(HarnessError::ConfigInvalid(_))));
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg = small(Variant::Uev, OracleMode::AdditiveNoise { bits: 30 }, 5);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn permanent_experiment() {
        let cfg = PermanentExperimentConfig {
            n: 3,
            modulus: 101,
            lipton: LiptonConfig::default(),
            oracle: OraclePolicy::new(OracleMode::IidFailure { p: 0.1 }, 1),
            trials: 5,
            seed: 9,
            parallel: 2,
            output: OutputPaths::default(),
        };
        let report = run_permanent_experiment(&cfg).unwrap();
        assert_eq!(report.summary.successes, 5);
        assert_eq!(report.to_csv().unwrap(), run_permanent_experiment(&cfg).unwrap().to_csv().unwrap());
        let noisy = PermanentExperimentConfig { oracle: OraclePolicy::new(OracleMode::AdditiveNoise { bits: 4 }, 0), ..cfg };
        assert!(run_permanent_experiment(&noisy).is_err());
    }
}

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value};

use pepsavg_core::arith::{Field, FieldScalar, PrimeFieldElement, Rational};
use pepsavg_core::harness::{
    make_faulty_oracle, run_experiment, run_permanent_experiment, verify_degree_bound, verify_gaussian_tv,
    verify_paturi, verify_rakhmanov, ExperimentConfig, ExperimentReport, InstanceSource, LemmaReport, OracleMode,
    OraclePolicy, OutputPaths, PermanentExperimentConfig,
};
use pepsavg_core::permanent::{lipton_reduce, LiptonConfig, SquareMatrix};
use pepsavg_core::reduction::{reduce_exact, DistributionSpec, ExactOracle, ReductionConfig, Variant};
use pepsavg_core::tensor::{
    build_cluster_peps, contract_nev, contract_norm, contract_uev, AnyPeps, LatticeSpec, Limits, LocalObservable, PepsData,
};

use crate::args::{ExpectationArgs, Format, Global, Lemma, PermanentArgs, ReduceArgs};
use crate::exit;

/// Result of a command: the text to emit and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn scalar_output(quantity: &str, value: FieldScalar, global: &Global) -> String {
    match global.format {
        Format::Json => pretty(&json!({ "quantity": quantity, "value": value.to_json() })),
        Format::Csv => {
            let (re, im) = match &value {
                FieldScalar::Complex(c) => (c.re.to_string(), c.im.to_string()),
                FieldScalar::Prime(p) => (p.value().to_string(), String::new()),
            };
            format!("quantity,value_re,value_im\n{quantity},{re},{im}\n")
        }
    }
}

pub fn contract(instance: &Path, global: &Global) -> Result<Outcome> {
    let limits = Limits::default();
    let value: FieldScalar = match AnyPeps::from_path(instance)? {
        AnyPeps::Complex(p) => contract_norm(&p, &limits)?.into(),
        AnyPeps::Prime(p) => contract_norm(&p, &limits)?.into(),
    };
    Ok(Outcome::ok(scalar_output("norm", value, global)))
}

fn observable_for<F: Field>(path: Option<&Path>, peps: &PepsData<F>) -> Result<LocalObservable<F>> {
    match path {
        Some(p) => Ok(LocalObservable::from_json(&read_json(p)?)?),
        None => {
            let z = peps.zero();
            let diag: Vec<F> = (0..peps.d())
                .map(|i| match i {
                    0 => z.one_like(),
                    1 => z.one_like().negate(),
                    _ => z.zero_like(),
                })
                .collect();
            Ok(LocalObservable::diagonal(0, &diag))
        }
    }
}

pub fn expectation(args: &ExpectationArgs, normalized: bool, global: &Global) -> Result<Outcome> {
    let limits = Limits::default();
    let obs = args.observable.as_deref();
    fn eval<F: Field>(p: &PepsData<F>, o: &LocalObservable<F>, normalized: bool, limits: &Limits) -> Result<F> {
        Ok(if normalized { contract_nev(p, o, limits)? } else { contract_uev(p, o, limits)? })
    }
    let value: FieldScalar = match AnyPeps::from_path(&args.instance)? {
        AnyPeps::Complex(p) => eval(&p, &observable_for(obs, &p)?, normalized, &limits)?.into(),
        AnyPeps::Prime(p) => eval(&p, &observable_for(obs, &p)?, normalized, &limits)?.into(),
    };
    Ok(Outcome::ok(scalar_output(if normalized { "nev" } else { "uev" }, value, global)))
}

fn report_output(report: &ExperimentReport, global: &Global) -> Result<String> {
    Ok(match global.format {
        Format::Json => pretty(&report.to_json()),
        Format::Csv => report.to_csv()?,
    })
}

/// Code 3 when trials ran and none of them produced a value.
fn experiment_code(report: &ExperimentReport) -> u8 {
    let none_recovered = report.trials.iter().all(|t| t.outcome != json!("recovered"));
    if !report.trials.is_empty() && none_recovered {
        exit::DECODE
    } else {
        0
    }
}

pub fn reduce(args: &ReduceArgs, global: &Global) -> Result<Outcome> {
    let cfg = match &args.config {
        Some(path) => serde_json::from_value::<ExperimentConfig>(read_json(path)?).context("experiment configuration")?,
        None => {
            let mut reduction = ReductionConfig::new(args.variant);
            reduction.k = args.k;
            reduction.repeats = args.repeats;
            reduction.early_stop = !args.no_early_stop;
            reduction.eps = args.eps.as_deref().map(str::parse::<Rational>).transpose().map_err(|e| anyhow!("--eps: {e}"))?;
            let mode = match (args.variant, args.adversarial) {
                (Variant::Noisy, _) => {
                    reduction.noise_bits = Some(args.noise_bits);
                    OracleMode::AdditiveNoise { bits: args.noise_bits }
                }
                (_, true) => OracleMode::AdversarialSubset { fraction: args.failure_rate, rule: Default::default() },
                (_, false) => OracleMode::IidFailure { p: args.failure_rate },
            };
            let instance = match &args.instance {
                Some(path) => InstanceSource::File { path: path.clone() },
                None => InstanceSource::Cluster { width: args.cluster.0, height: args.cluster.1 },
            };
            let observable = args.observable.as_deref().map(read_json).transpose()?;
            ExperimentConfig {
                instance,
                distribution: DistributionSpec { translation_invariant: args.translation_invariant, ..Default::default() },
                reduction,
                oracle: OraclePolicy::new(mode, 0),
                observable,
                trials: args.trials,
                seed: global.seed,
                parallel: global.parallel,
                output: OutputPaths::default(),
            }
        }
    };
    eprintln!("master seed {}", cfg.seed);
    let report = run_experiment(&cfg)?;
    eprintln!(
        "{} of {} trials succeeded (95% CI {:.4}..{:.4})",
        report.summary.successes, report.summary.trials, report.summary.ci_low, report.summary.ci_high
    );
    Ok(Outcome { text: report_output(&report, global)?, code: experiment_code(&report) })
}

pub fn permanent(args: &PermanentArgs, global: &Global) -> Result<Outcome> {
    let lipton = LiptonConfig { k: args.k, repeats: args.repeats, early_stop: true };
    let policy = OraclePolicy::new(OracleMode::IidFailure { p: args.failure_rate }, global.seed);
    eprintln!("master seed {}", global.seed);
    if let Some(path) = &args.matrix {
        let a = SquareMatrix::<PrimeFieldElement>::from_json(&read_json(path)?)?;
        let mut oracle = make_faulty_oracle(policy, Limits::default())?;
        let report = lipton_reduce(&a, &mut oracle, &lipton, global.seed)?;
        let code = if report.success() { 0 } else { exit::DECODE };
        let text = match global.format {
            Format::Json => pretty(&report.to_json()),
            Format::Csv => format!("n,q,k,value\n{},{},{},{}\n", report.n, report.modulus, report.k, report.value.map(|v| v.to_string()).unwrap_or_default()),
        };
        return Ok(Outcome { text, code });
    }
    let cfg = PermanentExperimentConfig {
        n: args.n,
        modulus: args.q,
        lipton,
        oracle: policy,
        trials: args.trials,
        seed: global.seed,
        parallel: global.parallel,
        output: OutputPaths::default(),
    };
    let report = run_permanent_experiment(&cfg)?;
    eprintln!("{} of {} trials succeeded", report.summary.successes, report.summary.trials);
    Ok(Outcome { text: report_output(&report, global)?, code: experiment_code(&report) })
}

fn lemma_output(report: &LemmaReport, global: &Global) -> String {
    match global.format {
        Format::Json => pretty(&json!(report)),
        Format::Csv => {
            let mut s = String::from("lemma,label,value,bound,pass\n");
            for c in &report.checks {
                s += &format!("{},\"{}\",{},{},{}\n", report.lemma, c.label, c.value, c.bound, c.pass);
            }
            s
        }
    }
}

pub fn verify_lemma(lemma: Lemma, c_square: f64, c_general: f64, global: &Global) -> Result<Outcome> {
    let report = match lemma {
        Lemma::GaussianTv => verify_gaussian_tv(),
        Lemma::DegreeBound => verify_degree_bound(global.seed)?,
        Lemma::Paturi => verify_paturi()?,
        Lemma::Rakhmanov => verify_rakhmanov(global.seed, c_square, c_general)?,
    };
    let code = if report.pass { 0 } else { exit::CHECK_FAILED };
    Ok(Outcome { text: lemma_output(&report, global), code })
}

fn time_ms(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    let start = Instant::now();
    for _ in 0..reps {
        f()?;
    }
    Ok(start.elapsed().as_secs_f64() * 1e3 / reps as f64)
}

pub fn bench(reps: usize, global: &Global) -> Result<Outcome> {
    let reps = reps.max(1);
    let limits = Limits::default();
    let mut rows = Vec::new();
    for (w, h) in [(1, 2), (2, 2), (2, 3), (3, 3), (2, 4)] {
        let peps = build_cluster_peps(LatticeSpec::new(w, h));
        let ms = time_ms(reps, || contract_norm(&peps, &limits).map(drop).map_err(Into::into))?;
        rows.push((format!("contract_norm cluster {w}x{h}"), ms));
    }
    let target = build_cluster_peps(LatticeSpec::new(2, 2));
    let mut cfg = ReductionConfig::new(Variant::Exact);
    cfg.repeats = 1;
    let ms = time_ms(reps, || {
        reduce_exact(&target, &DistributionSpec::default(), ExactOracle::default(), &cfg, global.seed)?;
        Ok(())
    })?;
    rows.push(("reduce_exact cluster 2x2, k = 80, one repeat".into(), ms));
    let text = match global.format {
        Format::Json => pretty(&json!(rows.iter().map(|(c, ms)| json!({ "case": c, "millis": ms })).collect::<Vec<_>>())),
        Format::Csv => rows.iter().fold(String::from("case,millis\n"), |s, (c, ms)| s + &format!("\"{c}\",{ms:.4}\n")),
    };
    Ok(Outcome::ok(text))
}

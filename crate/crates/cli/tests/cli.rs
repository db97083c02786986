use std::path::Path;
use std::process::{Command, Output};

use pepsavg_core::arith::PrimeFieldElement;
use pepsavg_core::permanent::SquareMatrix;
use pepsavg_core::tensor::{build_cluster_peps, build_cluster_peps_in, LatticeSpec};
use serde_json::Value;

fn pepsavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pepsavg")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_cluster(dir: &Path, w: usize, h: usize) -> String {
    let path = dir.join(format!("cluster_{w}x{h}.json"));
    std::fs::write(&path, build_cluster_peps(LatticeSpec::new(w, h)).to_json().to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn contract_cluster_norm() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_cluster(dir.path(), 2, 2);
    let out = pepsavg(&["contract", &file]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["quantity"], "norm");
    assert_eq!(v["value"]["re"], "+16/1");
}

#[test]
fn contract_over_prime_field_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let peps = build_cluster_peps_in(LatticeSpec::new(1, 3), &PrimeFieldElement::new(0, 101));
    std::fs::write(&path, peps.to_json().to_string()).unwrap();
    let out = pepsavg(&["contract", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "quantity,value_re,value_im\nnorm,8,\n");
}

#[test]
fn expectation_values() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_cluster(dir.path(), 1, 2);
    let uev = stdout_json(&pepsavg(&["uev", &file]));
    let nev = stdout_json(&pepsavg(&["nev", &file]));
    assert_eq!(uev["quantity"], "uev");
    // Z on a cluster-state site averages to zero
    assert_eq!(nev["value"]["re"], "+0/1");
}

#[test]
fn missing_instance_is_a_config_error() {
    let out = pepsavg(&["contract", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = pepsavg(&["reduce", "--failure-rate", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_is_reproducible_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = ["reduce", "--cluster", "1x2", "--failure-rate", "0.2", "--trials", "3", "--format", "csv", "--seed", "5"];
    for out in [&a, &b] {
        let mut args = common.to_vec();
        args.extend(["--out", out.to_str().unwrap()]);
        assert_eq!(pepsavg(&args).status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn hopeless_oracle_exits_with_decode_failure() {
    let out = pepsavg(&["reduce", "--cluster", "1x2", "--failure-rate", "0.9", "--repeats", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["summary"]["successes"], 0);
}

#[test]
fn reduce_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    let json_out = dir.path().join("exp_out.json");
    let text = serde_json::json!({
        "instance": { "kind": "cluster", "width": 1, "height": 2 },
        "reduction": { "variant": "nev", "repeats": 3 },
        "oracle": { "mode": "always-correct" },
        "trials": 2,
        "seed": 11,
        "output": { "json": json_out },
    });
    std::fs::write(&cfg, text.to_string()).unwrap();
    let out = pepsavg(&["reduce", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    assert_eq!(written["summary"]["successes"], 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("master seed 11"));
}

#[test]
fn permanent_random_and_given_matrix() {
    let out = pepsavg(&["permanent", "--n", "4", "--q", "101", "--failure-rate", "0.1", "--trials", "4", "--parallel", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["summary"]["successes"], 4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let like = PrimeFieldElement::new(0, 101);
    let m = SquareMatrix::from_fn(3, &like, |i, j| PrimeFieldElement::new((i * 3 + j + 1) as u64, 101)).unwrap();
    std::fs::write(&path, m.to_json().to_string()).unwrap();
    let out = pepsavg(&["permanent", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // perm [[1,2,3],[4,5,6],[7,8,9]] = 450 = 46 mod 101
    assert_eq!(stdout_json(&out)["value"], 46);
}

#[test]
fn permanent_size_cap_and_small_modulus() {
    assert_eq!(pepsavg(&["permanent", "--n", "10", "--q", "101"]).status.code(), Some(4));
    assert_eq!(pepsavg(&["permanent", "--n", "5", "--q", "13"]).status.code(), Some(2));
}

#[test]
fn verify_lemmas() {
    for lemma in ["gaussian-tv", "degree-bound", "paturi", "rakhmanov"] {
        let out = pepsavg(&["verify-lemma", lemma]);
        assert_eq!(out.status.code(), Some(0), "{lemma}");
        assert_eq!(stdout_json(&out)["pass"], true);
    }
    // the general family needs a constant above 1/ln 2
    let out = pepsavg(&["verify-lemma", "rakhmanov", "--rakhmanov-c-general", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_reports_timings() {
    let out = pepsavg(&["bench", "--reps", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("case,millis\n"));
    assert_eq!(text.lines().count(), 7);
}

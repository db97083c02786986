//! Benchmark fixtures shared by the criterion targets.

use pepsavg_core::arith::{ComplexRational, PrimeFieldElement};
use pepsavg_core::interp::SampleSet;
use pepsavg_core::permanent::SquareMatrix;
use pepsavg_core::reduction::{repeat_rng, sample_peps_data, DistributionSpec};
use pepsavg_core::tensor::{build_cluster_peps, LatticeSpec, PepsData};
use rand::Rng;

pub fn cluster(width: usize, height: usize) -> PepsData<ComplexRational> {
    build_cluster_peps(LatticeSpec::new(width, height))
}

/// Gaussian random data shaped like the cluster state.
pub fn random_peps(width: usize, height: usize, seed: u64) -> PepsData<ComplexRational> {
    sample_peps_data(&cluster(width, height), &DistributionSpec::default(), &mut repeat_rng(seed, 0)).expect("valid spec")
}

/// `k` samples of a random degree-`r` polynomial over F_q with `errors`
/// corrupted values.
pub fn corrupted_samples(k: usize, r: usize, errors: usize, q: u64, seed: u64) -> SampleSet<PrimeFieldElement> {
    let mut rng = repeat_rng(seed, 1);
    let coeffs: Vec<u64> = (0..=r).map(|_| rng.gen_range(0..q)).collect();
    let xs: Vec<PrimeFieldElement> = (1..=k as u64).map(|x| PrimeFieldElement::new(x, q)).collect();
    let ys = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let y = coeffs.iter().rev().fold(0u128, |acc, &c| (acc * x.value() as u128 + c as u128) % q as u128) as u64;
            PrimeFieldElement::new(if i < errors { (y + 1) % q } else { y }, q)
        })
        .collect();
    SampleSet::from_xy(xs, ys).expect("distinct abscissae")
}

pub fn random_matrix(n: usize, q: u64, seed: u64) -> SquareMatrix<PrimeFieldElement> {
    let mut rng = repeat_rng(seed, 2);
    SquareMatrix::from_fn(n, &PrimeFieldElement::new(0, q), |_, _| PrimeFieldElement::new(rng.gen_range(0..q), q)).expect("square")
}

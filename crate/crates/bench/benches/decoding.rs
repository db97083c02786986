use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pepsavg_bench::{cluster, corrupted_samples};
use pepsavg_core::interp::berlekamp_welch;
use pepsavg_core::reduction::{reduce_exact, DistributionSpec, ExactOracle, ReductionConfig, Variant};

const P61: u64 = (1 << 61) - 1;

fn bw(c: &mut Criterion) {
    let mut group = c.benchmark_group("berlekamp_welch_p61");
    for (k, r) in [(40, 8), (120, 12)] {
        let errors = (k - r - 1) / 2;
        let s = corrupted_samples(k, r, errors, P61, 3);
        group.bench_with_input(BenchmarkId::from_parameter(format!("k{k}_r{r}_e{errors}")), &s, |b, s| b.iter(|| berlekamp_welch(s, r)));
    }
    group.finish();
}

fn exact_reduction(c: &mut Criterion) {
    let target = cluster(2, 2);
    let mut cfg = ReductionConfig::new(Variant::Exact);
    cfg.repeats = 1;
    let mut group = c.benchmark_group("reduce_exact");
    group.sample_size(10);
    group.bench_function("cluster_2x2_one_repeat", |b| {
        b.iter(|| reduce_exact(&target, &DistributionSpec::default(), ExactOracle::default(), &cfg, 0))
    });
    group.finish();
}

criterion_group!(benches, bw, exact_reduction);
criterion_main!(benches);

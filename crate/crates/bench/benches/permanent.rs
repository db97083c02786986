use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pepsavg_bench::random_matrix;
use pepsavg_core::permanent::{lipton_reduce, permanent_bruteforce, ExactPermanentOracle, LiptonConfig};

fn bruteforce(c: &mut Criterion) {
    let mut group = c.benchmark_group("permanent_bruteforce");
    for n in [4, 6, 8] {
        let m = random_matrix(n, 101, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| permanent_bruteforce(m)));
    }
    group.finish();
}

fn lipton(c: &mut Criterion) {
    let m = random_matrix(5, 101, 0);
    let cfg = LiptonConfig { repeats: 1, ..Default::default() };
    c.bench_function("lipton_reduce_n5_one_repeat", |b| b.iter(|| lipton_reduce(&m, ExactPermanentOracle, &cfg, 0)));
}

criterion_group!(benches, bruteforce, lipton);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pepsavg_bench::{cluster, random_peps};
use pepsavg_core::tensor::{contract_norm, Limits};

fn norm(c: &mut Criterion) {
    let limits = Limits::default();
    let mut group = c.benchmark_group("contract_norm");
    group.sample_size(20);
    for (w, h) in [(2, 2), (2, 3), (3, 3)] {
        let p = cluster(w, h);
        group.bench_with_input(BenchmarkId::new("cluster", format!("{w}x{h}")), &p, |b, p| b.iter(|| contract_norm(p, &limits)));
        let r = random_peps(w, h, 1);
        group.bench_with_input(BenchmarkId::new("gaussian", format!("{w}x{h}")), &r, |b, p| b.iter(|| contract_norm(p, &limits)));
    }
    group.finish();
}

criterion_group!(benches, norm);
criterion_main!(benches);

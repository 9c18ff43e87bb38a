use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use patchwork_bench::{betti_of, iv3_datum, iv4_datum};
use patchwork_core::patchwork::{count_all_plus, extend};
use patchwork_core::triangulation::{build_iv3, construct_lift, Iv3Params};

fn surfaces(c: &mut Criterion) {
    let mut g = c.benchmark_group("iv3");
    for m in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::new("build", m), &m, |b, &m| b.iter(|| build_iv3(&Iv3Params::standard(m))));
        let d = iv3_datum(m);
        g.bench_with_input(BenchmarkId::new("betti", m), &d, |b, d| b.iter(|| betti_of(d)));
        let t = build_iv3(&Iv3Params::standard(m)).unwrap();
        g.bench_with_input(BenchmarkId::new("lift", m), &t, |b, t| b.iter(|| construct_lift(t)));
    }
    g.finish();
}

fn threefolds(c: &mut Criterion) {
    let mut g = c.benchmark_group("iv4");
    g.sample_size(10);
    let d = iv4_datum(4);
    g.bench_function("betti/4", |b| b.iter(|| betti_of(&d)));
    for m in [4, 6] {
        let d = iv4_datum(m);
        g.bench_with_input(BenchmarkId::new("chi_plus", m), &d, |b, d| b.iter(|| count_all_plus(&extend(d))));
    }
    g.finish();
}

criterion_group!(benches, surfaces, threefolds);
criterion_main!(benches);

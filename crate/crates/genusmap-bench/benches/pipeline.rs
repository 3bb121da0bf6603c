use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use genusmap::cms::{cms_forward, cms_inverse};
use genusmap::metrics::{Graph, MetricSample};
use genusmap::random::stream_chooser;
use genusmap::sampler::{build_exact, build_float, count_gtrees_upto};
use genusmap::scheme::{decompose, recompose};
use genusmap::tg::estimate_upsilon;

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("counting");
    g.sample_size(10);
    g.bench_function("exact_counts_upto_100", |b| b.iter(|| count_gtrees_upto(1, 100).unwrap()));
    g.bench_function("float_table_10000", |b| b.iter(|| build_float(1, 10_000).unwrap()));
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let exact = build_exact(1, 200).unwrap();
    let float = build_float(1, 10_000).unwrap();
    let mut seed = 0u64;
    c.bench_function("sample_exact_200", |b| {
        b.iter(|| {
            seed += 1;
            exact.sample_gtree(&mut stream_chooser(1, seed)).unwrap()
        })
    });
    c.bench_function("sample_float_10000", |b| {
        b.iter(|| {
            seed += 1;
            float.sample_gtree(&mut stream_chooser(2, seed)).unwrap()
        })
    });
}

fn bijections(c: &mut Criterion) {
    let tree = build_float(1, 10_000).unwrap().sample_gtree(&mut stream_chooser(3, 0)).unwrap();
    c.bench_function("decompose_recompose_10000", |b| b.iter(|| recompose(&decompose(&tree).unwrap()).unwrap()));
    c.bench_function("cms_forward_10000", |b| b.iter(|| cms_forward(&tree, 1)));
    let q = cms_forward(&tree, 1);
    c.bench_function("cms_inverse_10000", |b| b.iter(|| cms_inverse(&q).unwrap()));
}

fn metrics(c: &mut Criterion) {
    let tree = build_float(1, 10_000).unwrap().sample_gtree(&mut stream_chooser(4, 0)).unwrap();
    c.bench_function("metric_sample_10000", |b| {
        b.iter_batched(|| tree.clone(), |t| MetricSample::new(t, 1).unwrap(), BatchSize::SmallInput)
    });
    let graph = Graph::from_map(&cms_forward(&tree, 1).map);
    c.bench_function("bfs_10000", |b| b.iter(|| graph.bfs(0)));
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    g.bench_function("upsilon_65536", |b| b.iter(|| estimate_upsilon(1, 1 << 16, 0).unwrap()));
    g.finish();
}

criterion_group!(benches, counting, sampling, bijections, metrics, monte_carlo);
criterion_main!(benches);

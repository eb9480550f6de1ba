use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tacsearch::predictor::CommandSource;

fn predictor(c: &mut Criterion) {
    let corpus = tacsearch_bench::corpus(2);
    let samples = tacsearch_bench::training_samples(&corpus);
    let p = tacsearch_bench::quick_predictor(&corpus, 1);
    let s = &samples[samples.len() / 2];
    c.bench_function("predict_tactics", |b| {
        b.iter(|| p.predict_tactics(black_box(&s.ctx), 3))
    });
    c.bench_function("rank_commands", |b| {
        b.iter(|| p.rank(black_box(&s.ctx), &s.lemma_pool, 3, 3))
    });
    let mut group = c.benchmark_group("train");
    group.sample_size(10);
    group.bench_function("one_epoch_two_files", |b| {
        b.iter(|| tacsearch_bench::quick_predictor(&corpus, 1))
    });
    group.finish();
}

criterion_group!(benches, predictor);
criterion_main!(benches);

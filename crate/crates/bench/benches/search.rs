use criterion::{criterion_group, criterion_main, Criterion};

use tacsearch::proofscript::theorem_env;
use tacsearch::search::search;

fn search_bench(c: &mut Criterion) {
    let corpus = tacsearch_bench::corpus(2);
    let p = tacsearch_bench::quick_predictor(&corpus, 2);
    let cfg = tacsearch_bench::default_config().search();
    let f = &corpus[1];
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("file_default_width", |b| {
        b.iter(|| {
            f.theorems
                .iter()
                .enumerate()
                .map(|(i, t)| search(&t.statement, &theorem_env(f, i), &p, &cfg).stats.expanded)
                .sum::<usize>()
        })
    });
    group.finish();
}

criterion_group!(benches, search_bench);
criterion_main!(benches);

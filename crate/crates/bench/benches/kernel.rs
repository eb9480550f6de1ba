use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use tacsearch::kernel::{parse_prop, tokenize};
use tacsearch::proofscript::{desugar, linearize, replays, theorem_env};
use tacsearch::search::harder_eq_state;
use tacsearch::{apply_tactic, BaseTactic, ProofCommand, ProofState};

fn kernel(c: &mut Criterion) {
    let p = parse_prop("forall n : nat, forall m : nat, eq (plus n (S m)) (S (plus n m))").unwrap();
    c.bench_function("parse_prop", |b| {
        b.iter(|| parse_prop(black_box("impl (and A (or B C)) (or (and A B) (and A C))")).unwrap())
    });
    c.bench_function("tokenize", |b| b.iter(|| tokenize(black_box(&p))));
    let st = ProofState::initial(p.clone());
    let env = tacsearch::Env::default();
    let intro = ProofCommand::bare(BaseTactic::Intro);
    c.bench_function("apply_intro", |b| {
        b.iter(|| apply_tactic(&env, black_box(&st), &intro).unwrap())
    });
    let s2 = apply_tactic(&env, &st, &intro).unwrap();
    c.bench_function("harder_eq_state", |b| {
        b.iter(|| harder_eq_state(black_box(&s2), black_box(&st)))
    });

    let corpus = tacsearch_bench::corpus(1);
    let f = &corpus[0];
    c.bench_function("replay_file", |b| {
        b.iter(|| {
            f.theorems
                .iter()
                .enumerate()
                .filter(|(i, t)| replays(&theorem_env(f, *i), &t.statement, &t.script))
                .count()
        })
    });
    c.bench_function("linearize_file", |b| {
        b.iter(|| {
            f.theorems
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    linearize(&theorem_env(f, i), &desugar(&t.script), &t.statement)
                        .unwrap()
                        .commands
                        .len()
                })
                .sum::<usize>()
        })
    });
}

criterion_group!(benches, kernel);
criterion_main!(benches);

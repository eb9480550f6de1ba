use tacsearch::pipeline::{build_dataset, evaluate, load_corpus, run, EvalReport, RowOutcome, RunConfig};
use tacsearch::predictor::{tactic_vocab, RandomPredictor};
use tacsearch::proofscript::theorem_env;
use tacsearch::search::Outcome;
use tacsearch::{check_proof, CheckResult};

fn small() -> RunConfig {
    RunConfig {
        gen_files: 5,
        gen_theorems: 8,
        split: 0.6,
        epochs: 3,
        embed_dim: 16,
        ffn_width: 16,
        arg_dim: 8,
        ..RunConfig::default()
    }
}

#[test]
fn report_aggregates_follow_from_rows() {
    let cfg = small();
    let out = run(&cfg).unwrap();
    let r = &out.report;
    assert!(r.theorems > 0);
    assert_eq!(r.rows.len(), r.theorems);
    assert!(r.rows.windows(2).all(|w| w[0].name < w[1].name));
    let solved = r.rows.iter().filter(|x| x.outcome == RowOutcome::Solved).count();
    assert_eq!(r.solved, solved);
    assert_eq!(r.completion_rate, solved as f64 / r.rows.len() as f64);
    let hist_total: usize = r.histogram.iter().map(|b| b.total).sum();
    assert_eq!(hist_total, r.theorems);
    let hist_solved: usize = r.histogram.iter().map(|b| b.solved).sum();
    assert_eq!(hist_solved, solved);
    for row in &r.rows {
        assert_eq!(row.found_length.is_some(), row.outcome == RowOutcome::Solved);
    }
    let back: EvalReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(&back, r);
    assert_eq!(r.rows_csv().lines().count(), r.rows.len() + 1);
    assert_eq!(out.curves.tactic.len(), cfg.epochs);
    assert_eq!(out.curves.argument.len(), cfg.epochs);
}

#[test]
fn found_proofs_replay() {
    let cfg = small();
    let out = run(&cfg).unwrap();
    let corpus = load_corpus(&cfg).unwrap();
    let data = build_dataset(&cfg, &corpus).unwrap();
    for t in &out.runs {
        let Outcome::Proof(p) = &t.result.outcome else { continue };
        let (file, thm) = t.row.name.split_once('.').unwrap();
        let f = data.split.test.iter().find(|f| f.name == file).unwrap();
        let i = f.theorems.iter().position(|x| x.name == thm).unwrap();
        let env = theorem_env(f, i);
        assert_eq!(
            check_proof(&env, &f.theorems[i].statement, p),
            CheckResult::Pass,
            "{}",
            t.row.name
        );
    }
}

#[test]
fn random_baseline_is_deterministic() {
    let cfg = small();
    let corpus = load_corpus(&cfg).unwrap();
    let data = build_dataset(&cfg, &corpus).unwrap();
    let rp = RandomPredictor {
        tactics: tactic_vocab(&data.train),
        seed: cfg.seed,
    };
    let a = evaluate(&cfg, &data, &rp, None).0;
    let b = evaluate(&cfg, &data, &rp, None).0;
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.accuracy.is_none());
}

#[test]
fn disabling_the_transform_shrinks_the_training_set() {
    let cfg = small();
    let corpus = load_corpus(&cfg).unwrap();
    let full = build_dataset(&cfg, &corpus).unwrap();
    let plain = build_dataset(
        &RunConfig {
            disable_transform: true,
            ..cfg
        },
        &corpus,
    )
    .unwrap();
    assert!(plain.train.len() < full.train.len());
    assert_eq!(plain.split.test, full.split.test);
}

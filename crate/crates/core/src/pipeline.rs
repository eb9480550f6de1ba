//! End-to-end runs: corpus, split, sample extraction, training, search over
//! the test theorems and the evaluation report.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpusgen::{generate, read_corpus, split, CorpusError, Split};
use crate::features::TrainingSample;
use crate::kernel::TacticName;
use crate::predictor::{
    accuracy, in_prediction_domain, Accuracy, CommandSource, LossCurves, ModelConfig, Predictor, PredictorError,
    TrainConfig,
};
use crate::proofscript::{
    desugar, extract_samples, extract_samples_untransformed, linearize, theorem_env, LinearizeError, ScriptFile,
};
use crate::search::{search, Outcome, SearchConfig, SearchResult};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{file}: {source}")]
    Linearize {
        file: String,
        #[source]
        source: LinearizeError,
    },
    #[error(transparent)]
    Predictor(#[from] PredictorError),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

/// Everything that determines a run. Serialized as flat `key=value` lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Corpus directory; `None` generates one from `seed`.
    pub corpus: Option<PathBuf>,
    pub gen_files: usize,
    pub gen_theorems: usize,
    /// Fraction of files used for training.
    pub split: f64,
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    pub decay: f64,
    pub inject: usize,
    pub width: usize,
    pub depth: usize,
    pub budget: usize,
    pub disable_transform: bool,
    pub embed_dim: usize,
    pub ffn_width: usize,
    pub arg_dim: usize,
    pub token_vocab: usize,
    pub max_seq: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let m = ModelConfig::default();
        let t = TrainConfig::default();
        let s = SearchConfig::default();
        RunConfig {
            seed: 0,
            corpus: None,
            gen_files: 40,
            gen_theorems: 30,
            split: 0.9,
            epochs: t.epochs,
            batch: t.batch,
            lr: t.lr,
            decay: t.decay,
            inject: t.inject,
            width: s.width,
            depth: s.depth,
            budget: s.budget,
            disable_transform: false,
            embed_dim: m.embed_dim,
            ffn_width: m.ffn_width,
            arg_dim: m.arg_dim,
            token_vocab: m.token_vocab,
            max_seq: m.max_seq,
            out: PathBuf::from("out"),
        }
    }
}

/// Independent seed for one stage of a run.
pub fn stage_seed(root: u64, stage: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = root ^ stage.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const SPLIT_STAGE: u64 = 1;
const TRAIN_STAGE: u64 = 2;

impl RunConfig {
    pub fn model(&self) -> ModelConfig {
        ModelConfig {
            embed_dim: self.embed_dim,
            ffn_width: self.ffn_width,
            arg_dim: self.arg_dim,
            token_vocab: self.token_vocab,
            max_seq: self.max_seq,
        }
    }

    pub fn training(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch: self.batch,
            lr: self.lr,
            decay: self.decay,
            inject: self.inject,
            seed: stage_seed(self.seed, TRAIN_STAGE),
        }
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            width: self.width,
            depth: self.depth,
            budget: self.budget,
        }
    }

    pub fn to_kv(&self) -> String {
        let corpus = self
            .corpus
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_default();
        let pairs: [(&str, String); 21] = [
            ("seed", self.seed.to_string()),
            ("corpus", corpus),
            ("gen_files", self.gen_files.to_string()),
            ("gen_theorems", self.gen_theorems.to_string()),
            ("split", self.split.to_string()),
            ("epochs", self.epochs.to_string()),
            ("batch", self.batch.to_string()),
            ("lr", self.lr.to_string()),
            ("decay", self.decay.to_string()),
            ("inject", self.inject.to_string()),
            ("width", self.width.to_string()),
            ("depth", self.depth.to_string()),
            ("budget", self.budget.to_string()),
            ("disable_transform", self.disable_transform.to_string()),
            ("embed_dim", self.embed_dim.to_string()),
            ("ffn_width", self.ffn_width.to_string()),
            ("arg_dim", self.arg_dim.to_string()),
            ("token_vocab", self.token_vocab.to_string()),
            ("max_seq", self.max_seq.to_string()),
            ("out", self.out.display().to_string()),
            ("version", "1".to_owned()),
        ];
        let mut s = String::new();
        for (k, v) in pairs {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// Parse `key=value` lines over the defaults. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_kv(text: &str) -> Result<RunConfig, PipelineError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| PipelineError::Config { line: i + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key=value".into()))?;
            cfg.set(k.trim(), v.trim()).map_err(err)?;
        }
        Ok(cfg)
    }

    /// Set one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn p<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value for {key}: {v:?}"))
        }
        match key {
            "seed" => self.seed = p(key, value)?,
            "corpus" => self.corpus = (!value.is_empty()).then(|| PathBuf::from(value)),
            "gen_files" => self.gen_files = p(key, value)?,
            "gen_theorems" => self.gen_theorems = p(key, value)?,
            "split" => self.split = p(key, value)?,
            "epochs" => self.epochs = p(key, value)?,
            "batch" => self.batch = p(key, value)?,
            "lr" => self.lr = p(key, value)?,
            "decay" => self.decay = p(key, value)?,
            "inject" => self.inject = p(key, value)?,
            "width" => self.width = p(key, value)?,
            "depth" => self.depth = p(key, value)?,
            "budget" => self.budget = p(key, value)?,
            "disable_transform" => self.disable_transform = p(key, value)?,
            "embed_dim" => self.embed_dim = p(key, value)?,
            "ffn_width" => self.ffn_width = p(key, value)?,
            "arg_dim" => self.arg_dim = p(key, value)?,
            "token_vocab" => self.token_vocab = p(key, value)?,
            "max_seq" => self.max_seq = p(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "version" if value == "1" => {}
            "version" => return Err(format!("unsupported config version {value}")),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}

/// Read the configured corpus, or generate it from the root seed.
pub fn load_corpus(cfg: &RunConfig) -> Result<Vec<ScriptFile>, PipelineError> {
    match &cfg.corpus {
        Some(dir) => Ok(read_corpus(dir)?),
        None => Ok(generate(cfg.seed, cfg.gen_files, cfg.gen_theorems)),
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub split: Split,
    pub train: Vec<TrainingSample>,
    pub test: Vec<TrainingSample>,
    /// Proofs that could not be linearized, over both splits.
    pub dropped: usize,
}

/// Samples from `files`, with or without the tactical transformation.
pub fn samples(files: &[ScriptFile], transform: bool) -> Result<(Vec<TrainingSample>, usize), PipelineError> {
    let mut out = Vec::new();
    let mut dropped = 0;
    for f in files {
        if transform {
            let (s, st) = extract_samples(f).map_err(|source| PipelineError::Linearize {
                file: f.name.clone(),
                source,
            })?;
            out.extend(s);
            dropped += st.dropped;
        } else {
            out.extend(extract_samples_untransformed(f));
        }
    }
    Ok((out, dropped))
}

pub fn build_dataset(cfg: &RunConfig, corpus: &[ScriptFile]) -> Result<Dataset, PipelineError> {
    let split = split(corpus, cfg.split, stage_seed(cfg.seed, SPLIT_STAGE));
    let transform = !cfg.disable_transform;
    let (train, d1) = samples(&split.train, transform)?;
    let (test, d2) = samples(&split.test, transform)?;
    Ok(Dataset {
        split,
        train,
        test,
        dropped: d1 + d2,
    })
}

pub fn train(cfg: &RunConfig, data: &Dataset) -> Result<(Predictor, LossCurves), PipelineError> {
    Ok(Predictor::train(&data.train, &cfg.model(), &cfg.training())?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowOutcome {
    Solved,
    DepthLimited,
    Exhausted,
}

impl RowOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            RowOutcome::Solved => "solved",
            RowOutcome::DepthLimited => "depth-limited",
            RowOutcome::Exhausted => "exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRow {
    /// `file.theorem`.
    pub name: String,
    /// Commands in the proof as written.
    pub original_length: usize,
    pub outcome: RowOutcome,
    pub found_length: Option<usize>,
    pub expanded: usize,
    pub pruned: usize,
    /// Every command of the linearized reference proof can be predicted.
    pub in_domain: bool,
}

/// A searched theorem and its full search record.
#[derive(Clone, Debug)]
pub struct TheoremRun {
    pub row: EvalRow,
    pub result: SearchResult,
}

fn original_length(t: &crate::proofscript::TheoremScript) -> usize {
    let mut names: Vec<TacticName> = Vec::new();
    t.script.tactic_names(&mut names);
    names.len()
}

/// Search every theorem of `files` with `source`, sorted by name.
pub fn search_theorems(cfg: &SearchConfig, source: &dyn CommandSource, files: &[ScriptFile]) -> Vec<TheoremRun> {
    let mut runs = Vec::new();
    for f in files {
        for (i, t) in f.theorems.iter().enumerate() {
            let env = theorem_env(f, i);
            let in_domain = linearize(&env, &desugar(&t.script), &t.statement)
                .is_ok_and(|l| l.dropped == 0 && l.commands.iter().all(in_prediction_domain));
            let result = search(&t.statement, &env, source, cfg);
            let (outcome, found_length) = match &result.outcome {
                Outcome::Proof(p) => (RowOutcome::Solved, Some(p.len())),
                Outcome::DepthLimited => (RowOutcome::DepthLimited, None),
                Outcome::ExhaustedSpace { .. } => (RowOutcome::Exhausted, None),
            };
            runs.push(TheoremRun {
                row: EvalRow {
                    name: format!("{}.{}", f.name, t.name),
                    original_length: original_length(t),
                    outcome,
                    found_length,
                    expanded: result.stats.expanded,
                    pruned: result.stats.pruned,
                    in_domain,
                },
                result,
            });
        }
    }
    runs.sort_by(|a, b| a.row.name.cmp(&b.row.name));
    runs
}

/// Proofs of lengths `lo..=hi`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistBin {
    pub lo: usize,
    pub hi: usize,
    pub total: usize,
    pub solved: usize,
    pub depth_limited: usize,
    pub exhausted: usize,
}

/// Bin bounds for a proof length: single lengths up to 10, then decades.
pub fn bin_bounds(len: usize) -> (usize, usize) {
    if len <= 10 {
        (len, len)
    } else {
        let lo = (len - 1) / 10 * 10 + 1;
        (lo, lo + 9)
    }
}

/// Every bin from length 1 to the longest proof, including empty ones.
pub fn histogram(rows: &[EvalRow]) -> Vec<HistBin> {
    let max = rows.iter().map(|r| r.original_length).max().unwrap_or(0);
    let mut bins: Vec<HistBin> = Vec::new();
    let mut len = usize::from(rows.iter().all(|r| r.original_length > 0));
    while len <= max {
        let (lo, hi) = bin_bounds(len);
        bins.push(HistBin {
            lo,
            hi,
            ..HistBin::default()
        });
        len = hi + 1;
    }
    for r in rows {
        let b = bins
            .iter_mut()
            .find(|b| (b.lo..=b.hi).contains(&r.original_length))
            .expect("bins cover every length");
        b.total += 1;
        match r.outcome {
            RowOutcome::Solved => b.solved += 1,
            RowOutcome::DepthLimited => b.depth_limited += 1,
            RowOutcome::Exhausted => b.exhausted += 1,
        }
    }
    bins
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub theorems: usize,
    pub solved: usize,
    pub completion_rate: f64,
    pub in_domain_theorems: usize,
    pub in_domain_solved: usize,
    pub in_domain_completion_rate: f64,
    /// Prediction accuracy on the test samples; absent for baselines.
    pub accuracy: Option<Accuracy>,
    pub train_samples: usize,
    pub test_samples: usize,
    pub dropped: usize,
    pub histogram: Vec<HistBin>,
}

fn rate(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

impl EvalReport {
    /// Aggregate `rows` (which must already be sorted by name).
    pub fn from_rows(rows: Vec<EvalRow>, accuracy: Option<Accuracy>, data: &Dataset) -> EvalReport {
        let solved = rows.iter().filter(|r| r.outcome == RowOutcome::Solved).count();
        let dom: Vec<&EvalRow> = rows.iter().filter(|r| r.in_domain).collect();
        let dom_solved = dom.iter().filter(|r| r.outcome == RowOutcome::Solved).count();
        EvalReport {
            theorems: rows.len(),
            solved,
            completion_rate: rate(solved, rows.len()),
            in_domain_theorems: dom.len(),
            in_domain_solved: dom_solved,
            in_domain_completion_rate: rate(dom_solved, dom.len()),
            accuracy,
            train_samples: data.train.len(),
            test_samples: data.test.len(),
            dropped: data.dropped,
            histogram: histogram(&rows),
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn rows_csv(&self) -> String {
        let mut s = String::from("name,original_length,outcome,found_length,expanded,pruned,in_domain\n");
        for r in &self.rows {
            let found = r.found_length.map(|n| n.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.name,
                r.original_length,
                r.outcome.as_str(),
                found,
                r.expanded,
                r.pruned,
                r.in_domain
            );
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("metric,value\n");
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k},{v}");
        };
        put("theorems", self.theorems.to_string());
        put("solved", self.solved.to_string());
        put("completion_rate", self.completion_rate.to_string());
        put("in_domain_theorems", self.in_domain_theorems.to_string());
        put("in_domain_solved", self.in_domain_solved.to_string());
        put("in_domain_completion_rate", self.in_domain_completion_rate.to_string());
        if let Some(a) = &self.accuracy {
            put("top1", a.top1.to_string());
            put("top3", a.top3.to_string());
            put("top5", a.top5.to_string());
            put("arg_conditional", a.arg_conditional.to_string());
        }
        put("train_samples", self.train_samples.to_string());
        put("test_samples", self.test_samples.to_string());
        put("dropped", self.dropped.to_string());
        s
    }

    pub fn histogram_csv(&self) -> String {
        let mut s = String::from("lo,hi,total,solved,depth_limited,exhausted\n");
        for b in &self.histogram {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                b.lo, b.hi, b.total, b.solved, b.depth_limited, b.exhausted
            );
        }
        s
    }
}

/// Results of a full train-and-evaluate run.
#[derive(Clone, Debug)]
pub struct EvalRun {
    pub predictor: Predictor,
    pub curves: LossCurves,
    pub report: EvalReport,
    pub runs: Vec<TheoremRun>,
}

/// Search the test theorems with `source` and build the report.
pub fn evaluate(
    cfg: &RunConfig,
    data: &Dataset,
    source: &dyn CommandSource,
    accuracy: Option<Accuracy>,
) -> (EvalReport, Vec<TheoremRun>) {
    let runs = search_theorems(&cfg.search(), source, &data.split.test);
    let rows = runs.iter().map(|r| r.row.clone()).collect();
    (EvalReport::from_rows(rows, accuracy, data), runs)
}

/// Load or generate the corpus, train on the training split and evaluate
/// on the test split.
pub fn run(cfg: &RunConfig) -> Result<EvalRun, PipelineError> {
    let corpus = load_corpus(cfg)?;
    let data = build_dataset(cfg, &corpus)?;
    let (predictor, curves) = train(cfg, &data)?;
    let acc = accuracy(&predictor, &data.test);
    let (report, runs) = evaluate(cfg, &data, &predictor, Some(acc));
    Ok(EvalRun {
        predictor,
        curves,
        report,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig {
            seed: 9,
            corpus: Some(PathBuf::from("/tmp/c")),
            lr: 0.25,
            disable_transform: true,
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
        assert_eq!(
            RunConfig::from_kv(&RunConfig::default().to_kv()).unwrap(),
            RunConfig::default()
        );
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(matches!(
            RunConfig::from_kv("seed=1\nwidht=3"),
            Err(PipelineError::Config { line: 2, .. })
        ));
        assert!(RunConfig::from_kv("depth=x").is_err());
        assert_eq!(RunConfig::from_kv("# c\n\n depth = 4 ").unwrap().depth, 4);
    }

    #[test]
    fn bins() {
        assert_eq!(bin_bounds(1), (1, 1));
        assert_eq!(bin_bounds(10), (10, 10));
        assert_eq!(bin_bounds(11), (11, 20));
        assert_eq!(bin_bounds(20), (11, 20));
        assert_eq!(bin_bounds(21), (21, 30));
    }

    #[test]
    fn histogram_covers_all_lengths() {
        let row = |len, outcome| EvalRow {
            name: String::new(),
            original_length: len,
            outcome,
            found_length: None,
            expanded: 0,
            pruned: 0,
            in_domain: true,
        };
        let h = histogram(&[row(2, RowOutcome::Solved), row(13, RowOutcome::Exhausted)]);
        assert_eq!(h.len(), 11);
        assert_eq!(h[0].lo, 1);
        assert_eq!((h[1].total, h[1].solved), (1, 1));
        assert_eq!((h[10].lo, h[10].hi, h[10].exhausted), (11, 20, 1));
    }

    #[test]
    fn stage_seeds_differ() {
        assert_ne!(stage_seed(0, 1), stage_seed(0, 2));
        assert_ne!(stage_seed(0, 1), stage_seed(1, 1));
    }
}

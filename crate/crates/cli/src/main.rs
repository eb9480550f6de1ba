use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tacsearch::corpusgen::{generate, write_corpus};
use tacsearch::kernel::parse_prop;
use tacsearch::pipeline::{self, EvalReport, RunConfig};
use tacsearch::predictor::{accuracy, load_predictor, save_predictor, tactic_vocab, Predictor, RandomPredictor};
use tacsearch::proofscript::theorem_env;
use tacsearch::search::{search, to_dot, to_json, Outcome};
use tacsearch::Env;

#[derive(Parser)]
#[command(name = "tacsearch", version, about = "Learned tactic prediction and proof search")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic corpus and its manifest.
    Gen {
        #[command(flatten)]
        run: RunArgs,
        /// Number of files.
        #[arg(long, default_value_t = 40)]
        files: usize,
        /// Theorems per file.
        #[arg(long, default_value_t = 30)]
        theorems: usize,
    },
    /// Train both predictors and write weights and loss curves.
    Train {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for a proof of one theorem.
    Prove {
        #[command(flatten)]
        run: RunArgs,
        /// Weights written by `train`.
        #[arg(long)]
        weights: PathBuf,
        /// `file.theorem` in the corpus; earlier theorems of the file are
        /// available as lemmas.
        #[arg(long, conflicts_with = "goal")]
        theorem: Option<String>,
        /// A proposition to prove with no lemmas or definitions.
        #[arg(long)]
        goal: Option<String>,
    },
    /// Train (or load weights), search every test theorem and write the
    /// evaluation report.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// Use these weights instead of training.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Source::Trained)]
        predictor: Source,
    },
    /// Write the length histogram of an evaluation report as CSV.
    Report {
        /// `report.json` written by `eval`.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Trained,
    Random,
}

/// Flags shared by every run. Unset flags fall back to `--config`, then to
/// the defaults.
#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Corpus directory; generated from the seed when absent.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Fraction of files used for training.
    #[arg(long)]
    split: Option<f64>,
    /// Default 20.
    #[arg(long)]
    epochs: Option<usize>,
    /// Default 32.
    #[arg(long)]
    batch: Option<usize>,
    /// Default 3.
    #[arg(long)]
    width: Option<usize>,
    /// Default 6.
    #[arg(long)]
    depth: Option<usize>,
    /// Default 512.
    #[arg(long)]
    budget: Option<usize>,
    /// Train on plain top-level commands only, without desugaring.
    #[arg(long)]
    disable_transform: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                RunConfig::from_kv(&text)?
            }
            None => RunConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => { $(if let Some(v) = &self.$f { cfg.$f = v.clone(); })* };
        }
        over!(seed, split, epochs, batch, width, depth, budget, out);
        if self.corpus.is_some() {
            cfg.corpus = self.corpus.clone();
        }
        if self.disable_transform {
            cfg.disable_transform = true;
        }
        if !(cfg.split > 0.0 && cfg.split < 1.0) {
            bail!("--split must lie strictly between 0 and 1");
        }
        if cfg.width == 0 || cfg.depth == 0 {
            bail!("--width and --depth must be positive");
        }
        Ok(cfg)
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    write(&cfg.out.join("config.txt"), cfg.to_kv())
}

fn loss_csv(curves: &tacsearch::predictor::LossCurves) -> String {
    let mut s = String::from("epoch,tactic_loss,argument_loss\n");
    for (i, t) in curves.tactic.iter().enumerate() {
        let a = curves.argument.get(i).map(f64::to_string).unwrap_or_default();
        s.push_str(&format!("{},{},{}\n", i + 1, t, a));
    }
    s
}

fn cmd_gen(cfg: &RunConfig, files: usize, theorems: usize) -> Result<()> {
    if files == 0 {
        bail!("--files must be positive");
    }
    prepare_out(cfg)?;
    let corpus = generate(cfg.seed, files, theorems);
    let manifest = write_corpus(&cfg.out, &corpus, Some(cfg.seed))?;
    println!("wrote {} files to {}", manifest.files.len(), cfg.out.display());
    Ok(())
}

fn cmd_train(cfg: &RunConfig) -> Result<()> {
    prepare_out(cfg)?;
    let corpus = pipeline::load_corpus(cfg)?;
    let data = pipeline::build_dataset(cfg, &corpus)?;
    let (p, curves) = pipeline::train(cfg, &data)?;
    save_predictor(&p, &cfg.out.join("weights.bin"))?;
    write(&cfg.out.join("loss.csv"), loss_csv(&curves))?;
    println!(
        "trained on {} samples; final tactic loss {:.4}, argument loss {:.4}",
        data.train.len(),
        curves.tactic.last().copied().unwrap_or(0.0),
        curves.argument.last().copied().unwrap_or(0.0)
    );
    Ok(())
}

fn cmd_prove(cfg: &RunConfig, weights: &Path, theorem: Option<&str>, goal: Option<&str>) -> Result<()> {
    let p = load_predictor(weights).with_context(|| format!("loading {}", weights.display()))?;
    let (statement, env) = match (theorem, goal) {
        (Some(name), _) => {
            let corpus = pipeline::load_corpus(cfg)?;
            let (file, thm) = name.split_once('.').context("--theorem must look like file.theorem")?;
            let f = corpus
                .iter()
                .find(|f| f.name == file)
                .with_context(|| format!("no file {file} in the corpus"))?;
            let i = f
                .theorems
                .iter()
                .position(|t| t.name == thm)
                .with_context(|| format!("no theorem {thm} in {file}"))?;
            (f.theorems[i].statement.clone(), theorem_env(f, i))
        }
        (None, Some(g)) => (parse_prop(g)?, Env::default()),
        (None, None) => bail!("give --theorem or --goal"),
    };
    prepare_out(cfg)?;
    let r = search(&statement, &env, &p, &cfg.search());
    write(&cfg.out.join("tree.dot"), to_dot(&r.tree))?;
    write(&cfg.out.join("tree.json"), to_json(&r.tree))?;
    match &r.outcome {
        Outcome::Proof(cmds) => {
            let mut text = String::from("Proof.\n");
            for c in cmds {
                text.push_str(&format!("  {c}.\n"));
            }
            text.push_str("Qed.\n");
            write(&cfg.out.join("proof.txt"), &text)?;
            print!("{text}");
        }
        Outcome::DepthLimited => println!("no proof: depth limit reached"),
        Outcome::ExhaustedSpace { budget_exhausted } => {
            println!(
                "no proof: search space exhausted{}",
                if *budget_exhausted { " (budget)" } else { "" }
            )
        }
    }
    println!("expanded {}, pruned {}", r.stats.expanded, r.stats.pruned);
    Ok(())
}

fn write_report(out: &Path, report: &EvalReport) -> Result<()> {
    write(&out.join("report.json"), report.to_json())?;
    write(&out.join("report.csv"), report.rows_csv())?;
    write(&out.join("summary.csv"), report.summary_csv())
}

fn cmd_eval(cfg: &RunConfig, weights: Option<&Path>, source: Source) -> Result<()> {
    prepare_out(cfg)?;
    let corpus = pipeline::load_corpus(cfg)?;
    let data = pipeline::build_dataset(cfg, &corpus)?;
    let report = match source {
        Source::Random => {
            let rp = RandomPredictor {
                tactics: tactic_vocab(&data.train),
                seed: cfg.seed,
            };
            pipeline::evaluate(cfg, &data, &rp, None).0
        }
        Source::Trained => {
            let p: Predictor = match weights {
                Some(w) => load_predictor(w).with_context(|| format!("loading {}", w.display()))?,
                None => {
                    let (p, curves) = pipeline::train(cfg, &data)?;
                    write(&cfg.out.join("loss.csv"), loss_csv(&curves))?;
                    p
                }
            };
            let acc = accuracy(&p, &data.test);
            pipeline::evaluate(cfg, &data, &p, Some(acc)).0
        }
    };
    write_report(&cfg.out, &report)?;
    println!(
        "solved {}/{} ({:.2}%), {} training samples",
        report.solved,
        report.theorems,
        100.0 * report.completion_rate,
        report.train_samples
    );
    Ok(())
}

fn cmd_report(path: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report: EvalReport = serde_json::from_str(&text).context("parsing report")?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write(&out.join("histogram.csv"), report.histogram_csv())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Gen { run, files, theorems } => run.resolve().and_then(|c| cmd_gen(&c, *files, *theorems)),
        Cmd::Train { run } => run.resolve().and_then(|c| cmd_train(&c)),
        Cmd::Prove {
            run,
            weights,
            theorem,
            goal,
        } => run
            .resolve()
            .and_then(|c| cmd_prove(&c, weights, theorem.as_deref(), goal.as_deref())),
        Cmd::Eval {
            run,
            weights,
            predictor,
        } => run.resolve().and_then(|c| cmd_eval(&c, weights.as_deref(), *predictor)),
        Cmd::Report { report, out } => cmd_report(report, out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

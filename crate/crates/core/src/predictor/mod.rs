//! Tactic and argument predictors, their product combination, training
//! loops, accuracy metrics and a uniform-random baseline.

mod argument;
mod metrics;
mod persist;
mod random;
mod tactic;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{PredictionContext, TrainingSample};
use crate::kernel::{BaseTactic, Ident, ProofCommand, Prop, TacticName};

pub use argument::{candidates, ArgumentModel};
pub use metrics::{accuracy, arg_conditional_accuracy, in_prediction_domain, top_k_accuracy, Accuracy, METRIC_BEAM};
pub use persist::{load_predictor, predictor_from_weights, predictor_to_weights, save_predictor};
pub use random::RandomPredictor;
pub use tactic::TacticModel;

#[derive(Debug, Error)]
pub enum PredictorError {
    #[error("no training samples")]
    NoSamples,
    #[error(transparent)]
    Weights(#[from] crate::neural::WeightsError),
    #[error("weights file does not match the model layout: {0}")]
    Layout(String),
}

/// Network sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Width of the tactic model's feature embeddings.
    pub embed_dim: usize,
    /// Width of the tactic classifier's hidden layers.
    pub ffn_width: usize,
    /// Token embedding width and hidden size of the argument GRUs.
    pub arg_dim: usize,
    /// Cap on the argument model's token vocabulary.
    pub token_vocab: usize,
    /// Hypothesis and lemma sequences are cut to this many tokens.
    pub max_seq: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            embed_dim: 128,
            ffn_width: 128,
            arg_dim: 64,
            token_vocab: 1000,
            max_seq: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch: usize,
    pub lr: f64,
    /// Learning-rate multiplier applied after every epoch.
    pub decay: f64,
    /// Tactics injected per sample when training the argument model.
    pub inject: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 20,
            batch: 32,
            lr: 1.0,
            decay: 0.8,
            inject: 3,
            seed: 0,
        }
    }
}

/// One scored candidate. `order` is the candidate's position in its
/// canonical enumeration and breaks score ties.
#[derive(Clone, Debug, PartialEq)]
pub struct Scored<K> {
    pub item: K,
    pub score: f64,
    pub order: usize,
}

/// Candidates with nonnegative scores, best first.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMap<K> {
    pub entries: Vec<Scored<K>>,
}

impl<K: PartialEq> ScoreMap<K> {
    /// Rank `items` (given in canonical order) by descending score.
    pub fn ranked(items: impl IntoIterator<Item = (K, f64)>) -> ScoreMap<K> {
        let mut entries: Vec<Scored<K>> = items
            .into_iter()
            .enumerate()
            .map(|(order, (item, score))| Scored { item, score, order })
            .collect();
        sort_entries(&mut entries);
        ScoreMap { entries }
    }

    pub fn truncate(mut self, n: usize) -> ScoreMap<K> {
        self.entries.truncate(n);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<f64> {
        self.entries.iter().find(|e| &e.item == k).map(|e| e.score)
    }

    pub fn position(&self, k: &K) -> Option<usize> {
        self.entries.iter().position(|e| &e.item == k)
    }

    pub fn items(&self) -> impl Iterator<Item = &K> {
        self.entries.iter().map(|e| &e.item)
    }
}

fn sort_entries<K>(entries: &mut [Scored<K>]) {
    entries.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.order.cmp(&b.order)));
}

/// Product of tactic and argument scores, ranked best first. Ties break by
/// the tactic's order, then the argument's.
pub fn combine(
    tactics: &ScoreMap<TacticName>,
    args: &[(TacticName, ScoreMap<crate::kernel::Argument>)],
) -> ScoreMap<ProofCommand> {
    let mut raw = Vec::new();
    for t in &tactics.entries {
        let Some((_, am)) = args.iter().find(|(n, _)| *n == t.item) else {
            continue;
        };
        for a in &am.entries {
            raw.push((
                (t.order, a.order),
                ProofCommand::new(t.item, a.item.clone()),
                t.score * a.score,
            ));
        }
    }
    raw.sort_by_key(|r| r.0);
    ScoreMap::ranked(raw.into_iter().map(|(_, c, s)| (c, s)))
}

/// Tactic vocabulary for a training split: every base tactic that can be
/// predicted, then the `try` variants seen in labels. `assert` takes a
/// full proposition and is never predicted.
pub fn tactic_vocab(samples: &[TrainingSample]) -> Vec<TacticName> {
    let mut out: Vec<TacticName> = BaseTactic::ALL
        .into_iter()
        .filter(|&b| b != BaseTactic::Assert)
        .map(TacticName::Base)
        .collect();
    let mut tries: Vec<TacticName> = samples
        .iter()
        .map(|s| s.label.tactic)
        .filter(|t| matches!(t, TacticName::Try(b) if *b != BaseTactic::Assert))
        .collect();
    tries.sort();
    tries.dedup();
    out.extend(tries);
    out
}

/// Anything that ranks proof commands for a context.
pub trait CommandSource {
    /// Up to `n` tactics with up to `m` arguments each, best first.
    fn rank(&self, ctx: &PredictionContext, pool: &[(Ident, Prop)], n: usize, m: usize) -> ScoreMap<ProofCommand>;
}

/// A trained tactic model and argument model.
#[derive(Clone, Debug, PartialEq)]
pub struct Predictor {
    pub config: ModelConfig,
    pub tactic: TacticModel,
    pub argument: ArgumentModel,
}

/// Mean training loss per epoch.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossCurves {
    pub tactic: Vec<f64>,
    pub argument: Vec<f64>,
}

impl Predictor {
    pub fn train(
        samples: &[TrainingSample],
        model: &ModelConfig,
        train: &TrainConfig,
    ) -> Result<(Predictor, LossCurves), PredictorError> {
        let (tactic, tloss) = TacticModel::train(samples, model, train)?;
        let (argument, aloss) = ArgumentModel::train(samples, &tactic, model, train)?;
        Ok((
            Predictor {
                config: model.clone(),
                tactic,
                argument,
            },
            LossCurves {
                tactic: tloss,
                argument: aloss,
            },
        ))
    }

    pub fn predict_tactics(&self, ctx: &PredictionContext, n: usize) -> ScoreMap<TacticName> {
        self.tactic.predict(ctx, n)
    }

    pub fn predict_args(
        &self,
        tactic: TacticName,
        ctx: &PredictionContext,
        pool: &[(Ident, Prop)],
        m: usize,
    ) -> ScoreMap<crate::kernel::Argument> {
        self.argument.predict(tactic, ctx, pool, m)
    }
}

impl CommandSource for Predictor {
    fn rank(&self, ctx: &PredictionContext, pool: &[(Ident, Prop)], n: usize, m: usize) -> ScoreMap<ProofCommand> {
        let tactics = self.tactic.predict(ctx, n);
        let names: Vec<TacticName> = tactics.items().copied().collect();
        let args = self.argument.predict_many(&names, ctx, pool, m);
        combine(&tactics, &names.into_iter().zip(args).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Argument;

    #[test]
    fn product_ranking() {
        let unfold = TacticName::Base(BaseTactic::Unfold);
        let destruct = TacticName::Base(BaseTactic::Destruct);
        let tac = ScoreMap::ranked([(unfold, 0.6), (destruct, 0.3)]);
        let tok = |s: &str| Argument::GoalToken(s.into());
        let args = vec![
            (unfold, ScoreMap::ranked([(tok("not"), 0.9), (tok("eq"), 0.05)])),
            (destruct, ScoreMap::ranked([(tok("x"), 0.5)])),
        ];
        let c = combine(&tac, &args);
        let got: Vec<(String, f64)> = c.entries.iter().map(|e| (e.item.to_string(), e.score)).collect();
        let want = [("unfold not", 0.54), ("destruct x", 0.15), ("unfold eq", 0.03)];
        assert_eq!(got.len(), 3);
        for ((g, s), (w, t)) in got.iter().zip(want) {
            assert_eq!(g, w);
            assert!((s - t).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_tactic_score_zeroes_commands() {
        let a = TacticName::Base(BaseTactic::Split);
        let b = TacticName::Base(BaseTactic::Left);
        let tac = ScoreMap::ranked([(a, 0.0), (b, 0.5)]);
        let none = || ScoreMap::ranked([(Argument::None, 1.0)]);
        let c = combine(&tac, &[(a, none()), (b, none())]);
        assert_eq!(c.get(&ProofCommand::bare(a)), Some(0.0));
        assert_eq!(c.entries[0].item, ProofCommand::bare(b));
    }

    #[test]
    fn ties_follow_canonical_order() {
        let m = ScoreMap::ranked([("b", 1.0), ("a", 1.0), ("c", 2.0)]);
        assert_eq!(m.items().copied().collect::<Vec<_>>(), ["c", "b", "a"]);
    }
}

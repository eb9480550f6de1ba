use serde::{Deserialize, Serialize};

use crate::features::TrainingSample;
use crate::kernel::{ArgKind, ProofCommand};

use super::{CommandSource, Predictor};

/// Tactic and argument beam used when ranking commands for accuracy.
pub const METRIC_BEAM: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub samples: usize,
    pub top1: f64,
    pub top3: f64,
    pub top5: f64,
    /// Fraction of samples with a correct top-1 tactic whose top-1 argument
    /// for that tactic is also correct.
    pub arg_conditional: f64,
}

fn frac(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

/// 0-based rank of each sample's label among its combined predictions.
fn label_ranks(p: &Predictor, samples: &[TrainingSample]) -> Vec<Option<usize>> {
    samples
        .iter()
        .map(|s| {
            p.rank(&s.ctx, &s.lemma_pool, METRIC_BEAM, METRIC_BEAM)
                .position(&s.label)
        })
        .collect()
}

/// Fraction of samples whose label is among the top `k` combined commands.
pub fn top_k_accuracy(p: &Predictor, samples: &[TrainingSample], k: usize) -> f64 {
    let hits = label_ranks(p, samples)
        .iter()
        .filter(|r| r.is_some_and(|r| r < k))
        .count();
    frac(hits, samples.len())
}

pub fn arg_conditional_accuracy(p: &Predictor, samples: &[TrainingSample]) -> f64 {
    let (mut tac_ok, mut both_ok) = (0, 0);
    for s in samples {
        let top = p.predict_tactics(&s.ctx, 1);
        if top.entries[0].item != s.label.tactic {
            continue;
        }
        tac_ok += 1;
        let args = p.predict_args(s.label.tactic, &s.ctx, &s.lemma_pool, 1);
        if args.entries.first().is_some_and(|a| a.item == s.label.arg) {
            both_ok += 1;
        }
    }
    frac(both_ok, tac_ok)
}

/// Every metric in one pass over the ranked predictions.
pub fn accuracy(p: &Predictor, samples: &[TrainingSample]) -> Accuracy {
    let ranks = label_ranks(p, samples);
    let within = |k: usize| frac(ranks.iter().filter(|r| r.is_some_and(|r| r < k)).count(), samples.len());
    Accuracy {
        samples: samples.len(),
        top1: within(1),
        top3: within(3),
        top5: within(5),
        arg_conditional: arg_conditional_accuracy(p, samples),
    }
}

/// Commands the predictor can emit: no argument, or one hypothesis, lemma
/// or goal-token argument.
pub fn in_prediction_domain(cmd: &ProofCommand) -> bool {
    matches!(
        cmd.arg.kind(),
        ArgKind::None | ArgKind::GoalToken | ArgKind::HypIdent | ArgKind::LemmaIdent
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_prop, Argument, BaseTactic};

    #[test]
    fn domain() {
        assert!(in_prediction_domain(&ProofCommand::bare(BaseTactic::Reflexivity)));
        assert!(in_prediction_domain(&ProofCommand::new(
            BaseTactic::Unfold,
            Argument::GoalToken("not".into())
        )));
        assert!(!in_prediction_domain(&ProofCommand::new(
            BaseTactic::Assert,
            Argument::Expr(parse_prop("A").unwrap())
        )));
    }
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::features::{encode_features, EncodedFeatures, FeatureVocab, PredictionContext, TrainSplit, TrainingSample};
use crate::kernel::TacticName;
use crate::neural::{softmax, FeedForward, Grads, Graph, NodeId, ParamId, ParamStore, Tensor};

use super::{tactic_vocab, ModelConfig, PredictorError, ScoreMap, TrainConfig};

/// Three feature embeddings and the similarity feed a feed-forward
/// classifier over the tactic vocabulary.
#[derive(Clone, Debug, PartialEq)]
pub struct TacticModel {
    pub params: ParamStore,
    pub tactics: Vec<TacticName>,
    pub features: FeatureVocab,
    e_prev: ParamId,
    e_goal: ParamId,
    e_hyp: ParamId,
    ff: FeedForward,
}

impl TacticModel {
    pub fn new(cfg: &ModelConfig, tactics: Vec<TacticName>, features: FeatureVocab, seed: u64) -> TacticModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = ParamStore::new();
        let d = cfg.embed_dim;
        let e_prev = params.add_embedding("e_prev", features.prev_tactic.len(), d, &mut rng);
        let e_goal = params.add_embedding("e_goal", features.head_token.len(), d, &mut rng);
        let e_hyp = params.add_embedding("e_hyp", features.head_token.len(), d, &mut rng);
        let ff = params.add_feedforward(
            "ff",
            &[3 * d + 1, cfg.ffn_width, cfg.ffn_width, tactics.len()],
            &mut rng,
        );
        TacticModel {
            params,
            tactics,
            features,
            e_prev,
            e_goal,
            e_hyp,
            ff,
        }
    }

    pub fn index(&self, t: TacticName) -> Option<usize> {
        self.tactics.iter().position(|&x| x == t)
    }

    fn log_probs_node(&self, g: &mut Graph<'_>, feats: &[EncodedFeatures]) -> NodeId {
        let ids = |f: fn(&EncodedFeatures) -> usize| feats.iter().map(f).collect::<Vec<_>>();
        let ep = g.gather(self.e_prev, &ids(|f| f.prev_id));
        let eg = g.gather(self.e_goal, &ids(|f| f.goal_head_id));
        let eh = g.gather(self.e_hyp, &ids(|f| f.hyp_head_id));
        let sim = g.input(Tensor::from_vec(
            feats.len(),
            1,
            feats.iter().map(|f| f.similarity).collect(),
        ));
        let x = g.concat_cols(&[ep, eg, eh, sim]);
        let out = g.feedforward(x, &self.ff);
        g.log_softmax_rows(out)
    }

    /// Log-probabilities over the whole tactic vocabulary.
    pub fn log_probs(&self, ctx: &PredictionContext) -> Vec<f64> {
        let mut g = Graph::new(&self.params);
        let lp = self.log_probs_node(&mut g, &[encode_features(ctx, &self.features)]);
        g.value(lp).data.clone()
    }

    /// Top-`n` tactics by softmax probability.
    pub fn predict(&self, ctx: &PredictionContext, n: usize) -> ScoreMap<TacticName> {
        assert!(n >= 1, "n must be positive");
        let mut g = Graph::new(&self.params);
        let lp = self.log_probs_node(&mut g, &[encode_features(ctx, &self.features)]);
        // Softmax of the logits rather than exp of log-probabilities, so the
        // scores are exact probabilities and sum to one.
        let probs = softmax(&g.value(lp).data);
        ScoreMap::ranked(self.tactics.iter().copied().zip(probs)).truncate(n)
    }

    /// Summed NLL of `batch`, accumulating gradients when asked. Samples
    /// whose label is outside the vocabulary are skipped.
    pub fn batch_loss(&self, batch: &[&TrainingSample], grads: Option<&mut Grads>) -> (f64, usize) {
        let mut feats = Vec::new();
        let mut labels = Vec::new();
        for s in batch {
            if let Some(i) = self.index(s.label.tactic) {
                feats.push(encode_features(&s.ctx, &self.features));
                labels.push(i);
            }
        }
        if feats.is_empty() {
            return (0.0, 0);
        }
        let k = self.tactics.len();
        let mut g = Graph::new(&self.params);
        let lp = self.log_probs_node(&mut g, &feats);
        let idx: Vec<usize> = labels.iter().enumerate().map(|(r, &l)| r * k + l).collect();
        let loss = g.nll(lp, &idx);
        if let Some(grads) = grads {
            g.backward(loss, grads);
        }
        (g.value(loss).data[0], feats.len())
    }

    /// SGD on the mean NLL of the correct tactic. Returns the mean loss of
    /// every epoch.
    pub fn train(
        samples: &[TrainingSample],
        cfg: &ModelConfig,
        tc: &TrainConfig,
    ) -> Result<(TacticModel, Vec<f64>), PredictorError> {
        if samples.is_empty() {
            return Err(PredictorError::NoSamples);
        }
        let features = FeatureVocab::build(TrainSplit(samples));
        let mut model = TacticModel::new(cfg, tactic_vocab(samples), features, tc.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(tc.seed);
        let mut order: Vec<usize> = (0..samples.len()).collect();
        let mut lr = tc.lr;
        let mut curve = Vec::with_capacity(tc.epochs);
        for _ in 0..tc.epochs {
            order.shuffle(&mut rng);
            let (mut total, mut count) = (0.0, 0);
            for chunk in order.chunks(tc.batch.max(1)) {
                let batch: Vec<&TrainingSample> = chunk.iter().map(|&i| &samples[i]).collect();
                let mut grads = Grads::zeros_like(&model.params);
                let (loss, n) = model.batch_loss(&batch, Some(&mut grads));
                if n == 0 {
                    continue;
                }
                total += loss;
                count += n;
                model.params.sgd_step(&grads, lr / n as f64);
            }
            curve.push(if count == 0 { 0.0 } else { total / count as f64 });
            lr *= tc.decay;
        }
        Ok((model, curve))
    }

    pub(super) fn from_parts(
        params: ParamStore,
        tactics: Vec<TacticName>,
        features: FeatureVocab,
    ) -> Option<TacticModel> {
        let ff_layers = (0..)
            .map_while(|i| Some((params.id(&format!("ff.w{i}"))?, params.id(&format!("ff.b{i}"))?)))
            .collect();
        Some(TacticModel {
            e_prev: params.id("e_prev")?,
            e_goal: params.id("e_goal")?,
            e_hyp: params.id("e_hyp")?,
            ff: FeedForward { layers: ff_layers },
            params,
            tactics,
            features,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{obligation_context, Vocab};
    use crate::kernel::{parse_prop, BaseTactic, Obligation};

    fn vocab() -> FeatureVocab {
        FeatureVocab {
            prev_tactic: Vocab::build(["<start>"], 50),
            head_token: Vocab::build(["and"], 100),
        }
    }

    #[test]
    fn zero_weights_tie_by_index() {
        let tactics: Vec<TacticName> = BaseTactic::ALL[..5].iter().map(|&b| b.into()).collect();
        let mut m = TacticModel::new(&ModelConfig::default(), tactics.clone(), vocab(), 0);
        let ids: Vec<_> = m.params.ids().collect();
        for id in ids {
            m.params.get_mut(id).data.fill(0.0);
        }
        let ctx = obligation_context(&Obligation::new(vec![], parse_prop("and A B").unwrap()), None);
        let p = m.predict(&ctx, 3);
        assert_eq!(p.items().copied().collect::<Vec<_>>(), tactics[..3]);
        assert!(p.entries.iter().all(|e| (e.score - 0.2).abs() < 1e-15));
        assert_eq!(m.predict(&ctx, 50).len(), 5);
    }
}

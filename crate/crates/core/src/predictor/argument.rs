use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::features::{PredictionContext, TrainSplit, TrainingSample, Vocab};
use crate::kernel::{tokenize, tokenize_hyp, Argument, Ident, Prop, TacticName};
use crate::neural::{FeedForward, Grads, Graph, GruParams, NodeId, ParamId, ParamStore, Tensor};

use super::tactic::TacticModel;
use super::{ModelConfig, PredictorError, ScoreMap, TrainConfig};

/// Every argument the model can score for a context, in canonical order:
/// `None`, distinct goal tokens by first occurrence, hypotheses, lemmas.
pub fn candidates(ctx: &PredictionContext, pool: &[(Ident, Prop)]) -> Vec<Argument> {
    let mut out = vec![Argument::None];
    let mut seen = Vec::new();
    for t in tokenize(&ctx.goal) {
        if !seen.contains(&t) {
            seen.push(t.clone());
            out.push(Argument::GoalToken(t));
        }
    }
    out.extend(ctx.hyps.iter().map(|h| Argument::HypIdent(h.id.clone())));
    out.extend(pool.iter().map(|(n, _)| Argument::LemmaIdent(n.clone())));
    out
}

/// Token-level view of a context, shared by every tactic scored on it.
struct Prepared {
    args: Vec<Argument>,
    goal_ids: Vec<usize>,
    /// Candidate index of each goal position.
    goal_cand: Vec<usize>,
    /// Token ids of each hypothesis, then each lemma: its name followed by
    /// its statement.
    seqs: Vec<Vec<usize>>,
    similarity: f64,
}

/// Goal encoder, goal-token scorer and hypothesis/lemma scorer, all GRUs.
/// The scorers start from a state computed from the tactic, the goal
/// encoding and the similarity, and share one linear scoring head.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgumentModel {
    pub params: ParamStore,
    pub tokens: Vocab,
    pub tactics: Vec<TacticName>,
    pub max_seq: usize,
    e_tok: ParamId,
    e_tac: ParamId,
    enc: GruParams,
    goal_gru: GruParams,
    hyp_gru: GruParams,
    init: FeedForward,
    head_w: ParamId,
    head_b: ParamId,
}

fn hyp_tokens(ctx: &PredictionContext, pool: &[(Ident, Prop)]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = ctx
        .hyps
        .iter()
        .map(|h| std::iter::once(h.id.to_string()).chain(tokenize_hyp(h)).collect())
        .collect();
    out.extend(
        pool.iter()
            .map(|(n, p)| std::iter::once(n.to_string()).chain(tokenize(p)).collect()),
    );
    out
}

/// Vocabulary of every token seen in training goals, hypotheses and lemmas.
pub(super) fn token_vocab(train: TrainSplit<'_>, cap: usize) -> Vocab {
    let mut all = Vec::new();
    let mut pools_seen: Vec<*const Vec<(Ident, Prop)>> = Vec::new();
    for s in train.0 {
        all.extend(tokenize(&s.ctx.goal));
        let ptr = Arc::as_ptr(&s.lemma_pool);
        let pool: &[(Ident, Prop)] = if pools_seen.contains(&ptr) {
            &[]
        } else {
            pools_seen.push(ptr);
            &s.lemma_pool
        };
        for seq in hyp_tokens(&s.ctx, pool) {
            all.extend(seq);
        }
    }
    Vocab::build(all.iter().map(String::as_str), cap)
}

impl ArgumentModel {
    pub fn new(cfg: &ModelConfig, tokens: Vocab, tactics: Vec<TacticName>, seed: u64) -> ArgumentModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_a76);
        let mut params = ParamStore::new();
        let d = cfg.arg_dim;
        let e_tok = params.add_embedding("e_tok", tokens.len(), d, &mut rng);
        let e_tac = params.add_embedding("e_tac", tactics.len(), d, &mut rng);
        let enc = params.add_gru("enc", d, d, &mut rng);
        let goal_gru = params.add_gru("goal_gru", d, d, &mut rng);
        let hyp_gru = params.add_gru("hyp_gru", d, d, &mut rng);
        let init = params.add_feedforward("init", &[2 * d + 1, d, d], &mut rng);
        let head_w = params.add_uniform("head_w", d, 1, d, &mut rng);
        let head_b = params.add_uniform("head_b", 1, 1, d, &mut rng);
        ArgumentModel {
            params,
            tokens,
            tactics,
            max_seq: cfg.max_seq,
            e_tok,
            e_tac,
            enc,
            goal_gru,
            hyp_gru,
            init,
            head_w,
            head_b,
        }
    }

    pub fn dim(&self) -> usize {
        self.enc.hidden
    }

    fn tactic_index(&self, t: TacticName) -> Option<usize> {
        self.tactics.iter().position(|&x| x == t)
    }

    fn prepare(&self, ctx: &PredictionContext, pool: &[(Ident, Prop)]) -> Prepared {
        let args = candidates(ctx, pool);
        let goal = tokenize(&ctx.goal);
        let goal_cand = goal
            .iter()
            .map(|t| {
                args.iter()
                    .position(|a| matches!(a, Argument::GoalToken(s) if s == t))
                    .expect("goal tokens are candidates")
            })
            .collect();
        let seqs = hyp_tokens(ctx, pool)
            .into_iter()
            .map(|s| s.iter().take(self.max_seq).map(|t| self.tokens.id(t)).collect())
            .collect();
        Prepared {
            args,
            goal_ids: goal.iter().map(|t| self.tokens.id(t)).collect(),
            goal_cand,
            seqs,
            similarity: ctx.similarity,
        }
    }

    /// Raw (log-scale) scores of every candidate for each tactic in `taus`,
    /// as a column laid out tactic-major. Duplicate goal tokens are merged
    /// by log-sum-exp, so each candidate appears once.
    fn raw_scores(&self, g: &mut Graph<'_>, p: &Prepared, taus: &[usize]) -> NodeId {
        let d = self.dim();
        let k = taus.len();
        // Goal encoding from a zero state.
        let mut h = g.input(Tensor::zeros(1, d));
        let xs: Vec<NodeId> = p.goal_ids.iter().map(|&id| g.gather(self.e_tok, &[id])).collect();
        for &x in &xs {
            h = g.gru(x, h, self.enc, None);
        }
        let tac = g.gather(self.e_tac, taus);
        let enc = g.repeat_rows(h, k);
        let sim = g.input(Tensor::from_vec(k, 1, vec![p.similarity; k]));
        let x = g.concat_cols(&[tac, enc, sim]);
        let pre = g.feedforward(x, &self.init);
        let s0 = g.tanh(pre);

        let mut parts = vec![s0];
        // Goal-token scorer: one row per tactic, one output per position.
        let mut h = s0;
        for &x in &xs {
            h = g.gru(x, h, self.goal_gru, None);
            parts.push(h);
        }
        // Hypothesis/lemma scorer: one row per (tactic, candidate).
        let r = p.seqs.len();
        if r > 0 {
            let rows: Vec<usize> = (0..k).flat_map(|j| std::iter::repeat_n(j, r)).collect();
            let mut h = g.select_rows(s0, &rows);
            let longest = p.seqs.iter().map(Vec::len).max().unwrap_or(0);
            for t in 0..longest {
                let ids: Vec<usize> = p.seqs.iter().map(|s| s.get(t).copied().unwrap_or(0)).collect();
                let mask: Vec<bool> = (0..k).flat_map(|_| p.seqs.iter().map(|s| t < s.len())).collect();
                let x = g.gather(self.e_tok, &ids);
                h = g.gru(x, h, self.hyp_gru, Some(mask));
            }
            parts.push(h);
        }
        let states = g.concat_rows(&parts);
        let scores = g.affine(states, self.head_w, self.head_b);

        // Row layout of `scores`: k None rows, then L blocks of k goal rows,
        // then k blocks of r hypothesis rows.
        let n_goal = p.goal_ids.len();
        let n_cand = p.args.len();
        let first_hyp = 1 + (n_cand - 1 - r);
        let mut segments = Vec::with_capacity(k * n_cand);
        for j in 0..k {
            for c in 0..n_cand {
                let seg = if c == 0 {
                    vec![j]
                } else if c < first_hyp {
                    (0..n_goal)
                        .filter(|&t| p.goal_cand[t] == c)
                        .map(|t| k + t * k + j)
                        .collect()
                } else {
                    vec![k + n_goal * k + j * r + (c - first_hyp)]
                };
                segments.push(seg);
            }
        }
        g.segment_logsumexp(scores, segments)
    }

    /// Unnormalized scores `exp(raw)` of every candidate for each tactic.
    pub fn score_candidates(
        &self,
        tactics: &[TacticName],
        ctx: &PredictionContext,
        pool: &[(Ident, Prop)],
    ) -> Vec<Vec<(Argument, f64)>> {
        let p = self.prepare(ctx, pool);
        let mut out = vec![Vec::new(); tactics.len()];
        let scored: Vec<(usize, usize)> = tactics
            .iter()
            .enumerate()
            .filter(|(_, t)| t.takes_argument())
            .filter_map(|(i, &t)| Some((i, self.tactic_index(t)?)))
            .collect();
        for (i, t) in tactics.iter().enumerate() {
            if !t.takes_argument() {
                out[i] = vec![(Argument::None, 1.0)];
            }
        }
        if scored.is_empty() {
            return out;
        }
        let taus: Vec<usize> = scored.iter().map(|s| s.1).collect();
        let mut g = Graph::new(&self.params);
        let raw = self.raw_scores(&mut g, &p, &taus);
        let vals = &g.value(raw).data;
        let n = p.args.len();
        for (j, &(i, _)) in scored.iter().enumerate() {
            out[i] = p
                .args
                .iter()
                .cloned()
                .zip(vals[j * n..(j + 1) * n].iter().map(|v| v.exp()))
                .collect();
        }
        out
    }

    /// Top-`m` arguments for `tactic`. Zero-argument tactics get `None`
    /// with score 1.
    pub fn predict(
        &self,
        tactic: TacticName,
        ctx: &PredictionContext,
        pool: &[(Ident, Prop)],
        m: usize,
    ) -> ScoreMap<Argument> {
        self.predict_many(&[tactic], ctx, pool, m).remove(0)
    }

    pub fn predict_many(
        &self,
        tactics: &[TacticName],
        ctx: &PredictionContext,
        pool: &[(Ident, Prop)],
        m: usize,
    ) -> Vec<ScoreMap<Argument>> {
        assert!(m >= 1, "m must be positive");
        self.score_candidates(tactics, ctx, pool)
            .into_iter()
            .map(|c| ScoreMap::ranked(c).truncate(m))
            .collect()
    }

    /// NLL of the labeled command under the product distribution over the
    /// injected tactics' commands. `None` when the label cannot be scored
    /// or no injected tactic takes an argument.
    fn sample_loss(
        &self,
        s: &TrainingSample,
        tac_logp: &[f64],
        inject: usize,
        grads: Option<&mut Grads>,
    ) -> Option<f64> {
        let label_tac = self.tactic_index(s.label.tactic)?;
        let mut order: Vec<usize> = (0..tac_logp.len()).collect();
        order.sort_by(|&a, &b| tac_logp[b].total_cmp(&tac_logp[a]).then(a.cmp(&b)));
        let mut taus: Vec<usize> = order.into_iter().take(inject).collect();
        if !taus.contains(&label_tac) {
            taus.push(label_tac);
        }
        let (with_arg, without): (Vec<usize>, Vec<usize>) =
            taus.into_iter().partition(|&t| self.tactics[t].takes_argument());
        if with_arg.is_empty() {
            return None;
        }
        let p = self.prepare(&s.ctx, &s.lemma_pool);
        let n = p.args.len();
        let target = if self.tactics[label_tac].takes_argument() {
            let c = p.args.iter().position(|a| *a == s.label.arg)?;
            with_arg.iter().position(|&t| t == label_tac)? * n + c
        } else {
            with_arg.len() * n + without.iter().position(|&t| t == label_tac)?
        };
        let mut g = Graph::new(&self.params);
        let raw = self.raw_scores(&mut g, &p, &with_arg);
        let offsets: Vec<f64> = with_arg
            .iter()
            .flat_map(|&t| std::iter::repeat_n(tac_logp[t], n))
            .collect();
        let mut all = g.add_const(raw, &Tensor::from_vec(offsets.len(), 1, offsets));
        if !without.is_empty() {
            let fixed = g.input(Tensor::from_vec(
                without.len(),
                1,
                without.iter().map(|&t| tac_logp[t]).collect(),
            ));
            all = g.concat_rows(&[all, fixed]);
        }
        let lp = g.log_softmax_all(all);
        let loss = g.nll(lp, &[target]);
        if let Some(grads) = grads {
            g.backward(loss, grads);
        }
        Some(g.value(loss).data[0])
    }

    /// Train against the product distribution with the trained tactic model
    /// held fixed. Returns the mean loss of every epoch.
    pub fn train(
        samples: &[TrainingSample],
        tactic: &TacticModel,
        cfg: &ModelConfig,
        tc: &TrainConfig,
    ) -> Result<(ArgumentModel, Vec<f64>), PredictorError> {
        if samples.is_empty() {
            return Err(PredictorError::NoSamples);
        }
        let tokens = token_vocab(TrainSplit(samples), cfg.token_vocab);
        let mut model = ArgumentModel::new(cfg, tokens, tactic.tactics.clone(), tc.seed);
        let tac_logp: Vec<Vec<f64>> = samples.iter().map(|s| tactic.log_probs(&s.ctx)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(tc.seed.wrapping_add(1));
        let mut order: Vec<usize> = (0..samples.len()).collect();
        let mut lr = tc.lr;
        let mut curve = Vec::with_capacity(tc.epochs);
        for _ in 0..tc.epochs {
            order.shuffle(&mut rng);
            let (mut total, mut count) = (0.0, 0usize);
            for chunk in order.chunks(tc.batch.max(1)) {
                let mut grads = Grads::zeros_like(&model.params);
                let mut n = 0usize;
                for &i in chunk {
                    if let Some(l) = model.sample_loss(&samples[i], &tac_logp[i], tc.inject, Some(&mut grads)) {
                        total += l;
                        n += 1;
                    }
                }
                if n > 0 {
                    count += n;
                    model.params.sgd_step(&grads, lr / n as f64);
                }
            }
            curve.push(if count == 0 { 0.0 } else { total / count as f64 });
            lr *= tc.decay;
        }
        Ok((model, curve))
    }

    /// Summed loss over `samples` and its gradient, as used by one training
    /// step. Also returns how many samples contributed.
    pub fn loss_and_grads(
        &self,
        samples: &[TrainingSample],
        tactic: &TacticModel,
        inject: usize,
    ) -> (f64, usize, Grads) {
        let mut grads = Grads::zeros_like(&self.params);
        let (mut total, mut n) = (0.0, 0);
        for s in samples {
            if let Some(l) = self.sample_loss(s, &tactic.log_probs(&s.ctx), inject, Some(&mut grads)) {
                total += l;
                n += 1;
            }
        }
        (total, n, grads)
    }

    /// Mean loss over `samples` without training.
    pub fn mean_loss(&self, samples: &[TrainingSample], tactic: &TacticModel, inject: usize) -> f64 {
        let losses: Vec<f64> = samples
            .iter()
            .filter_map(|s| self.sample_loss(s, &tactic.log_probs(&s.ctx), inject, None))
            .collect();
        losses.iter().sum::<f64>() / losses.len().max(1) as f64
    }

    pub(super) fn from_parts(
        params: ParamStore,
        tokens: Vocab,
        tactics: Vec<TacticName>,
        max_seq: usize,
    ) -> Option<ArgumentModel> {
        let gru = |name: &str| -> Option<GruParams> {
            let wh = params.id(&format!("{name}.wh"))?;
            Some(GruParams {
                wx: params.id(&format!("{name}.wx"))?,
                wh,
                bx: params.id(&format!("{name}.bx"))?,
                bh: params.id(&format!("{name}.bh"))?,
                hidden: params.get(wh).rows,
            })
        };
        let init = FeedForward {
            layers: (0..)
                .map_while(|i| Some((params.id(&format!("init.w{i}"))?, params.id(&format!("init.b{i}"))?)))
                .collect(),
        };
        Some(ArgumentModel {
            e_tok: params.id("e_tok")?,
            e_tac: params.id("e_tac")?,
            enc: gru("enc")?,
            goal_gru: gru("goal_gru")?,
            hyp_gru: gru("hyp_gru")?,
            init,
            head_w: params.id("head_w")?,
            head_b: params.id("head_b")?,
            params,
            tokens,
            tactics,
            max_seq,
        })
    }
}

//! Hand-engineered prediction context: previous tactic, goal, hypotheses,
//! the hypothesis most similar to the goal, and that similarity.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kernel::{
    head_token, tokenize, tokenize_hyp, Hypothesis, Ident, Obligation, ProofCommand, ProofState, Prop, TacticName,
};

pub const UNK: &str = "<unk>";
pub const START: &str = "<start>";
pub const PREV_TACTIC_VOCAB: usize = 50;
pub const HEAD_TOKEN_VOCAB: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionContext {
    /// `None` at the start of a proof.
    pub prev_tactic: Option<TacticName>,
    pub goal: Prop,
    pub hyps: Vec<Hypothesis>,
    /// Index into `hyps`.
    pub relevant_hyp: Option<usize>,
    pub similarity: f64,
}

impl PredictionContext {
    pub fn relevant(&self) -> Option<&Hypothesis> {
        self.relevant_hyp.map(|i| &self.hyps[i])
    }
}

/// One labeled step of a reference proof.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSample {
    pub ctx: PredictionContext,
    pub label: ProofCommand,
    /// Lemmas proved earlier in the same file.
    pub lemma_pool: Arc<Vec<(Ident, Prop)>>,
}

fn jaccard(a: &[String], b: &[String]) -> f64 {
    let a: BTreeSet<&str> = a.iter().map(String::as_str).collect();
    let b: BTreeSet<&str> = b.iter().map(String::as_str).collect();
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// Jaccard index of the two propositions' token sets.
pub fn similarity(h: &Prop, g: &Prop) -> f64 {
    jaccard(&tokenize(h), &tokenize(g))
}

/// The last command applied on the way to the first obligation.
pub fn previous_tactic(state: &ProofState) -> Option<TacticName> {
    state.first().and_then(|o| o.history.last()).map(|c| c.tactic)
}

pub fn obligation_context(o: &Obligation, prev: Option<TacticName>) -> PredictionContext {
    let goal_tokens = tokenize(&o.goal);
    let mut best: Option<(usize, f64)> = None;
    for (i, h) in o.hyps.iter().enumerate() {
        let s = jaccard(&tokenize_hyp(h), &goal_tokens);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    PredictionContext {
        prev_tactic: prev,
        goal: o.goal.clone(),
        hyps: o.hyps.clone(),
        relevant_hyp: best.map(|(i, _)| i),
        similarity: best.map_or(0.0, |(_, s)| s),
    }
}

/// Context of the first obligation of `state`.
pub fn extract_context(state: &ProofState, prev: Option<TacticName>) -> PredictionContext {
    let first = state.first().expect("extract_context needs an open obligation");
    obligation_context(&first.obligation, prev)
}

/// A frequency-ranked string vocabulary with an UNK entry at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocab {
    pub items: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    /// Keep the `cap` most frequent items; ties break lexicographically.
    pub fn build<'a>(items: impl IntoIterator<Item = &'a str>, cap: usize) -> Vocab {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for it in items {
            *counts.entry(it).or_default() += 1;
        }
        let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let items = std::iter::once(UNK.to_owned())
            .chain(ranked.into_iter().take(cap).map(|(s, _)| s.to_owned()))
            .collect();
        Vocab::from_items(items)
    }

    pub fn from_items(items: Vec<String>) -> Vocab {
        let index = items.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Vocab { items, index }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Index of `s`, or 0 (UNK).
    pub fn id(&self, s: &str) -> usize {
        self.index.get(s).copied().unwrap_or(0)
    }

    pub fn get(&self, s: &str) -> Option<usize> {
        self.index.get(s).copied()
    }
}

pub fn prev_tactic_key(t: Option<TacticName>) -> String {
    t.map_or_else(|| START.to_owned(), |t| t.to_string())
}

fn hyp_head(h: &Hypothesis) -> String {
    tokenize_hyp(h).into_iter().next().unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureVocab {
    pub prev_tactic: Vocab,
    pub head_token: Vocab,
}

/// Marker that a sample set is the training split; vocabularies can only be
/// built from one.
pub struct TrainSplit<'a>(pub &'a [TrainingSample]);

impl FeatureVocab {
    pub fn build(train: TrainSplit<'_>) -> FeatureVocab {
        let prev: Vec<String> = train.0.iter().map(|s| prev_tactic_key(s.ctx.prev_tactic)).collect();
        let mut heads: Vec<String> = train.0.iter().map(|s| head_token(&s.ctx.goal)).collect();
        heads.extend(train.0.iter().filter_map(|s| s.ctx.relevant().map(hyp_head)));
        FeatureVocab {
            prev_tactic: Vocab::build(prev.iter().map(String::as_str), PREV_TACTIC_VOCAB),
            head_token: Vocab::build(heads.iter().map(String::as_str), HEAD_TOKEN_VOCAB),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EncodedFeatures {
    pub prev_id: usize,
    pub goal_head_id: usize,
    pub hyp_head_id: usize,
    pub similarity: f64,
}

pub fn encode_features(ctx: &PredictionContext, vocab: &FeatureVocab) -> EncodedFeatures {
    EncodedFeatures {
        prev_id: vocab.prev_tactic.id(&prev_tactic_key(ctx.prev_tactic)),
        goal_head_id: vocab.head_token.id(&head_token(&ctx.goal)),
        hyp_head_id: ctx.relevant().map_or(0, |h| vocab.head_token.id(&hyp_head(h))),
        similarity: ctx.similarity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_prop, BaseTactic, Sort};

    fn p(s: &str) -> Prop {
        parse_prop(s).unwrap()
    }

    #[test]
    fn jaccard_by_hand() {
        let s = similarity(&p("and a b"), &p("and b c"));
        // {and,a,b} vs {and,b,c}: 2 shared of 4
        assert!((s - 0.5).abs() < 1e-12);
        let ab = ["a".to_owned(), "b".to_owned()];
        let bc = ["b".to_owned(), "c".to_owned()];
        assert!((jaccard(&ab, &bc) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(similarity(&p("A"), &p("A")), 1.0);
        assert_eq!(similarity(&p("A"), &p("B")), 0.0);
    }

    #[test]
    fn relevant_hypothesis() {
        let o = Obligation::new(
            vec![Hypothesis::prop("H0", p("A")), Hypothesis::prop("H1", p("or B C"))],
            p("or B C"),
        );
        let ctx = obligation_context(&o, None);
        assert_eq!(ctx.relevant_hyp, Some(1));
        assert_eq!(ctx.similarity, 1.0);
        let empty = obligation_context(&Obligation::new(vec![], p("A")), None);
        assert_eq!((empty.relevant_hyp, empty.similarity), (None, 0.0));
    }

    #[test]
    fn ties_go_to_earliest() {
        let o = Obligation::new(
            vec![
                Hypothesis::var("n", Sort::Nat),
                Hypothesis::prop("H0", p("B")),
                Hypothesis::prop("H1", p("C")),
            ],
            p("A"),
        );
        assert_eq!(obligation_context(&o, None).relevant_hyp, Some(0));
    }

    #[test]
    fn unknown_features_map_to_unk() {
        let v = Vocab::build(["not", "not", "and"], 1);
        assert_eq!(v.items, [UNK, "not"]);
        assert_eq!(v.id("and"), 0);
        let vocab = FeatureVocab {
            prev_tactic: Vocab::build([START], 50),
            head_token: v,
        };
        let ctx = obligation_context(
            &Obligation::new(vec![], p("not (eq x y)")),
            Some(BaseTactic::Intro.into()),
        );
        let e = encode_features(&ctx, &vocab);
        assert_eq!(e.prev_id, 0);
        assert_eq!(e.goal_head_id, 1);
        assert_eq!((e.hyp_head_id, e.similarity), (0, 0.0));
    }
}

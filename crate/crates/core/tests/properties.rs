mod common;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use proptest::prelude::*;
use tacsearch::features::{obligation_context, similarity, PredictionContext};
use tacsearch::kernel::{tokenize, Argument, BaseTactic, Hypothesis, Obligation, Prop};
use tacsearch::predictor::{candidates, CommandSource, ScoreMap};
use tacsearch::search::{harder_eq_obligation, harder_eq_state, search, NodeStatus, Outcome, SearchConfig};
use tacsearch::{check_proof, CheckResult, Env, Ident, ProofCommand};

use common::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

proptest! {
    #![proptest_config(cases(1000))]

    #[test]
    fn state_relation_is_reflexive(s in state_strategy()) {
        prop_assert!(harder_eq_state(&s, &s));
    }

    #[test]
    fn state_relation_is_transitive(
        s3 in state_strategy(),
        keep in prop::collection::vec(any::<bool>(), 1..8),
        extra2 in prop::collection::vec(obligation_strategy(), 0..2),
        extra1 in prop::collection::vec(obligation_strategy(), 0..2),
        other in state_strategy(),
    ) {
        let s2 = harder_than(&s3, &keep, extra2);
        let s1 = harder_than(&s2, &keep, extra1);
        prop_assert!(harder_eq_state(&s2, &s3));
        prop_assert!(harder_eq_state(&s1, &s2));
        prop_assert!(harder_eq_state(&s1, &s3));
        // Arbitrary triples: whenever both premises hold, so does the conclusion.
        if harder_eq_state(&other, &s1) {
            prop_assert!(harder_eq_state(&other, &s3));
        }
    }
}

proptest! {
    #![proptest_config(cases(500))]

    #[test]
    fn relation_matches_brute_force(a in state_strategy(), b in state_strategy()) {
        prop_assert_eq!(harder_eq_state(&a, &b), oracle_state(&a, &b));
        for o1 in &a.obligations {
            for o2 in &b.obligations {
                prop_assert_eq!(
                    harder_eq_obligation(&o1.obligation, &o2.obligation),
                    oracle_obligation(&o1.obligation, &o2.obligation)
                );
            }
        }
    }

    #[test]
    fn dropping_hypotheses_makes_obligations_harder(o in obligation_strategy(), k in 0usize..4) {
        let fewer = Obligation::new(o.hyps.iter().skip(k).cloned().collect(), o.goal.clone());
        prop_assert!(harder_eq_obligation(&fewer, &o));
    }

    #[test]
    fn similarity_is_a_fraction(a in prop_strategy(), b in prop_strategy()) {
        let s = similarity(&a, &b);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s - similarity(&b, &a)).abs() < 1e-12);
        prop_assert!((similarity(&a, &a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn candidate_set_is_exact(o in obligation_strategy(), lemmas in prop::collection::vec(prop_strategy(), 0..3)) {
        let ctx = obligation_context(&o, None);
        let pool: Vec<(Ident, Prop)> = lemmas
            .into_iter()
            .enumerate()
            .map(|(i, p)| (Ident::new(format!("lem{i}")), p))
            .collect();
        let got = candidates(&ctx, &pool);
        let mut want = vec![Argument::None];
        for t in tokenize(&o.goal) {
            let a = Argument::GoalToken(t);
            if !want.contains(&a) {
                want.push(a);
            }
        }
        want.extend(o.hyps.iter().map(|h| Argument::HypIdent(h.id.clone())));
        want.extend(pool.iter().map(|(n, _)| Argument::LemmaIdent(n.clone())));
        prop_assert_eq!(got, want);
    }
}

/// Scores commands by a hash of the command and the goal, with frequent ties.
struct HashedScores(Vec<ProofCommand>);

impl CommandSource for HashedScores {
    fn rank(&self, ctx: &PredictionContext, _: &[(Ident, Prop)], _: usize, _: usize) -> ScoreMap<ProofCommand> {
        ScoreMap::ranked(self.0.iter().map(|c| {
            let mut h = DefaultHasher::new();
            c.to_string().hash(&mut h);
            ctx.goal.to_string().hash(&mut h);
            (c.clone(), (h.finish() % 4) as f64 / 4.0)
        }))
    }
}

fn command_pool() -> Vec<ProofCommand> {
    let mut v: Vec<ProofCommand> = [
        BaseTactic::Intro,
        BaseTactic::Split,
        BaseTactic::Left,
        BaseTactic::Right,
        BaseTactic::Assumption,
        BaseTactic::Simpl,
        BaseTactic::Reflexivity,
        BaseTactic::Easy,
    ]
    .into_iter()
    .map(ProofCommand::bare)
    .collect();
    for h in ["H0", "H1"] {
        v.push(ProofCommand::new(
            BaseTactic::Destruct,
            Argument::HypIdent(Ident::new(h)),
        ));
        v.push(ProofCommand::new(BaseTactic::Apply, Argument::HypIdent(Ident::new(h))));
    }
    v
}

fn subset_strategy() -> impl Strategy<Value = Vec<ProofCommand>> {
    Just(command_pool()).prop_shuffle().prop_flat_map(|v| {
        let n = v.len();
        (Just(v), 1..=n).prop_map(|(v, k)| v[..k].to_vec())
    })
}

proptest! {
    #![proptest_config(cases(300))]

    #[test]
    fn search_invariants(
        theorem in prop_strategy(),
        cmds in subset_strategy(),
        width in 1usize..4,
        depth in 1usize..6,
    ) {
        let cfg = SearchConfig { width, depth, budget: 64 };
        let env = Env::default();
        let r = search(&theorem, &env, &HashedScores(cmds), &cfg);
        if let Outcome::Proof(p) = &r.outcome {
            prop_assert_eq!(check_proof(&env, &theorem, p), CheckResult::Pass);
        }
        for (id, n) in r.tree.nodes.iter().enumerate() {
            let scores: Vec<f64> = n.children.iter().map(|&c| r.tree.nodes[c].score).collect();
            prop_assert!(scores.windows(2).all(|w| w[0] >= w[1]), "node {} children out of order", id);
            prop_assert!(n.children.len() <= width);
            if let NodeStatus::Pruned { ancestor } = n.status {
                prop_assert!(n.children.is_empty());
                prop_assert!(r.tree.ancestors(id).contains(&ancestor));
                let s = n.state.as_ref().unwrap();
                prop_assert!(oracle_state(s, r.tree.nodes[ancestor].state.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn greedy_search_expansions_are_bounded(theorem in prop_strategy(), cmds in subset_strategy(), depth in 1usize..6) {
        let cfg = SearchConfig { width: 1, depth, budget: 10_000 };
        let r = search(&theorem, &Env::default(), &HashedScores(cmds), &cfg);
        let mut created = 1;
        for n in &r.tree.nodes {
            let Some(ps) = &n.state else { continue };
            for &c in &n.children {
                if let Some(cs) = &r.tree.nodes[c].state {
                    created += (cs.len() + 1).saturating_sub(ps.len());
                }
            }
        }
        prop_assert!(r.stats.expanded <= depth * created, "{} > {} * {}", r.stats.expanded, depth, created);
    }
}

#[test]
fn hypothesis_labels_do_not_matter() {
    let a = Obligation::new(vec![Hypothesis::prop("H0", Prop::atom("A"))], Prop::atom("B"));
    let b = Obligation::new(vec![Hypothesis::prop("H7", Prop::atom("A"))], Prop::atom("B"));
    assert!(harder_eq_obligation(&a, &b) && harder_eq_obligation(&b, &a));
    assert!(oracle_obligation(&a, &b));
}

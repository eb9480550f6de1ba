//! Prediction-guided depth-first proof search with hardness pruning.

mod dfs;
mod emit;
mod relation;

use crate::features::PredictionContext;
use crate::kernel::{Ident, ProofCommand, Prop};
use crate::predictor::{CommandSource, ScoreMap};

pub use dfs::{search, NodeStatus, Outcome, SearchConfig, SearchNode, SearchResult, SearchStats, SearchTree};
pub use emit::{emit_tree, to_dot, to_json, TreeFormat};
pub use relation::{harder_eq_obligation, harder_eq_state};

/// Proposes the same commands, in the same order, at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSource(pub Vec<ProofCommand>);

impl CommandSource for FixedSource {
    fn rank(&self, _: &PredictionContext, _: &[(Ident, Prop)], _: usize, _: usize) -> ScoreMap<ProofCommand> {
        let n = self.0.len() as f64;
        ScoreMap::ranked(self.0.iter().enumerate().map(|(i, c)| (c.clone(), (n - i as f64) / n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_proof, parse_prop, Argument, BaseTactic, CheckResult, Env};

    fn bare(b: BaseTactic) -> ProofCommand {
        ProofCommand::bare(b)
    }

    fn run(goal: &str, cmds: Vec<ProofCommand>, width: usize, depth: usize) -> SearchResult {
        let cfg = SearchConfig {
            width,
            depth,
            budget: 512,
        };
        search(&parse_prop(goal).unwrap(), &Env::default(), &FixedSource(cmds), &cfg)
    }

    #[test]
    fn finds_intro_assumption() {
        let goal = "impl A A";
        let r = run(goal, vec![bare(BaseTactic::Intro), bare(BaseTactic::Assumption)], 3, 6);
        let Outcome::Proof(p) = &r.outcome else {
            panic!("{:?}", r.outcome)
        };
        assert_eq!(p, &[bare(BaseTactic::Intro), bare(BaseTactic::Assumption)]);
        assert_eq!(
            check_proof(&Env::default(), &parse_prop(goal).unwrap(), p),
            CheckResult::Pass
        );
    }

    #[test]
    fn depth_counts_per_obligation() {
        let induction = ProofCommand::new(BaseTactic::Induction, Argument::GoalToken("n".into()));
        let branching = run(
            "forall n : nat, eq (plus 0 n) n",
            vec![induction, bare(BaseTactic::Reflexivity)],
            3,
            2,
        );
        let Outcome::Proof(p) = &branching.outcome else {
            panic!("{:?}", branching.outcome)
        };
        assert_eq!(p.len(), 3);
        let linear = vec![bare(BaseTactic::Intro), bare(BaseTactic::Assumption)];
        assert_eq!(
            run("impl A (impl B A)", linear.clone(), 3, 2).outcome,
            Outcome::DepthLimited
        );
        assert!(matches!(
            run("impl A (impl B A)", linear, 3, 3).outcome,
            Outcome::Proof(_)
        ));
    }

    #[test]
    fn no_op_child_is_pruned() {
        let r = run("impl A B", vec![bare(BaseTactic::Simpl), bare(BaseTactic::Intro)], 3, 6);
        assert_eq!(r.tree.nodes[1].status, NodeStatus::Pruned { ancestor: 0 });
        assert!(r.tree.nodes[1].children.is_empty());
        assert!(r.stats.pruned >= 1);
        assert_eq!(
            r.outcome,
            Outcome::ExhaustedSpace {
                budget_exhausted: false
            }
        );
    }

    #[test]
    fn closing_a_duplicate_obligation_is_not_pruned() {
        let cmds = [BaseTactic::Intro, BaseTactic::Split, BaseTactic::Assumption]
            .map(bare)
            .to_vec();
        let r = run("impl P (and P P)", cmds, 3, 6);
        let Outcome::Proof(p) = &r.outcome else {
            panic!("{:?}", r.outcome)
        };
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn closed_obligation_is_not_reopened() {
        let cmds = [
            BaseTactic::Intro,
            BaseTactic::Split,
            BaseTactic::Left,
            BaseTactic::Right,
            BaseTactic::Assumption,
        ]
        .map(bare)
        .to_vec();
        let r = run("impl A (and (or A A) B)", cmds, 5, 6);
        assert!(matches!(r.outcome, Outcome::ExhaustedSpace { .. }));
        // After `left; assumption` closes `or A A`, `B` fails, and `right`
        // is never tried on `or A A`.
        let split = r
            .tree
            .nodes
            .iter()
            .position(|n| n.command == Some(bare(BaseTactic::Split)) && n.state.is_some())
            .unwrap();
        let tried: Vec<_> = r.tree.nodes[split]
            .children
            .iter()
            .map(|&c| r.tree.nodes[c].command.clone().unwrap())
            .collect();
        assert!(tried.contains(&bare(BaseTactic::Left)));
        assert!(!tried.contains(&bare(BaseTactic::Right)));
    }

    #[test]
    fn budget_is_reported() {
        let cmds = vec![bare(BaseTactic::Intro), bare(BaseTactic::Assumption)];
        let cfg = SearchConfig {
            width: 3,
            depth: 6,
            budget: 1,
        };
        let r = search(
            &parse_prop("impl A (impl B A)").unwrap(),
            &Env::default(),
            &FixedSource(cmds),
            &cfg,
        );
        assert_eq!(r.outcome, Outcome::ExhaustedSpace { budget_exhausted: true });
        assert_eq!(r.stats.expanded, 1);
    }

    #[test]
    fn single_node_dot() {
        let r = run("A", vec![], 1, 1);
        assert_eq!(r.tree.nodes.len(), 1);
        let dot = to_dot(&r.tree);
        assert_eq!(dot.matches("label=").count(), 1);
        assert!(!dot.contains("->"));
        let back: SearchTree = serde_json::from_str(&to_json(&r.tree)).unwrap();
        assert_eq!(back.nodes.len(), 1);
    }
}

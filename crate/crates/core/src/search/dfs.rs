use serde::{Deserialize, Serialize};

use crate::features::{obligation_context, previous_tactic};
use crate::kernel::{apply_tactic, Env, ProofCommand, ProofState, Prop};
use crate::predictor::CommandSource;

use super::relation::harder_eq_state;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Predictions tried per node; also the tactic and argument beams.
    pub width: usize,
    /// Longest command chain allowed above any one obligation.
    pub depth: usize,
    /// Maximum number of node expansions.
    pub budget: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            width: 3,
            depth: 6,
            budget: 512,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NodeStatus {
    /// On the path of the proof found.
    Solved,
    /// At least as hard as the state of path node `ancestor`.
    Pruned { ancestor: usize },
    /// Expanded, and no child led to a proof.
    Exhausted,
    /// Created but never expanded.
    Unexplored,
    /// The command did not apply.
    Failed(String),
    /// Its first obligation had reached the depth limit.
    DepthLimited,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchNode {
    pub parent: Option<usize>,
    /// `None` at the root.
    pub command: Option<ProofCommand>,
    pub score: f64,
    /// `None` when the command failed.
    pub state: Option<ProofState>,
    pub children: Vec<usize>,
    pub status: NodeStatus,
}

/// Arena of search nodes; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTree {
    pub nodes: Vec<SearchNode>,
}

impl SearchTree {
    /// Node ids on the path from the root to `id`, excluding `id` itself.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[id].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.nodes[p].parent;
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Proof(Vec<ProofCommand>),
    ExhaustedSpace { budget_exhausted: bool },
    DepthLimited,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expanded: usize,
    pub pruned: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub tree: SearchTree,
    pub stats: SearchStats,
}

enum Fail {
    Plain,
    /// A proof of an obligation was completed, leaving `remainder`, and the
    /// remainder could not be proved. Nodes working on the closed
    /// obligation must not try alternatives.
    Closed(ProofState),
    Budget,
}

struct Searcher<'a> {
    env: &'a Env,
    source: &'a dyn CommandSource,
    cfg: &'a SearchConfig,
    nodes: Vec<SearchNode>,
    path: Vec<usize>,
    stats: SearchStats,
    depth_cut: bool,
}

fn ends_with(state: &ProofState, tail: &ProofState) -> bool {
    state.len() > tail.len() && state.obligations[state.len() - tail.len()..] == tail.obligations[..]
}

impl Searcher<'_> {
    fn state(&self, id: usize) -> &ProofState {
        self.nodes[id].state.as_ref().expect("searched nodes have states")
    }

    fn push_child(
        &mut self,
        parent: usize,
        command: ProofCommand,
        score: f64,
        state: Option<ProofState>,
        status: NodeStatus,
    ) -> usize {
        self.nodes.push(SearchNode {
            parent: Some(parent),
            command: Some(command),
            score,
            state,
            children: Vec::new(),
            status,
        });
        let id = self.nodes.len() - 1;
        self.nodes[parent].children.push(id);
        id
    }

    fn dfs(&mut self, id: usize) -> Result<usize, Fail> {
        let state = self.state(id).clone();
        let Some(first) = state.first() else {
            self.nodes[id].status = NodeStatus::Solved;
            return Ok(id);
        };
        if first.history.len() >= self.cfg.depth {
            self.nodes[id].status = NodeStatus::DepthLimited;
            self.depth_cut = true;
            return Err(Fail::Plain);
        }
        if self.stats.expanded >= self.cfg.budget {
            return Err(Fail::Budget);
        }
        self.stats.expanded += 1;
        let ctx = obligation_context(&first.obligation, previous_tactic(&state));
        let w = self.cfg.width;
        let preds = self.source.rank(&ctx, &self.env.lemmas, w, w).truncate(w);
        self.path.push(id);
        let result = self.try_children(id, &state, preds.entries);
        self.path.pop();
        match &result {
            Ok(_) => self.nodes[id].status = NodeStatus::Solved,
            Err(Fail::Budget) => {}
            Err(_) => self.nodes[id].status = NodeStatus::Exhausted,
        }
        result
    }

    fn try_children(
        &mut self,
        id: usize,
        state: &ProofState,
        preds: Vec<crate::predictor::Scored<ProofCommand>>,
    ) -> Result<usize, Fail> {
        for p in preds {
            let next = match apply_tactic(self.env, state, &p.item) {
                Ok(s) => s,
                Err(e) => {
                    self.push_child(id, p.item, p.score, None, NodeStatus::Failed(e.to_string()));
                    continue;
                }
            };
            // Closing an obligation is progress even when an identical copy
            // remains: the relation compares obligation sets, not multisets.
            let closes = next.len() < state.len();
            let prune_at = if closes {
                None
            } else {
                self.path
                    .iter()
                    .copied()
                    .find(|&h| harder_eq_state(&next, self.state(h)))
            };
            if let Some(a) = prune_at {
                self.push_child(id, p.item, p.score, Some(next), NodeStatus::Pruned { ancestor: a });
                self.stats.pruned += 1;
                continue;
            }
            let child = self.push_child(id, p.item, p.score, Some(next.clone()), NodeStatus::Unexplored);
            match self.dfs(child) {
                Ok(leaf) => return Ok(leaf),
                Err(Fail::Budget) => return Err(Fail::Budget),
                Err(Fail::Plain) if closes => return Err(Fail::Closed(next)),
                Err(Fail::Closed(rest)) if ends_with(state, &rest) => return Err(Fail::Closed(rest)),
                Err(_) => {}
            }
        }
        Err(Fail::Plain)
    }
}

/// Depth-first search for a proof of `theorem`, guided by `source`.
pub fn search(theorem: &Prop, env: &Env, source: &dyn CommandSource, cfg: &SearchConfig) -> SearchResult {
    assert!(cfg.width >= 1 && cfg.depth >= 1, "width and depth must be positive");
    let mut s = Searcher {
        env,
        source,
        cfg,
        nodes: vec![SearchNode {
            parent: None,
            command: None,
            score: 1.0,
            state: Some(ProofState::initial(theorem.clone())),
            children: Vec::new(),
            status: NodeStatus::Unexplored,
        }],
        path: Vec::new(),
        stats: SearchStats::default(),
        depth_cut: false,
    };
    let res = s.dfs(0);
    let tree = SearchTree { nodes: s.nodes };
    let outcome = match res {
        Ok(leaf) => {
            let cmds = tree
                .ancestors(leaf)
                .into_iter()
                .skip(1)
                .chain([leaf])
                .map(|i| tree.nodes[i].command.clone().expect("non-root nodes carry commands"))
                .collect();
            Outcome::Proof(cmds)
        }
        Err(Fail::Budget) => Outcome::ExhaustedSpace { budget_exhausted: true },
        Err(_) if s.depth_cut => Outcome::DepthLimited,
        Err(_) => Outcome::ExhaustedSpace {
            budget_exhausted: false,
        },
    };
    SearchResult {
        outcome,
        tree,
        stats: s.stats,
    }
}

use std::hash::{DefaultHasher, Hash, Hasher};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::features::PredictionContext;
use crate::kernel::{Argument, Ident, ProofCommand, Prop, TacticName};

use super::{candidates, CommandSource, ScoreMap};

/// Baseline that orders every command it could emit uniformly at random.
/// The order is a pure function of the seed and the context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomPredictor {
    pub tactics: Vec<TacticName>,
    pub seed: u64,
}

impl CommandSource for RandomPredictor {
    fn rank(&self, ctx: &PredictionContext, pool: &[(Ident, Prop)], n: usize, m: usize) -> ScoreMap<ProofCommand> {
        let mut h = DefaultHasher::new();
        self.seed.hash(&mut h);
        ctx.prev_tactic.hash(&mut h);
        ctx.goal.hash(&mut h);
        ctx.hyps.hash(&mut h);
        pool.hash(&mut h);
        let mut rng = ChaCha8Rng::seed_from_u64(h.finish());
        let args = candidates(ctx, pool);
        let mut tactics = self.tactics.clone();
        tactics.shuffle(&mut rng);
        let mut out = Vec::new();
        for &t in tactics.iter().take(n) {
            if t.takes_argument() {
                let mut a = args.clone();
                a.shuffle(&mut rng);
                out.extend(a.into_iter().take(m).map(|a| ProofCommand::new(t, a)));
            } else {
                out.push(ProofCommand::new(t, Argument::None));
            }
        }
        out.shuffle(&mut rng);
        ScoreMap::ranked(out.into_iter().map(|c| (c, 1.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::obligation_context;
    use crate::kernel::{parse_prop, BaseTactic, Obligation};

    #[test]
    fn deterministic_per_context() {
        let r = RandomPredictor {
            tactics: BaseTactic::ALL.iter().map(|&b| b.into()).collect(),
            seed: 3,
        };
        let c = obligation_context(&Obligation::new(vec![], parse_prop("and A B").unwrap()), None);
        let a = r.rank(&c, &[], 3, 3);
        assert_eq!(a, r.rank(&c, &[], 3, 3));
        assert!(a.len() <= 9 && !a.is_empty());
    }
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{
    apply_tactic, check_proof, typecheck, CheckResult, Env, OpenObligation, ProofCommand, ProofState, Prop,
    TacticError, TypeError,
};

use super::ast::*;
use super::desugar::desugar;
use super::replay::resolve;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearScript {
    pub commands: Vec<ProofCommand>,
    /// Proofs filtered out because they could not be sequenced: 0 or 1 for
    /// a single theorem, summed over a corpus.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearizeError {
    #[error("ill-formed theorem statement: {0}")]
    Statement(#[from] TypeError),
}

enum Fail {
    Tactic,
    /// A `;` left an obligation open that is not the last one.
    NotLinear,
}

impl From<TacticError> for Fail {
    fn from(_: TacticError) -> Self {
        Fail::Tactic
    }
}

struct Linearizer<'a> {
    env: &'a Env,
    out: Vec<ProofCommand>,
}

impl Linearizer<'_> {
    fn emit(&mut self, raw: &RawCommand, st: ProofState) -> Result<ProofState, Fail> {
        let cmd = resolve(self.env, &st, raw)?;
        let next = apply_tactic(self.env, &st, &cmd)?;
        self.out.push(cmd);
        Ok(next)
    }

    /// Run `r` on each of `children` in turn. All but the last must end
    /// closed, or the flat sequence would work on the wrong obligation.
    fn each_child(&mut self, children: Vec<OpenObligation>, r: &ScriptAst) -> Result<Vec<OpenObligation>, Fail> {
        let k = children.len();
        let mut last = Vec::new();
        for (i, ob) in children.into_iter().enumerate() {
            let st = ProofState { obligations: vec![ob] };
            let res = self.run(r, st)?;
            if i + 1 < k && !res.is_empty() {
                return Err(Fail::NotLinear);
            }
            if i + 1 == k {
                last = res.obligations;
            }
        }
        Ok(last)
    }

    fn run(&mut self, ast: &ScriptAst, st: ProofState) -> Result<ProofState, Fail> {
        match ast {
            ScriptAst::Atomic(raw) => self.emit(raw, st),
            ScriptAst::Dots(v) => v.iter().try_fold(st, |st, s| self.run(s, st)),
            ScriptAst::Seq(l, r) | ScriptAst::SeqSide(l, r) => {
                let mut obligations = st.obligations;
                if obligations.is_empty() {
                    return Err(Fail::Tactic);
                }
                let rest = obligations.split_off(1);
                let after = self.run(l, ProofState { obligations })?;
                let mut out = if matches!(ast, ScriptAst::Seq(..)) {
                    self.each_child(after.obligations, r)?
                } else {
                    let mut children = after.obligations;
                    let main = children.pop();
                    for ob in children {
                        let res = self.run(r, ProofState { obligations: vec![ob] })?;
                        if !res.is_empty() {
                            return Err(Fail::Tactic);
                        }
                    }
                    main.into_iter().collect()
                };
                out.extend(rest);
                Ok(ProofState { obligations: out })
            }
            ScriptAst::Try(t) => {
                let mark = self.out.len();
                match self.run(t, st.clone()) {
                    Ok(next) => Ok(next),
                    Err(Fail::Tactic) => {
                        self.out.truncate(mark);
                        Ok(st)
                    }
                    Err(Fail::NotLinear) => Err(Fail::NotLinear),
                }
            }
            ScriptAst::Now(_) | ScriptAst::RewriteBy(..) | ScriptAst::AssertBy(..) | ScriptAst::MultiArg(..) => {
                self.run(&desugar(ast), st)
            }
        }
    }
}

/// Flatten a desugared script into the command sequence the kernel would
/// run, by replaying it. Proofs that cannot be sequenced, or that fail,
/// are dropped.
pub fn linearize(env: &Env, ast: &ScriptAst, theorem: &Prop) -> Result<LinearScript, LinearizeError> {
    typecheck(env, theorem, &mut Vec::new())?;
    let mut lin = Linearizer { env, out: Vec::new() };
    let ok = lin
        .run(ast, ProofState::initial(theorem.clone()))
        .is_ok_and(|st| st.is_complete())
        && check_proof(env, theorem, &lin.out) == CheckResult::Pass;
    Ok(if ok {
        LinearScript {
            commands: lin.out,
            dropped: 0,
        }
    } else {
        LinearScript {
            commands: Vec::new(),
            dropped: 1,
        }
    })
}

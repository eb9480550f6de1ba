//! Direct interpretation of scripts with tacticals, without desugaring.
//! `l; r` focuses the first obligation, runs `l`, then `r` on each result.

use crate::kernel::{
    apply_tactic, resolve_word, Argument, BaseTactic, Env, OpenObligation, ProofCommand, ProofState, Prop, TacticError,
};

use super::ast::*;

/// Resolve a raw command against the first obligation of `state`.
pub fn resolve(env: &Env, state: &ProofState, raw: &RawCommand) -> Result<ProofCommand, TacticError> {
    let first = state.first().ok_or(TacticError::NoObligations)?;
    let arg = match &raw.arg {
        RawArg::None => Argument::None,
        RawArg::Word(w) => resolve_word(env, &first.obligation, w),
        RawArg::Expr(p) => Argument::Expr(p.clone()),
    };
    Ok(ProofCommand::new(raw.tactic, arg))
}

fn atomic(env: &Env, raw: &RawCommand, st: ProofState) -> Result<ProofState, TacticError> {
    let cmd = resolve(env, &st, raw)?;
    apply_tactic(env, &st, &cmd)
}

fn split_first(st: ProofState) -> Result<(ProofState, ProofState), TacticError> {
    let mut obligations = st.obligations;
    if obligations.is_empty() {
        return Err(TacticError::NoObligations);
    }
    let rest = obligations.split_off(1);
    Ok((ProofState { obligations }, ProofState { obligations: rest }))
}

fn focused(ob: OpenObligation) -> ProofState {
    ProofState { obligations: vec![ob] }
}

/// Run `r` on every obligation produced by `l` except the last; each run
/// must close its obligation.
fn side_goals(env: &Env, l: ProofState, r: &ScriptAst) -> Result<Vec<OpenObligation>, TacticError> {
    let mut obs = l.obligations;
    let last = obs.pop();
    for ob in obs {
        if !run(env, r, focused(ob))?.is_empty() {
            return Err(TacticError::NotApplicable("side goal left open".into()));
        }
    }
    Ok(last.into_iter().collect())
}

/// Run one script node on `st`.
pub fn run(env: &Env, ast: &ScriptAst, st: ProofState) -> Result<ProofState, TacticError> {
    match ast {
        ScriptAst::Atomic(raw) => atomic(env, raw, st),
        ScriptAst::Dots(v) => v.iter().try_fold(st, |st, s| run(env, s, st)),
        ScriptAst::MultiArg(t, args) => args
            .iter()
            .try_fold(st, |st, a| atomic(env, &RawCommand::new(*t, a.clone()), st)),
        ScriptAst::Seq(l, r) => {
            let (first, mut rest) = split_first(st)?;
            let mut out = Vec::new();
            for ob in run(env, l, first)?.obligations {
                out.extend(run(env, r, focused(ob))?.obligations);
            }
            out.append(&mut rest.obligations);
            Ok(ProofState { obligations: out })
        }
        ScriptAst::Now(t) => {
            let (first, rest) = split_first(st)?;
            for ob in run(env, t, first)?.obligations {
                atomic(env, &RawCommand::bare(BaseTactic::Easy), focused(ob))?;
            }
            Ok(rest)
        }
        ScriptAst::SeqSide(l, r) => {
            let (first, rest) = split_first(st)?;
            let after = run(env, l, first)?;
            let mut out = side_goals(env, after, r)?;
            out.extend(rest.obligations);
            Ok(ProofState { obligations: out })
        }
        ScriptAst::RewriteBy(a, t) | ScriptAst::AssertBy(a, t) => {
            let tac = if matches!(ast, ScriptAst::RewriteBy(..)) {
                BaseTactic::Rewrite
            } else {
                BaseTactic::Assert
            };
            let (first, rest) = split_first(st)?;
            let after = atomic(env, &RawCommand::new(tac, a.clone()), first)?;
            let mut out = side_goals(env, after, t)?;
            out.extend(rest.obligations);
            Ok(ProofState { obligations: out })
        }
        ScriptAst::Try(t) => match run(env, t, st.clone()) {
            Ok(next) => Ok(next),
            Err(_) => Ok(st),
        },
    }
}

/// True iff the script closes the theorem under tactical semantics.
pub fn replays(env: &Env, theorem: &Prop, script: &ScriptAst) -> bool {
    run(env, script, ProofState::initial(theorem.clone())).is_ok_and(|s| s.is_complete())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_prop;
    use crate::proofscript::parse_script;

    fn ok(goal: &str, script: &str) -> bool {
        replays(
            &Env::default(),
            &parse_prop(goal).unwrap(),
            &parse_script(script).unwrap(),
        )
    }

    #[test]
    fn seq_runs_on_all_children() {
        assert!(ok("impl A (impl B (and A B))", "intro. intro. split; assumption."));
        assert!(!ok("impl A (impl B (and A B))", "intro. intro. split. assumption."));
    }

    #[test]
    fn now_closes_everything() {
        assert!(ok("forall n : nat, eq (plus 0 n) n", "intro. now simpl."));
        assert!(!ok("forall n : nat, eq (plus n 0) n", "intro. now simpl."));
    }

    #[test]
    fn try_restores_on_failure() {
        assert!(ok("impl A A", "try split. intro. try (split; easy). assumption."));
    }

    #[test]
    fn seq_keeps_unclosed_children_in_order() {
        assert!(ok(
            "forall n : nat, eq (plus n 0) n",
            "induction n; simpl. reflexivity. rewrite IHn. reflexivity."
        ));
    }
}

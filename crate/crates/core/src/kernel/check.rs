use serde::{Deserialize, Serialize};

use super::env::Env;
use super::syntax::*;
use super::tactics::apply_tactic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckResult {
    Pass,
    /// Index of the first command that failed, or the script length when
    /// obligations remain after the last command.
    Fail(usize),
}

/// Replay `script` from the initial state of `theorem`. Passes iff every
/// command succeeds and the last one leaves no obligations.
pub fn check_proof(env: &Env, theorem: &Prop, script: &[ProofCommand]) -> CheckResult {
    let mut state = ProofState::initial(theorem.clone());
    for (i, cmd) in script.iter().enumerate() {
        match apply_tactic(env, &state, cmd) {
            Ok(next) => state = next,
            Err(_) => return CheckResult::Fail(i),
        }
    }
    if state.is_complete() {
        CheckResult::Pass
    } else {
        CheckResult::Fail(script.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse::parse_prop;

    #[test]
    fn pass_and_fail_positions() {
        let env = Env::default();
        let thm = parse_prop("impl A A").unwrap();
        let intro = ProofCommand::bare(BaseTactic::Intro);
        let asm = ProofCommand::bare(BaseTactic::Assumption);
        assert_eq!(
            check_proof(&env, &thm, &[intro.clone(), asm.clone()]),
            CheckResult::Pass
        );
        assert_eq!(check_proof(&env, &thm, &[intro.clone()]), CheckResult::Fail(1));
        assert_eq!(check_proof(&env, &thm, &[asm.clone()]), CheckResult::Fail(0));
        assert_eq!(
            check_proof(&env, &thm, &[intro, asm.clone(), asm]),
            CheckResult::Fail(2)
        );
    }
}

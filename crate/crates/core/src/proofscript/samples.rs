use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::features::{extract_context, previous_tactic, TrainingSample};
use crate::kernel::{apply_tactic, Env, Ident, ProofCommand, ProofState, Prop};

use super::ast::*;
use super::desugar::desugar;
use super::linearize::{linearize, LinearizeError};
use super::replay::{resolve, run};

/// Per-file bookkeeping from sample extraction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractStats {
    pub theorems: usize,
    /// Proofs that could not be linearized.
    pub dropped: usize,
    /// Proofs whose script contains a `;`.
    pub with_seq: usize,
}

/// The environment in which theorem `index` of `file` is proved.
pub fn theorem_env(file: &ScriptFile, index: usize) -> Env {
    Env {
        definitions: file.definitions.clone(),
        lemmas: lemma_pool(file, index),
    }
}

pub fn lemma_pool(file: &ScriptFile, index: usize) -> Vec<(Ident, Prop)> {
    file.theorems[..index]
        .iter()
        .map(|t| (Ident::new(t.name.as_str()), t.statement.clone()))
        .collect()
}

fn samples_along(
    env: &Env,
    theorem: &Prop,
    commands: &[ProofCommand],
    pool: &Arc<Vec<(Ident, Prop)>>,
    out: &mut Vec<TrainingSample>,
) {
    let mut st = ProofState::initial(theorem.clone());
    for cmd in commands {
        out.push(TrainingSample {
            ctx: extract_context(&st, previous_tactic(&st)),
            label: cmd.clone(),
            lemma_pool: Arc::clone(pool),
        });
        st = apply_tactic(env, &st, cmd).expect("linearized scripts replay");
    }
}

/// One sample per command of every linearized proof in `file`.
pub fn extract_samples(file: &ScriptFile) -> Result<(Vec<TrainingSample>, ExtractStats), LinearizeError> {
    let mut out = Vec::new();
    let mut stats = ExtractStats::default();
    for (i, thm) in file.theorems.iter().enumerate() {
        let env = theorem_env(file, i);
        let pool = Arc::new(env.lemmas.clone());
        let lin = linearize(&env, &desugar(&thm.script), &thm.statement)?;
        stats.theorems += 1;
        stats.dropped += lin.dropped;
        stats.with_seq += usize::from(thm.script.contains_seq());
        samples_along(&env, &thm.statement, &lin.commands, &pool, &mut out);
    }
    Ok((out, stats))
}

/// Samples without the tactical transformation: only top-level statements
/// that are already a single plain command become samples; everything else
/// is replayed but filtered out.
pub fn extract_samples_untransformed(file: &ScriptFile) -> Vec<TrainingSample> {
    let mut out = Vec::new();
    for (i, thm) in file.theorems.iter().enumerate() {
        let env = theorem_env(file, i);
        let pool = Arc::new(env.lemmas.clone());
        let mut st = ProofState::initial(thm.statement.clone());
        let mut thm_samples = Vec::new();
        let mut ok = true;
        for stmt in thm.script.statements() {
            if let ScriptAst::Atomic(raw) = stmt {
                let Ok(cmd) = resolve(&env, &st, raw) else {
                    ok = false;
                    break;
                };
                thm_samples.push(TrainingSample {
                    ctx: extract_context(&st, previous_tactic(&st)),
                    label: cmd,
                    lemma_pool: Arc::clone(&pool),
                });
            }
            match run(&env, stmt, st.clone()) {
                Ok(next) => st = next,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && st.is_complete() {
            out.extend(thm_samples);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofscript::parse_file;

    const FIXTURE: &str = "
Definition both (a : nat) (b : nat) : Prop := and (eq a a) (eq b b).
Theorem t0 : impl A A.
Proof. intro. assumption. Qed.
Theorem t1 : impl A (impl B (and A B)).
Proof. intro. intro. split; assumption. Qed.
Theorem t2 : forall n : nat, eq (plus 0 n) n.
Proof. intro. now simpl. Qed.
Theorem t3 : both 1 2.
Proof. unfold both. split; reflexivity. Qed.
Theorem t4 : impl A (impl B (and A B)).
Proof. apply t1. Qed.
";

    #[test]
    fn one_sample_per_linear_command() {
        let f = parse_file("fixture", FIXTURE).unwrap();
        let (samples, stats) = extract_samples(&f).unwrap();
        // t0: 2, t1: 5, t2: intro simpl easy = 3, t3: unfold split refl refl = 4, t4: 1
        assert_eq!(samples.len(), 15);
        assert_eq!(stats.dropped, 0);
        assert_eq!(samples[0].ctx.prev_tactic, None);
        assert_eq!(samples[1].label.to_string(), "assumption");
        let apply = samples.last().unwrap();
        assert_eq!(apply.label.arg.kind(), crate::kernel::ArgKind::LemmaIdent);
        assert_eq!(apply.lemma_pool.len(), 4);
    }

    #[test]
    fn empty_file_has_no_samples() {
        let f = parse_file("empty", "").unwrap();
        assert!(extract_samples(&f).unwrap().0.is_empty());
    }

    #[test]
    fn untransformed_keeps_only_plain_statements() {
        let f = parse_file("fixture", FIXTURE).unwrap();
        let plain = extract_samples_untransformed(&f);
        // t0: 2, t1: intro intro, t2: intro, t3: unfold, t4: apply
        assert_eq!(plain.len(), 7);
    }
}

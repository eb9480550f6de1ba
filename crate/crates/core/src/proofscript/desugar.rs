use crate::kernel::{BaseTactic, TacticName};

use super::ast::*;

/// Rewrite tacticals into `;`, side-goal sequences, plain statements and
/// learned `try` tactics. Idempotent.
pub fn desugar(ast: &ScriptAst) -> ScriptAst {
    match ast {
        ScriptAst::Atomic(_) => ast.clone(),
        ScriptAst::Seq(l, r) => ScriptAst::seq(desugar(l), desugar(r)),
        ScriptAst::SeqSide(l, r) => ScriptAst::SeqSide(Box::new(desugar(l)), Box::new(desugar(r))),
        ScriptAst::Now(t) => ScriptAst::seq(desugar(t), ScriptAst::atomic(BaseTactic::Easy, RawArg::None)),
        ScriptAst::RewriteBy(a, t) => ScriptAst::SeqSide(
            Box::new(ScriptAst::atomic(BaseTactic::Rewrite, a.clone())),
            Box::new(desugar(t)),
        ),
        ScriptAst::AssertBy(a, t) => ScriptAst::SeqSide(
            Box::new(ScriptAst::atomic(BaseTactic::Assert, a.clone())),
            Box::new(desugar(t)),
        ),
        ScriptAst::Try(t) => match desugar(t) {
            ScriptAst::Atomic(RawCommand {
                tactic: TacticName::Base(b),
                arg,
            }) => ScriptAst::Atomic(RawCommand::new(TacticName::Try(b), arg)),
            other => ScriptAst::Try(Box::new(other)),
        },
        ScriptAst::MultiArg(t, args) => ScriptAst::Dots(
            args.iter()
                .map(|a| ScriptAst::Atomic(RawCommand::new(*t, a.clone())))
                .collect(),
        ),
        ScriptAst::Dots(v) => {
            let mut out = Vec::with_capacity(v.len());
            for s in v {
                match desugar(s) {
                    ScriptAst::Dots(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            ScriptAst::Dots(out)
        }
    }
}

/// Learned `try` tactic names appearing in a desugared tree, sorted.
pub fn learned_try_tactics(ast: &ScriptAst) -> Vec<TacticName> {
    let mut names = Vec::new();
    ast.tactic_names(&mut names);
    names.retain(|t| matches!(t, TacticName::Try(_)));
    names.sort();
    names.dedup();
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofscript::parse_script;

    fn d(src: &str) -> ScriptAst {
        desugar(&parse_script(src).unwrap())
    }

    #[test]
    fn now_becomes_seq_easy() {
        assert_eq!(d("now split."), d("split; easy."));
    }

    #[test]
    fn multi_arg_becomes_statements() {
        assert_eq!(d("unfold a, b. easy."), d("unfold a. unfold b. easy."));
    }

    #[test]
    fn try_atomic_is_learned_name() {
        let ast = d("try easy.");
        assert_eq!(
            ast.statements(),
            [ScriptAst::Atomic(RawCommand::bare(TacticName::Try(BaseTactic::Easy)))]
        );
        assert_eq!(learned_try_tactics(&ast), [TacticName::Try(BaseTactic::Easy)]);
    }

    #[test]
    fn try_compound_stays() {
        assert!(matches!(&d("try (split; easy).").statements()[0], ScriptAst::Try(_)));
    }

    #[test]
    fn by_becomes_side_sequence() {
        let ast = d("rewrite H by easy.");
        assert!(matches!(&ast.statements()[0], ScriptAst::SeqSide(..)));
    }

    #[test]
    fn fixpoint() {
        for src in [
            "now split.",
            "try (unfold a, b).",
            "rewrite H by now simpl. try easy.",
            "intro; try easy.",
        ] {
            let once = d(src);
            assert_eq!(desugar(&once), once, "{src}");
        }
    }
}

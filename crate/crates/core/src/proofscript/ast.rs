use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::{Definition, Prop, TacticName};

/// An argument as written in a script, before it is resolved against an
/// obligation into a hypothesis, lemma, or goal token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RawArg {
    None,
    Word(String),
    Expr(Prop),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawCommand {
    pub tactic: TacticName,
    pub arg: RawArg,
}

impl RawCommand {
    pub fn new(tactic: impl Into<TacticName>, arg: RawArg) -> Self {
        RawCommand {
            tactic: tactic.into(),
            arg,
        }
    }

    pub fn bare(tactic: impl Into<TacticName>) -> Self {
        RawCommand::new(tactic, RawArg::None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScriptAst {
    Atomic(RawCommand),
    /// `l; r`: run `r` on every obligation produced by `l`.
    Seq(Box<ScriptAst>, Box<ScriptAst>),
    /// Run `r` on every obligation produced by `l` except the last, closing
    /// each. The target of `rewrite .. by` and `assert .. by`.
    SeqSide(Box<ScriptAst>, Box<ScriptAst>),
    Now(Box<ScriptAst>),
    RewriteBy(RawArg, Box<ScriptAst>),
    AssertBy(RawArg, Box<ScriptAst>),
    Try(Box<ScriptAst>),
    MultiArg(TacticName, Vec<RawArg>),
    Dots(Vec<ScriptAst>),
}

impl ScriptAst {
    pub fn atomic(tactic: impl Into<TacticName>, arg: RawArg) -> Self {
        ScriptAst::Atomic(RawCommand::new(tactic, arg))
    }

    pub fn seq(l: ScriptAst, r: ScriptAst) -> Self {
        ScriptAst::Seq(Box::new(l), Box::new(r))
    }

    /// Top-level statements of a script.
    pub fn statements(&self) -> &[ScriptAst] {
        match self {
            ScriptAst::Dots(v) => v,
            other => std::slice::from_ref(other),
        }
    }

    /// True if the node contains a `;` (plain or side-goal form).
    pub fn contains_seq(&self) -> bool {
        match self {
            ScriptAst::Seq(..) | ScriptAst::SeqSide(..) => true,
            ScriptAst::Atomic(_) | ScriptAst::MultiArg(..) => false,
            ScriptAst::Now(t) | ScriptAst::Try(t) => t.contains_seq(),
            ScriptAst::RewriteBy(_, t) | ScriptAst::AssertBy(_, t) => t.contains_seq(),
            ScriptAst::Dots(v) => v.iter().any(ScriptAst::contains_seq),
        }
    }

    /// Every tactic name mentioned anywhere in the tree.
    pub fn tactic_names(&self, out: &mut Vec<TacticName>) {
        match self {
            ScriptAst::Atomic(c) => out.push(c.tactic),
            ScriptAst::Seq(l, r) | ScriptAst::SeqSide(l, r) => {
                l.tactic_names(out);
                r.tactic_names(out);
            }
            ScriptAst::Now(t) | ScriptAst::Try(t) => t.tactic_names(out),
            ScriptAst::RewriteBy(_, t) => {
                out.push(TacticName::Base(crate::kernel::BaseTactic::Rewrite));
                t.tactic_names(out);
            }
            ScriptAst::AssertBy(_, t) => {
                out.push(TacticName::Base(crate::kernel::BaseTactic::Assert));
                t.tactic_names(out);
            }
            ScriptAst::MultiArg(t, _) => out.push(*t),
            ScriptAst::Dots(v) => v.iter().for_each(|s| s.tactic_names(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremScript {
    pub name: String,
    pub statement: Prop,
    pub script: ScriptAst,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptFile {
    pub name: String,
    pub definitions: Vec<Definition>,
    pub theorems: Vec<TheoremScript>,
}

impl fmt::Display for RawArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawArg::None => Ok(()),
            RawArg::Word(w) => f.write_str(w),
            RawArg::Expr(p) => write!(f, "({p})"),
        }
    }
}

fn write_tactic(f: &mut fmt::Formatter<'_>, t: TacticName) -> fmt::Result {
    match t {
        TacticName::Base(b) => f.write_str(b.name()),
        TacticName::Try(b) => write!(f, "try {}", b.name()),
    }
}

impl fmt::Display for RawCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tactic(f, self.tactic)?;
        if self.arg != RawArg::None {
            write!(f, " {}", self.arg)?;
        }
        Ok(())
    }
}

/// Print a node at `prefix` level: parenthesize sequences.
fn write_prefix(f: &mut fmt::Formatter<'_>, t: &ScriptAst) -> fmt::Result {
    match t {
        ScriptAst::Seq(..) | ScriptAst::SeqSide(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

impl fmt::Display for ScriptAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptAst::Atomic(c) => write!(f, "{c}"),
            ScriptAst::Seq(l, r) => {
                write!(f, "{l}; ")?;
                write_prefix(f, r)
            }
            ScriptAst::SeqSide(l, r) => {
                write!(f, "{l}; [")?;
                write_prefix(f, r)?;
                f.write_str(" | ]")
            }
            ScriptAst::Now(t) => {
                f.write_str("now ")?;
                write_prefix(f, t)
            }
            ScriptAst::Try(t) => {
                f.write_str("try ")?;
                write_prefix(f, t)
            }
            ScriptAst::RewriteBy(a, t) | ScriptAst::AssertBy(a, t) => {
                let kw = if matches!(self, ScriptAst::RewriteBy(..)) {
                    "rewrite"
                } else {
                    "assert"
                };
                write!(f, "{kw} {a} by ")?;
                write_prefix(f, t)
            }
            ScriptAst::MultiArg(t, args) => {
                write_tactic(f, *t)?;
                for (i, a) in args.iter().enumerate() {
                    f.write_str(if i == 0 { " " } else { ", " })?;
                    write!(f, "{a}")?;
                }
                Ok(())
            }
            ScriptAst::Dots(v) => {
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    if matches!(s, ScriptAst::Dots(_)) {
                        return Err(fmt::Error);
                    }
                    write!(f, "{s}.")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TheoremScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Theorem {} : {}.", self.name, self.statement)?;
        writeln!(f, "Proof.")?;
        for s in self.script.statements() {
            writeln!(f, "  {s}.")?;
        }
        writeln!(f, "Qed.")
    }
}

impl fmt::Display for ScriptFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(* {} *)", self.name)?;
        for d in &self.definitions {
            write!(f, "Definition {}", d.name)?;
            for (x, s) in &d.params {
                write!(f, " ({x} : {})", s.name())?;
            }
            writeln!(f, " : Prop := {}.", d.body)?;
        }
        for t in &self.theorems {
            writeln!(f)?;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

//! Canonical concrete syntax. `tokenize` is defined on the printed form, so
//! anything that changes the printer changes what the predictors see.

use std::fmt;

use super::syntax::*;

fn term_is_compound(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Zero | Term::Nil | Term::True | Term::False => false,
        Term::Succ(_) => t.as_numeral().is_none(),
        Term::Cons(..) => true,
        Term::Fn(..) => true,
    }
}

fn write_term_atom(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    if term_is_compound(t) {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Zero => f.write_str("0"),
            Term::Succ(t) => {
                f.write_str("S ")?;
                write_term_atom(f, t)
            }
            Term::Nil => f.write_str("nil"),
            Term::Cons(h, t) => {
                f.write_str("cons ")?;
                write_term_atom(f, h)?;
                f.write_str(" ")?;
                write_term_atom(f, t)
            }
            Term::True => f.write_str("true"),
            Term::False => f.write_str("false"),
            Term::Fn(func, args) => {
                f.write_str(func.name())?;
                for a in args {
                    f.write_str(" ")?;
                    write_term_atom(f, a)?;
                }
                Ok(())
            }
        }
    }
}

fn write_prop_atom(f: &mut fmt::Formatter<'_>, p: &Prop) -> fmt::Result {
    match p {
        Prop::Atom(_) => write!(f, "{p}"),
        Prop::App(_, args) if args.is_empty() => write!(f, "{p}"),
        _ => write!(f, "({p})"),
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(a) => write!(f, "{a}"),
            Prop::App(head, args) => {
                write!(f, "{head}")?;
                for a in args {
                    f.write_str(" ")?;
                    write_term_atom(f, a)?;
                }
                Ok(())
            }
            Prop::Eq(a, b) => {
                f.write_str("eq ")?;
                write_term_atom(f, a)?;
                f.write_str(" ")?;
                write_term_atom(f, b)
            }
            Prop::Not(p) => {
                f.write_str("not ")?;
                write_prop_atom(f, p)
            }
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                let op = match self {
                    Prop::And(..) => "and",
                    Prop::Or(..) => "or",
                    _ => "impl",
                };
                write!(f, "{op} ")?;
                write_prop_atom(f, a)?;
                f.write_str(" ")?;
                write_prop_atom(f, b)
            }
            Prop::Forall(x, s, body) => write!(f, "forall {x} : {}, {body}", s.name()),
        }
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::None => Ok(()),
            Argument::GoalToken(t) => f.write_str(t),
            Argument::HypIdent(i) | Argument::LemmaIdent(i) => write!(f, "{i}"),
            Argument::Expr(p) => write!(f, "({p})"),
        }
    }
}

impl fmt::Display for ProofCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tactic {
            TacticName::Base(b) => f.write_str(b.name())?,
            TacticName::Try(b) => write!(f, "try {}", b.name())?,
        }
        if !self.arg.is_none() {
            write!(f, " {}", self.arg)?;
        }
        Ok(())
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            HypBody::Prop(p) => write!(f, "{} : {p}", self.id),
            HypBody::Var(s) => write!(f, "{} : {}", self.id, s.name()),
        }
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.hyps {
            writeln!(f, "{h}")?;
        }
        writeln!(f, "============================")?;
        write!(f, "{}", self.goal)
    }
}

fn split_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':' | '.'))
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Left-to-right identifier and operator tokens of the printed proposition.
/// Parentheses, commas, colons and dots are dropped.
pub fn tokenize(p: &Prop) -> Vec<String> {
    split_tokens(&p.to_string())
}

/// Tokens of a hypothesis's type: the proposition, or the sort of a variable.
pub fn tokenize_hyp(h: &Hypothesis) -> Vec<String> {
    match &h.body {
        HypBody::Prop(p) => tokenize(p),
        HypBody::Var(s) => vec![s.name().to_owned()],
    }
}

pub fn head_token(p: &Prop) -> String {
    tokenize(p)
        .into_iter()
        .next()
        .expect("a printed proposition has at least one token")
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::logic::subst_prop;
use super::syntax::*;

/// A per-file definition of a predicate: `Definition name (x : s) ... : Prop := body.`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub name: Ident,
    pub params: Vec<(Ident, Sort)>,
    pub body: Prop,
}

impl Definition {
    /// The body with `args` substituted for the parameters.
    pub fn instantiate(&self, args: &[Term]) -> Option<Prop> {
        if args.len() != self.params.len() {
            return None;
        }
        let s = self
            .params
            .iter()
            .map(|(x, _)| x.clone())
            .zip(args.iter().cloned())
            .collect();
        Some(subst_prop(&self.body, &s))
    }
}

/// What tactics may refer to besides the obligation itself: the file's
/// definitions and the lemmas proved before the current theorem.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Env {
    pub definitions: Vec<Definition>,
    pub lemmas: Vec<(Ident, Prop)>,
}

impl Env {
    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name.as_str() == name)
    }

    pub fn lemma(&self, name: &str) -> Option<&Prop> {
        self.lemmas.iter().find(|(n, _)| n.as_str() == name).map(|(_, p)| p)
    }

    pub fn with_lemmas(&self, lemmas: Vec<(Ident, Prop)>) -> Env {
        Env {
            definitions: self.definitions.clone(),
            lemmas,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(Ident),
    #[error("sort mismatch in `{0}`")]
    SortMismatch(String),
    #[error("`{0}` expects {1} arguments")]
    Arity(Ident, usize),
}

fn term_sort(t: &Term, ctx: &[(Ident, Sort)]) -> Result<Sort, TypeError> {
    let expect = |t: &Term, s: Sort| -> Result<(), TypeError> {
        if term_sort(t, ctx)? == s {
            Ok(())
        } else {
            Err(TypeError::SortMismatch(t.to_string()))
        }
    };
    match t {
        Term::Var(x) => ctx
            .iter()
            .rev()
            .find(|(v, _)| v == x)
            .map(|(_, s)| *s)
            .ok_or_else(|| TypeError::Unbound(x.clone())),
        Term::Zero => Ok(Sort::Nat),
        Term::Succ(a) => expect(a, Sort::Nat).map(|_| Sort::Nat),
        Term::Nil => Ok(Sort::List),
        Term::Cons(h, tl) => {
            expect(h, Sort::Nat)?;
            expect(tl, Sort::List)?;
            Ok(Sort::List)
        }
        Term::True | Term::False => Ok(Sort::Bool),
        Term::Fn(f, args) => {
            let (params, result) = f.signature();
            if args.len() != params.len() {
                return Err(TypeError::Arity(Ident::new(f.name()), params.len()));
            }
            for (a, s) in args.iter().zip(params) {
                expect(a, *s)?;
            }
            Ok(result)
        }
    }
}

/// Check that every term variable is bound and all sorts agree.
/// `ctx` lists the hypothesis-scoped variables in scope.
pub fn typecheck(env: &Env, p: &Prop, ctx: &mut Vec<(Ident, Sort)>) -> Result<(), TypeError> {
    match p {
        Prop::Atom(a) => match env.definition(a.as_str()) {
            Some(d) if !d.params.is_empty() => Err(TypeError::Arity(a.clone(), d.params.len())),
            _ => Ok(()),
        },
        Prop::App(h, args) => {
            let sorts = args.iter().map(|a| term_sort(a, ctx)).collect::<Result<Vec<_>, _>>()?;
            if let Some(d) = env.definition(h.as_str()) {
                if d.params.len() != args.len() {
                    return Err(TypeError::Arity(h.clone(), d.params.len()));
                }
                if d.params.iter().zip(&sorts).any(|((_, s), t)| s != t) {
                    return Err(TypeError::SortMismatch(p.to_string()));
                }
            }
            Ok(())
        }
        Prop::Eq(a, b) => {
            if term_sort(a, ctx)? == term_sort(b, ctx)? {
                Ok(())
            } else {
                Err(TypeError::SortMismatch(p.to_string()))
            }
        }
        Prop::Not(q) => typecheck(env, q, ctx),
        Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
            typecheck(env, a, ctx)?;
            typecheck(env, b, ctx)
        }
        Prop::Forall(x, s, body) => {
            ctx.push((x.clone(), *s));
            let r = typecheck(env, body, ctx);
            ctx.pop();
            r
        }
    }
}

pub fn obligation_vars(o: &Obligation) -> Vec<(Ident, Sort)> {
    o.hyps
        .iter()
        .filter_map(|h| match h.body {
            HypBody::Var(s) => Some((h.id.clone(), s)),
            HypBody::Prop(_) => None,
        })
        .collect()
}

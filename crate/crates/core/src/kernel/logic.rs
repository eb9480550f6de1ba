//! Term normalization, alpha-equivalence, capture-avoiding substitution and
//! first-order matching.

use super::syntax::*;

pub type Subst = Vec<(Ident, Term)>;

fn lookup<'a>(s: &'a Subst, x: &Ident) -> Option<&'a Term> {
    s.iter().find(|(v, _)| v == x).map(|(_, t)| t)
}

/// Normalize with the defining equations of plus, mult, append and length
/// (recursion on the first argument).
pub fn normalize_term(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Zero | Term::Nil | Term::True | Term::False => t.clone(),
        Term::Succ(a) => Term::succ(normalize_term(a)),
        Term::Cons(h, tl) => Term::cons(normalize_term(h), normalize_term(tl)),
        Term::Fn(f, args) => {
            let args: Vec<Term> = args.iter().map(normalize_term).collect();
            reduce_head(*f, args)
        }
    }
}

// `args` are already normal.
fn reduce_head(f: Func, mut args: Vec<Term>) -> Term {
    match (f, args.first()) {
        (Func::Plus, Some(Term::Zero)) => args.pop().unwrap(),
        (Func::Plus, Some(Term::Succ(_))) => {
            let m = args.pop().unwrap();
            let Term::Succ(n) = args.pop().unwrap() else {
                unreachable!()
            };
            Term::succ(reduce_head(Func::Plus, vec![*n, m]))
        }
        (Func::Mult, Some(Term::Zero)) => Term::Zero,
        (Func::Mult, Some(Term::Succ(_))) => {
            let m = args.pop().unwrap();
            let Term::Succ(n) = args.pop().unwrap() else {
                unreachable!()
            };
            let rest = reduce_head(Func::Mult, vec![*n, m.clone()]);
            reduce_head(Func::Plus, vec![m, rest])
        }
        (Func::Append, Some(Term::Nil)) => args.pop().unwrap(),
        (Func::Append, Some(Term::Cons(..))) => {
            let l2 = args.pop().unwrap();
            let Term::Cons(x, l) = args.pop().unwrap() else {
                unreachable!()
            };
            Term::cons(*x, reduce_head(Func::Append, vec![*l, l2]))
        }
        (Func::Length, Some(Term::Nil)) => Term::Zero,
        (Func::Length, Some(Term::Cons(..))) => {
            let Term::Cons(_, l) = args.pop().unwrap() else {
                unreachable!()
            };
            Term::succ(reduce_head(Func::Length, vec![*l]))
        }
        _ => Term::Fn(f, args),
    }
}

pub fn normalize_prop(p: &Prop) -> Prop {
    map_terms(p, &mut |t| normalize_term(t))
}

fn map_terms(p: &Prop, f: &mut impl FnMut(&Term) -> Term) -> Prop {
    match p {
        Prop::Atom(_) => p.clone(),
        Prop::App(h, args) => Prop::App(h.clone(), args.iter().map(&mut *f).collect()),
        Prop::Eq(a, b) => Prop::Eq(f(a), f(b)),
        Prop::Not(q) => Prop::not(map_terms(q, f)),
        Prop::And(a, b) => Prop::and(map_terms(a, f), map_terms(b, f)),
        Prop::Or(a, b) => Prop::or(map_terms(a, f), map_terms(b, f)),
        Prop::Implies(a, b) => Prop::implies(map_terms(a, f), map_terms(b, f)),
        Prop::Forall(x, s, b) => Prop::Forall(x.clone(), *s, Box::new(map_terms(b, f))),
    }
}

type Binders = Vec<(Ident, Ident)>;

fn bound_index(env: &Binders, x: &Ident, left: bool) -> Option<usize> {
    env.iter().rposition(|(l, r)| if left { l == x } else { r == x })
}

fn var_alpha_eq(env: &Binders, x: &Ident, y: &Ident) -> bool {
    match (bound_index(env, x, true), bound_index(env, y, false)) {
        (Some(i), Some(j)) => i == j,
        (None, None) => x == y,
        _ => false,
    }
}

fn term_alpha_eq(env: &Binders, a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => var_alpha_eq(env, x, y),
        (Term::Zero, Term::Zero) | (Term::Nil, Term::Nil) | (Term::True, Term::True) | (Term::False, Term::False) => {
            true
        }
        (Term::Succ(x), Term::Succ(y)) => term_alpha_eq(env, x, y),
        (Term::Cons(h1, t1), Term::Cons(h2, t2)) => term_alpha_eq(env, h1, h2) && term_alpha_eq(env, t1, t2),
        (Term::Fn(f, xs), Term::Fn(g, ys)) => f == g && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(env, x, y)),
        _ => false,
    }
}

fn prop_alpha_eq(env: &mut Binders, p: &Prop, q: &Prop) -> bool {
    match (p, q) {
        (Prop::Atom(a), Prop::Atom(b)) => a == b,
        (Prop::App(f, xs), Prop::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(env, x, y))
        }
        (Prop::Eq(a1, b1), Prop::Eq(a2, b2)) => term_alpha_eq(env, a1, a2) && term_alpha_eq(env, b1, b2),
        (Prop::Not(a), Prop::Not(b)) => prop_alpha_eq(env, a, b),
        (Prop::And(a1, b1), Prop::And(a2, b2))
        | (Prop::Or(a1, b1), Prop::Or(a2, b2))
        | (Prop::Implies(a1, b1), Prop::Implies(a2, b2)) => prop_alpha_eq(env, a1, a2) && prop_alpha_eq(env, b1, b2),
        (Prop::Forall(x, s1, b1), Prop::Forall(y, s2, b2)) => {
            if s1 != s2 {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = prop_alpha_eq(env, b1, b2);
            env.pop();
            r
        }
        _ => false,
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(p: &Prop, q: &Prop) -> bool {
    prop_alpha_eq(&mut Vec::new(), p, q)
}

pub fn hyp_body_alpha_eq(a: &HypBody, b: &HypBody) -> bool {
    match (a, b) {
        (HypBody::Prop(p), HypBody::Prop(q)) => alpha_eq(p, q),
        (HypBody::Var(s), HypBody::Var(t)) => s == t,
        _ => false,
    }
}

/// First name of the form `base`, `base0`, `base1`, ... rejected by `taken`.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Ident {
    if !taken(base) {
        return Ident::new(base);
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken(n))
        .map(Ident::new)
        .unwrap()
}

/// First unused `H0`, `H1`, ...
pub fn fresh_hyp_name(taken: impl Fn(&str) -> bool) -> Ident {
    (0..)
        .map(|i| format!("H{i}"))
        .find(|n| !taken(n))
        .map(Ident::new)
        .unwrap()
}

pub fn subst_term(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(x) => lookup(s, x).cloned().unwrap_or_else(|| t.clone()),
        Term::Zero | Term::Nil | Term::True | Term::False => t.clone(),
        Term::Succ(a) => Term::succ(subst_term(a, s)),
        Term::Cons(h, tl) => Term::cons(subst_term(h, s), subst_term(tl, s)),
        Term::Fn(f, args) => Term::Fn(*f, args.iter().map(|a| subst_term(a, s)).collect()),
    }
}

/// Simultaneous capture-avoiding substitution of terms for free variables.
pub fn subst_prop(p: &Prop, s: &Subst) -> Prop {
    if s.is_empty() {
        return p.clone();
    }
    match p {
        Prop::Atom(_) => p.clone(),
        Prop::App(h, args) => Prop::App(h.clone(), args.iter().map(|a| subst_term(a, s)).collect()),
        Prop::Eq(a, b) => Prop::Eq(subst_term(a, s), subst_term(b, s)),
        Prop::Not(q) => Prop::not(subst_prop(q, s)),
        Prop::And(a, b) => Prop::and(subst_prop(a, s), subst_prop(b, s)),
        Prop::Or(a, b) => Prop::or(subst_prop(a, s), subst_prop(b, s)),
        Prop::Implies(a, b) => Prop::implies(subst_prop(a, s), subst_prop(b, s)),
        Prop::Forall(x, sort, body) => {
            let inner: Subst = s.iter().filter(|(v, _)| v != x).cloned().collect();
            if inner.is_empty() {
                return p.clone();
            }
            let captures = inner.iter().any(|(_, t)| t.contains_var(x));
            if captures {
                let body_fv = body.free_vars();
                let y = fresh_name(x.as_str(), |n| {
                    body_fv.iter().any(|v| v.as_str() == n)
                        || inner
                            .iter()
                            .any(|(v, t)| v.as_str() == n || t.contains_var(&Ident::new(n)))
                });
                let renamed = subst_prop(body, &vec![(x.clone(), Term::Var(y.clone()))]);
                Prop::Forall(y, *sort, Box::new(subst_prop(&renamed, &inner)))
            } else {
                Prop::Forall(x.clone(), *sort, Box::new(subst_prop(body, &inner)))
            }
        }
    }
}

/// Match `pat` against `tgt`, binding the pattern variables listed in `metas`.
/// Metavariables never bind terms mentioning variables bound inside `tgt`.
pub fn match_prop(pat: &Prop, tgt: &Prop, metas: &[Ident], s: &mut Subst) -> bool {
    match_prop_env(&mut Vec::new(), pat, tgt, metas, s)
}

fn match_prop_env(env: &mut Binders, pat: &Prop, tgt: &Prop, metas: &[Ident], s: &mut Subst) -> bool {
    match (pat, tgt) {
        (Prop::Atom(a), Prop::Atom(b)) => a == b,
        (Prop::App(f, xs), Prop::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term_env(env, x, y, metas, s))
        }
        (Prop::Eq(a1, b1), Prop::Eq(a2, b2)) => {
            match_term_env(env, a1, a2, metas, s) && match_term_env(env, b1, b2, metas, s)
        }
        (Prop::Not(a), Prop::Not(b)) => match_prop_env(env, a, b, metas, s),
        (Prop::And(a1, b1), Prop::And(a2, b2))
        | (Prop::Or(a1, b1), Prop::Or(a2, b2))
        | (Prop::Implies(a1, b1), Prop::Implies(a2, b2)) => {
            match_prop_env(env, a1, a2, metas, s) && match_prop_env(env, b1, b2, metas, s)
        }
        (Prop::Forall(x, s1, b1), Prop::Forall(y, s2, b2)) => {
            if s1 != s2 {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = match_prop_env(env, b1, b2, metas, s);
            env.pop();
            r
        }
        _ => false,
    }
}

/// Match a term pattern against a term under the target binders `tgt_bound`.
pub fn match_term(pat: &Term, tgt: &Term, metas: &[Ident], tgt_bound: &[Ident], s: &mut Subst) -> bool {
    let env: Binders = tgt_bound
        .iter()
        .map(|v| (Ident::internal("unmatched"), v.clone()))
        .collect();
    match_term_env(&env, pat, tgt, metas, s)
}

fn mentions_bound(env: &Binders, t: &Term) -> bool {
    let mut vs = Vec::new();
    t.free_vars_into(&mut vs);
    vs.iter().any(|v| bound_index(env, v, false).is_some())
}

fn match_term_env(env: &Binders, pat: &Term, tgt: &Term, metas: &[Ident], s: &mut Subst) -> bool {
    match pat {
        Term::Var(x) => {
            if let Some(i) = bound_index(env, x, true) {
                return matches!(tgt, Term::Var(y) if bound_index(env, y, false) == Some(i));
            }
            if metas.contains(x) {
                if mentions_bound(env, tgt) {
                    return false;
                }
                return match lookup(s, x) {
                    Some(t) => t == tgt,
                    None => {
                        s.push((x.clone(), tgt.clone()));
                        true
                    }
                };
            }
            matches!(tgt, Term::Var(y) if y == x && bound_index(env, y, false).is_none())
        }
        Term::Zero => *tgt == Term::Zero,
        Term::Nil => *tgt == Term::Nil,
        Term::True => *tgt == Term::True,
        Term::False => *tgt == Term::False,
        Term::Succ(a) => matches!(tgt, Term::Succ(b) if match_term_env(env, a, b, metas, s)),
        Term::Cons(h1, t1) => match tgt {
            Term::Cons(h2, t2) => match_term_env(env, h1, h2, metas, s) && match_term_env(env, t1, t2, metas, s),
            _ => false,
        },
        Term::Fn(f, xs) => match tgt {
            Term::Fn(g, ys) if f == g => xs.iter().zip(ys).all(|(x, y)| match_term_env(env, x, y, metas, s)),
            _ => false,
        },
    }
}

/// Subterms of `p` in pre-order, each with the variables bound above it.
pub fn subterms(p: &Prop) -> Vec<(Term, Vec<Ident>)> {
    fn walk_term(t: &Term, bound: &[Ident], out: &mut Vec<(Term, Vec<Ident>)>) {
        out.push((t.clone(), bound.to_vec()));
        match t {
            Term::Succ(a) => walk_term(a, bound, out),
            Term::Cons(h, tl) => {
                walk_term(h, bound, out);
                walk_term(tl, bound, out);
            }
            Term::Fn(_, args) => args.iter().for_each(|a| walk_term(a, bound, out)),
            _ => {}
        }
    }
    fn walk(p: &Prop, bound: &mut Vec<Ident>, out: &mut Vec<(Term, Vec<Ident>)>) {
        match p {
            Prop::Atom(_) => {}
            Prop::App(_, args) => args.iter().for_each(|a| walk_term(a, bound, out)),
            Prop::Eq(a, b) => {
                walk_term(a, bound, out);
                walk_term(b, bound, out);
            }
            Prop::Not(q) => walk(q, bound, out),
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                walk(a, bound, out);
                walk(b, bound, out);
            }
            Prop::Forall(x, _, body) => {
                bound.push(x.clone());
                walk(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(p, &mut Vec::new(), &mut out);
    out
}

fn replace_in_term(t: &Term, from: &Term, to: &Term) -> Term {
    if t == from {
        return to.clone();
    }
    match t {
        Term::Succ(a) => Term::succ(replace_in_term(a, from, to)),
        Term::Cons(h, tl) => Term::cons(replace_in_term(h, from, to), replace_in_term(tl, from, to)),
        Term::Fn(f, args) => Term::Fn(*f, args.iter().map(|a| replace_in_term(a, from, to)).collect()),
        _ => t.clone(),
    }
}

/// Replace every occurrence of `from` by `to`, skipping scopes where a
/// variable of `from` is rebound.
pub fn replace_term(p: &Prop, from: &Term, to: &Term) -> Prop {
    match p {
        Prop::Atom(_) => p.clone(),
        Prop::App(h, args) => Prop::App(h.clone(), args.iter().map(|a| replace_in_term(a, from, to)).collect()),
        Prop::Eq(a, b) => Prop::Eq(replace_in_term(a, from, to), replace_in_term(b, from, to)),
        Prop::Not(q) => Prop::not(replace_term(q, from, to)),
        Prop::And(a, b) => Prop::and(replace_term(a, from, to), replace_term(b, from, to)),
        Prop::Or(a, b) => Prop::or(replace_term(a, from, to), replace_term(b, from, to)),
        Prop::Implies(a, b) => Prop::implies(replace_term(a, from, to), replace_term(b, from, to)),
        Prop::Forall(x, s, body) => {
            if from.contains_var(x) {
                return p.clone();
            }
            if to.contains_var(x) {
                let fv = body.free_vars();
                let y = fresh_name(x.as_str(), |n| {
                    let id = Ident::new(n);
                    fv.contains(&id) || to.contains_var(&id) || from.contains_var(&id)
                });
                let renamed = subst_prop(body, &vec![(x.clone(), Term::Var(y.clone()))]);
                return Prop::Forall(y, *s, Box::new(replace_term(&renamed, from, to)));
            }
            Prop::Forall(x.clone(), *s, Box::new(replace_term(body, from, to)))
        }
    }
}

/// Split `forall xs, A1 -> ... -> An -> C` into binders, premises, conclusion.
pub fn strip_quantifiers(p: &Prop) -> (Vec<(Ident, Sort)>, Vec<Prop>, Prop) {
    let mut vars = Vec::new();
    let mut cur = p;
    while let Prop::Forall(x, s, body) = cur {
        vars.push((x.clone(), *s));
        cur = body;
    }
    let mut premises = Vec::new();
    while let Prop::Implies(a, b) = cur {
        premises.push((**a).clone());
        cur = b;
    }
    (vars, premises, cur.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse::{parse_prop, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn p(s: &str) -> Prop {
        parse_prop(s).unwrap()
    }

    #[test]
    fn defining_equations() {
        assert_eq!(normalize_term(&t("plus 2 3")), Term::num(5));
        assert_eq!(normalize_term(&t("mult 2 3")), Term::num(6));
        assert_eq!(normalize_term(&t("length (cons 1 (cons 2 nil))")), Term::num(2));
        assert_eq!(
            normalize_term(&t("append (cons 1 nil) (cons 2 nil)")),
            t("cons 1 (cons 2 nil)")
        );
        assert_eq!(normalize_term(&t("plus (S n) m")), t("S (plus n m)"));
        assert_eq!(normalize_term(&t("plus n 0")), t("plus n 0"));
        assert_eq!(normalize_term(&t("mult (S n) 0")), t("mult n 0"));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&p("forall n : nat, eq n n"), &p("forall m : nat, eq m m")));
        assert!(!alpha_eq(&p("forall n : nat, eq n m"), &p("forall m : nat, eq m m")));
        assert!(!alpha_eq(&p("forall n : nat, eq n n"), &p("forall n : list, eq n n")));
        assert!(alpha_eq(
            &p("forall a : nat, forall b : nat, eq a b"),
            &p("forall b : nat, forall a : nat, eq b a")
        ));
    }

    #[test]
    fn substitution_avoids_capture() {
        let q = p("forall m : nat, eq n m");
        let r = subst_prop(&q, &vec![(Ident::new("n"), Term::var("m"))]);
        assert!(alpha_eq(&r, &p("forall k : nat, eq m k")));
        assert_eq!(r.free_vars(), vec![Ident::new("m")]);
    }

    #[test]
    fn matching_binds_metas() {
        let pat = p("eq (plus n 0) n");
        let tgt = p("eq (plus (S k) 0) (S k)");
        let mut s = Vec::new();
        assert!(match_prop(&pat, &tgt, &[Ident::new("n")], &mut s));
        assert_eq!(s, vec![(Ident::new("n"), t("S k"))]);

        let mut s = Vec::new();
        assert!(!match_prop(&pat, &p("eq (plus k 0) j"), &[Ident::new("n")], &mut s));
    }

    #[test]
    fn metas_do_not_capture_bound_variables() {
        let pat = p("forall m : nat, eq x m");
        let mut s = Vec::new();
        assert!(!match_prop(
            &pat,
            &p("forall m : nat, eq m m"),
            &[Ident::new("x")],
            &mut s
        ));
    }

    #[test]
    fn replace_respects_shadowing() {
        let q = p("and (eq n 0) (forall n : nat, eq n 0)");
        let r = replace_term(&q, &t("n"), &t("3"));
        assert_eq!(r, p("and (eq 3 0) (forall n : nat, eq n 0)"));
    }
}

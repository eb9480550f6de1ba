//! The tactic engine: each tactic rewrites the first open obligation into
//! zero or more new obligations.

use thiserror::Error;

use super::env::{obligation_vars, typecheck, Env};
use super::logic::*;
use super::print::tokenize;
use super::syntax::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TacticError {
    #[error("tactic not applicable: {0}")]
    NotApplicable(String),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(Ident),
    #[error("no open obligations")]
    NoObligations,
}

type TResult<T> = Result<T, TacticError>;

fn not_applicable<T>(msg: impl Into<String>) -> TResult<T> {
    Err(TacticError::NotApplicable(msg.into()))
}

/// Run `cmd` on the first obligation of `state`. Children inherit the
/// parent history extended with `cmd`; other obligations are untouched.
pub fn apply_tactic(env: &Env, state: &ProofState, cmd: &ProofCommand) -> TResult<ProofState> {
    let (first, rest) = state.obligations.split_first().ok_or(TacticError::NoObligations)?;
    let children = run_command(env, &first.obligation, cmd)?;
    let mut history = first.history.clone();
    history.push(cmd.clone());
    let mut obligations: Vec<OpenObligation> = children
        .into_iter()
        .map(|obligation| OpenObligation {
            obligation,
            history: history.clone(),
        })
        .collect();
    obligations.extend(rest.iter().cloned());
    Ok(ProofState { obligations })
}

/// The obligations `cmd` turns `o` into.
pub fn run_command(env: &Env, o: &Obligation, cmd: &ProofCommand) -> TResult<Vec<Obligation>> {
    match cmd.tactic {
        TacticName::Base(t) => run_base(env, o, t, &cmd.arg),
        TacticName::Try(t) => match run_base(env, o, t, &cmd.arg) {
            Ok(children) => Ok(children),
            Err(_) => Ok(vec![o.clone()]),
        },
    }
}

/// Classify a word from a script as a hypothesis, lemma, or goal token.
pub fn resolve_word(env: &Env, o: &Obligation, word: &str) -> Argument {
    if o.uses_name(word) {
        Argument::HypIdent(Ident::new(word))
    } else if env.lemma(word).is_some() {
        Argument::LemmaIdent(Ident::new(word))
    } else {
        Argument::GoalToken(word.to_owned())
    }
}

fn run_base(env: &Env, o: &Obligation, t: BaseTactic, arg: &Argument) -> TResult<Vec<Obligation>> {
    check_argument(env, o, t, arg)?;
    match t {
        BaseTactic::Intro => intro(o).map(|o| vec![o]),
        BaseTactic::Apply => apply(o, &fact(env, o, arg)?),
        BaseTactic::Rewrite => rewrite(o, &fact(env, o, arg)?),
        BaseTactic::Unfold => unfold(env, o, arg),
        BaseTactic::Destruct => destruct(o, arg),
        BaseTactic::Induction => induction(o, arg),
        BaseTactic::Reflexivity => reflexivity(o),
        BaseTactic::Assumption => assumption(o),
        BaseTactic::Split => match &o.goal {
            Prop::And(a, b) => Ok(vec![
                Obligation::new(o.hyps.clone(), (**a).clone()),
                Obligation::new(o.hyps.clone(), (**b).clone()),
            ]),
            _ => not_applicable("split needs a conjunction"),
        },
        BaseTactic::Left | BaseTactic::Right => match &o.goal {
            Prop::Or(a, b) => {
                let side = if t == BaseTactic::Left { a } else { b };
                Ok(vec![Obligation::new(o.hyps.clone(), (**side).clone())])
            }
            _ => not_applicable("needs a disjunction"),
        },
        BaseTactic::Simpl => Ok(vec![Obligation::new(o.hyps.clone(), normalize_prop(&o.goal))]),
        BaseTactic::Easy => reflexivity(o).or_else(|_| assumption(o)),
        BaseTactic::Assert => {
            let Argument::Expr(p) = arg else { unreachable!() };
            let h = fresh_hyp_name(|n| o.uses_name(n));
            let mut hyps = o.hyps.clone();
            hyps.push(Hypothesis {
                id: h,
                body: HypBody::Prop(p.clone()),
            });
            Ok(vec![
                Obligation::new(o.hyps.clone(), p.clone()),
                Obligation::new(hyps, o.goal.clone()),
            ])
        }
    }
}

fn check_argument(env: &Env, o: &Obligation, t: BaseTactic, arg: &Argument) -> TResult<()> {
    use BaseTactic::*;
    let kind_ok = match (t, arg) {
        (Apply | Rewrite, Argument::HypIdent(_) | Argument::LemmaIdent(_)) => true,
        (Unfold, Argument::GoalToken(_)) => true,
        (Destruct | Induction, Argument::HypIdent(_) | Argument::GoalToken(_)) => true,
        (Assert, Argument::Expr(_)) => true,
        (_, Argument::None) => !t.takes_argument(),
        _ => false,
    };
    if !kind_ok {
        return Err(TacticError::BadArgument(format!(
            "{} does not take {:?}",
            t.name(),
            arg.kind()
        )));
    }
    match arg {
        Argument::GoalToken(tok) if !tokenize(&o.goal).contains(tok) => {
            Err(TacticError::BadArgument(format!("`{tok}` is not a goal token")))
        }
        Argument::HypIdent(h) if !o.uses_name(h.as_str()) => {
            Err(TacticError::BadArgument(format!("no hypothesis `{h}`")))
        }
        Argument::LemmaIdent(l) if env.lemma(l.as_str()).is_none() => Err(TacticError::UnknownLemma(l.clone())),
        Argument::Expr(p) => {
            typecheck(env, p, &mut obligation_vars(o)).map_err(|e| TacticError::BadArgument(e.to_string()))
        }
        _ => Ok(()),
    }
}

/// The proposition named by a hypothesis or lemma argument.
fn fact(env: &Env, o: &Obligation, arg: &Argument) -> TResult<Prop> {
    match arg {
        Argument::HypIdent(h) => o
            .hyp(h.as_str())
            .and_then(Hypothesis::as_prop)
            .cloned()
            .ok_or_else(|| TacticError::BadArgument(format!("`{h}` is a variable"))),
        Argument::LemmaIdent(l) => env
            .lemma(l.as_str())
            .cloned()
            .ok_or_else(|| TacticError::UnknownLemma(l.clone())),
        _ => unreachable!("checked by check_argument"),
    }
}

fn intro(o: &Obligation) -> TResult<Obligation> {
    let mut hyps = o.hyps.clone();
    match &o.goal {
        Prop::Implies(a, b) => {
            hyps.push(Hypothesis {
                id: fresh_hyp_name(|n| o.uses_name(n)),
                body: HypBody::Prop((**a).clone()),
            });
            Ok(Obligation::new(hyps, (**b).clone()))
        }
        Prop::Forall(x, s, body) => {
            let (y, body) = freshen_binder(o, x, body);
            hyps.push(Hypothesis {
                id: y,
                body: HypBody::Var(*s),
            });
            Ok(Obligation::new(hyps, body))
        }
        _ => not_applicable("nothing to introduce"),
    }
}

fn freshen_binder(o: &Obligation, x: &Ident, body: &Prop) -> (Ident, Prop) {
    if !o.uses_name(x.as_str()) {
        return (x.clone(), body.clone());
    }
    let fv = body.free_vars();
    let y = fresh_name(x.as_str(), |n| o.uses_name(n) || fv.iter().any(|v| v.as_str() == n));
    let body = subst_prop(body, &vec![(x.clone(), Term::Var(y.clone()))]);
    (y, body)
}

/// Metavariables of `metas` that occur in `props` but are not bound by `s`.
fn unassigned(metas: &[Ident], props: &[&Prop], s: &Subst) -> bool {
    metas
        .iter()
        .any(|m| props.iter().any(|p| p.mentions_var(m)) && !s.iter().any(|(v, _)| v == m))
}

fn apply(o: &Obligation, f: &Prop) -> TResult<Vec<Obligation>> {
    let (vars, premises, concl) = strip_quantifiers(f);
    let metas: Vec<Ident> = vars.into_iter().map(|(v, _)| v).collect();
    for used in (0..=premises.len()).rev() {
        let target = premises[used..]
            .iter()
            .rev()
            .fold(concl.clone(), |acc, p| Prop::implies(p.clone(), acc));
        let mut s = Subst::new();
        if !match_prop(&target, &o.goal, &metas, &mut s) {
            continue;
        }
        let needed: Vec<&Prop> = premises[..used].iter().collect();
        if unassigned(&metas, &needed, &s) {
            return not_applicable("cannot infer all instances");
        }
        return Ok(premises[..used]
            .iter()
            .map(|p| Obligation::new(o.hyps.clone(), subst_prop(p, &s)))
            .collect());
    }
    not_applicable("conclusion does not match the goal")
}

fn rewrite(o: &Obligation, f: &Prop) -> TResult<Vec<Obligation>> {
    let (vars, premises, concl) = strip_quantifiers(f);
    let Prop::Eq(lhs, rhs) = &concl else {
        return not_applicable("not an equation");
    };
    let metas: Vec<Ident> = vars.into_iter().map(|(v, _)| v).collect();
    let rhs_prop = Prop::Eq(rhs.clone(), rhs.clone());
    let mut needed: Vec<&Prop> = premises.iter().collect();
    needed.push(&rhs_prop);
    for (sub, bound) in subterms(&o.goal) {
        let mut s = Subst::new();
        if !match_term(lhs, &sub, &metas, &bound, &mut s) || unassigned(&metas, &needed, &s) {
            continue;
        }
        let from = subst_term(lhs, &s);
        let to = subst_term(rhs, &s);
        let goal = replace_term(&o.goal, &from, &to);
        if goal == o.goal {
            continue;
        }
        let mut out: Vec<Obligation> = premises
            .iter()
            .map(|p| Obligation::new(o.hyps.clone(), subst_prop(p, &s)))
            .collect();
        out.push(Obligation::new(o.hyps.clone(), goal));
        return Ok(out);
    }
    not_applicable("no subterm matches the left-hand side")
}

fn unfold_not(p: &Prop) -> Prop {
    match p {
        Prop::Not(q) => Prop::implies(unfold_not(q), Prop::falsity()),
        Prop::And(a, b) => Prop::and(unfold_not(a), unfold_not(b)),
        Prop::Or(a, b) => Prop::or(unfold_not(a), unfold_not(b)),
        Prop::Implies(a, b) => Prop::implies(unfold_not(a), unfold_not(b)),
        Prop::Forall(x, s, b) => Prop::Forall(x.clone(), *s, Box::new(unfold_not(b))),
        _ => p.clone(),
    }
}

fn unfold_def(env: &Env, name: &str, p: &Prop) -> Prop {
    let rec = |q: &Prop| unfold_def(env, name, q);
    match p {
        Prop::Atom(a) if a.as_str() == name => env
            .definition(name)
            .and_then(|d| d.instantiate(&[]))
            .unwrap_or_else(|| p.clone()),
        Prop::App(h, args) if h.as_str() == name => env
            .definition(name)
            .and_then(|d| d.instantiate(args))
            .unwrap_or_else(|| p.clone()),
        Prop::Not(q) => Prop::not(rec(q)),
        Prop::And(a, b) => Prop::and(rec(a), rec(b)),
        Prop::Or(a, b) => Prop::or(rec(a), rec(b)),
        Prop::Implies(a, b) => Prop::implies(rec(a), rec(b)),
        Prop::Forall(x, s, b) => Prop::Forall(x.clone(), *s, Box::new(rec(b))),
        _ => p.clone(),
    }
}

fn unfold(env: &Env, o: &Obligation, arg: &Argument) -> TResult<Vec<Obligation>> {
    let Argument::GoalToken(tok) = arg else { unreachable!() };
    let goal = if tok == "not" {
        unfold_not(&o.goal)
    } else {
        if env.definition(tok).is_none() {
            return not_applicable(format!("`{tok}` is not a definition"));
        }
        unfold_def(env, tok, &o.goal)
    };
    if goal == o.goal {
        return not_applicable("nothing to unfold");
    }
    Ok(vec![Obligation::new(o.hyps.clone(), goal)])
}

/// Introduce leading binders until `name` has been introduced. Returns the
/// new obligation and the name under which the variable now lives.
fn intro_until(o: &Obligation, name: &str) -> TResult<(Obligation, Ident)> {
    let mut cur = o.clone();
    loop {
        match &cur.goal {
            Prop::Forall(x, ..) => {
                let hit = x.as_str() == name;
                cur = intro(&cur)?;
                if hit {
                    let id = cur.hyps.last().expect("intro adds a hypothesis").id.clone();
                    return Ok((cur, id));
                }
            }
            Prop::Implies(..) => cur = intro(&cur)?,
            _ => return not_applicable(format!("`{name}` is not a quantified variable of the goal")),
        }
    }
}

/// Substitute `x := t` in every hypothesis and in the goal.
fn subst_everywhere(hyps: &[Hypothesis], goal: &Prop, x: &Ident, t: &Term) -> (Vec<Hypothesis>, Prop) {
    let s = vec![(x.clone(), t.clone())];
    let hyps = hyps
        .iter()
        .map(|h| match &h.body {
            HypBody::Prop(p) => Hypothesis {
                id: h.id.clone(),
                body: HypBody::Prop(subst_prop(p, &s)),
            },
            HypBody::Var(_) => h.clone(),
        })
        .collect();
    (hyps, subst_prop(goal, &s))
}

fn fresh_var(o: &Obligation, base: &str) -> Ident {
    let fv = o.goal.free_vars();
    fresh_name(base, |n| o.uses_name(n) || fv.iter().any(|v| v.as_str() == n))
}

/// Constructor cases of a variable of sort `s`. Each case is the term to
/// substitute and any new variables it introduces.
fn constructor_cases(o: &Obligation, x: &Ident, s: Sort) -> Vec<(Term, Vec<(Ident, Sort)>)> {
    match s {
        Sort::Nat => vec![
            (Term::Zero, vec![]),
            (Term::succ(Term::Var(x.clone())), vec![(x.clone(), Sort::Nat)]),
        ],
        Sort::List => {
            let a = fresh_var(o, "x");
            vec![
                (Term::Nil, vec![]),
                (
                    Term::cons(Term::Var(a.clone()), Term::Var(x.clone())),
                    vec![(a, Sort::Nat), (x.clone(), Sort::List)],
                ),
            ]
        }
        Sort::Bool => vec![(Term::True, vec![]), (Term::False, vec![])],
    }
}

/// Replace the declaration of `x` by the declarations in `new_vars`.
fn redeclare(hyps: &[Hypothesis], x: &Ident, new_vars: &[(Ident, Sort)]) -> Vec<Hypothesis> {
    let mut out = Vec::with_capacity(hyps.len() + new_vars.len());
    for h in hyps {
        if &h.id == x {
            out.extend(new_vars.iter().map(|(v, s)| Hypothesis {
                id: v.clone(),
                body: HypBody::Var(*s),
            }));
        } else {
            out.push(h.clone());
        }
    }
    out
}

fn case_split(o: &Obligation, x: &Ident, s: Sort) -> Vec<Obligation> {
    constructor_cases(o, x, s)
        .into_iter()
        .map(|(t, new_vars)| {
            let (hyps, goal) = subst_everywhere(&o.hyps, &o.goal, x, &t);
            Obligation::new(redeclare(&hyps, x, &new_vars), goal)
        })
        .collect()
}

/// Resolve a destruct/induction argument to an obligation in which the
/// target is a hypothesis.
fn locate_target(o: &Obligation, arg: &Argument) -> TResult<(Obligation, Ident)> {
    match arg {
        Argument::HypIdent(h) => Ok((o.clone(), h.clone())),
        Argument::GoalToken(tok) => intro_until(o, tok),
        _ => unreachable!(),
    }
}

fn destruct(o: &Obligation, arg: &Argument) -> TResult<Vec<Obligation>> {
    let (o, h) = locate_target(o, arg)?;
    let hyp = o.hyp(h.as_str()).expect("target exists").clone();
    match &hyp.body {
        HypBody::Var(s) => Ok(case_split(&o, &h, *s)),
        HypBody::Prop(Prop::And(a, b)) => {
            let mut hyps: Vec<Hypothesis> = o.hyps.iter().filter(|x| x.id != h).cloned().collect();
            for part in [a, b] {
                let id = fresh_hyp_name(|n| hyps.iter().any(|x| x.id.as_str() == n));
                hyps.push(Hypothesis {
                    id,
                    body: HypBody::Prop((**part).clone()),
                });
            }
            Ok(vec![Obligation::new(hyps, o.goal.clone())])
        }
        HypBody::Prop(Prop::Or(a, b)) => Ok([a, b]
            .into_iter()
            .map(|part| {
                let hyps = o
                    .hyps
                    .iter()
                    .map(|x| {
                        if x.id == h {
                            Hypothesis {
                                id: h.clone(),
                                body: HypBody::Prop((**part).clone()),
                            }
                        } else {
                            x.clone()
                        }
                    })
                    .collect();
                Obligation::new(hyps, o.goal.clone())
            })
            .collect()),
        HypBody::Prop(_) => not_applicable(format!("cannot destruct `{h}`")),
    }
}

fn induction(o: &Obligation, arg: &Argument) -> TResult<Vec<Obligation>> {
    let (o, x) = locate_target(o, arg)?;
    let Some(sort) = o.var_sort(&x) else {
        return not_applicable(format!("`{x}` is not a variable"));
    };
    if sort == Sort::Bool {
        return Ok(case_split(&o, &x, sort));
    }
    // Hypotheses mentioning x become premises of the motive, then are
    // re-introduced under their old names in every case.
    let (reverted, kept): (Vec<Hypothesis>, Vec<Hypothesis>) = o
        .hyps
        .iter()
        .cloned()
        .partition(|h| h.as_prop().is_some_and(|p| p.mentions_var(&x)));
    let premises: Vec<Prop> = reverted.iter().map(|h| h.as_prop().unwrap().clone()).collect();
    let motive = premises
        .iter()
        .rev()
        .fold(o.goal.clone(), |acc, p| Prop::implies(p.clone(), acc));
    let at = |t: &Term, p: &Prop| subst_prop(p, &vec![(x.clone(), t.clone())]);
    let ih = fresh_name(&format!("IH{x}"), |n| o.uses_name(n));
    let mut out = Vec::new();
    for (t, new_vars) in constructor_cases(&o, &x, sort) {
        let mut hyps = redeclare(&kept, &x, &new_vars);
        if !new_vars.is_empty() {
            hyps.push(Hypothesis {
                id: ih.clone(),
                body: HypBody::Prop(motive.clone()),
            });
        }
        for h in &reverted {
            hyps.push(Hypothesis {
                id: h.id.clone(),
                body: HypBody::Prop(at(&t, h.as_prop().unwrap())),
            });
        }
        out.push(Obligation::new(hyps, at(&t, &o.goal)));
    }
    Ok(out)
}

fn reflexivity(o: &Obligation) -> TResult<Vec<Obligation>> {
    match &o.goal {
        Prop::Eq(a, b) if normalize_term(a) == normalize_term(b) => Ok(vec![]),
        Prop::Eq(..) => not_applicable("sides differ"),
        _ => not_applicable("goal is not an equation"),
    }
}

fn assumption(o: &Obligation) -> TResult<Vec<Obligation>> {
    if o.hyps.iter().any(|h| h.as_prop().is_some_and(|p| alpha_eq(p, &o.goal))) {
        Ok(vec![])
    } else {
        not_applicable("no matching hypothesis")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::env::Definition;
    use crate::kernel::parse::parse_prop;

    fn p(s: &str) -> Prop {
        parse_prop(s).unwrap()
    }

    fn cmd(t: BaseTactic, arg: Argument) -> ProofCommand {
        ProofCommand::new(t, arg)
    }

    fn bare(t: BaseTactic) -> ProofCommand {
        ProofCommand::bare(t)
    }

    fn hyp(n: &str) -> Argument {
        Argument::HypIdent(Ident::new(n))
    }

    fn tok(n: &str) -> Argument {
        Argument::GoalToken(n.into())
    }

    fn run_all(env: &Env, goal: &str, cmds: &[ProofCommand]) -> ProofState {
        let mut st = ProofState::initial(p(goal));
        for c in cmds {
            st = apply_tactic(env, &st, c).unwrap_or_else(|e| panic!("{c}: {e}\n{st:?}"));
        }
        st
    }

    #[test]
    fn intro_names_hypotheses_in_order() {
        let st = run_all(
            &Env::default(),
            "impl A (impl B A)",
            &[bare(BaseTactic::Intro), bare(BaseTactic::Intro)],
        );
        let o = &st.obligations[0].obligation;
        assert_eq!(o.hyps[0].id.as_str(), "H0");
        assert_eq!(o.hyps[1].id.as_str(), "H1");
        assert_eq!(st.obligations[0].history.len(), 2);
        let done = apply_tactic(&Env::default(), &st, &bare(BaseTactic::Assumption)).unwrap();
        assert!(done.is_complete());
    }

    #[test]
    fn induction_on_plus_zero() {
        let env = Env::default();
        let st = run_all(
            &env,
            "forall n : nat, eq (plus n 0) n",
            &[cmd(BaseTactic::Induction, tok("n"))],
        );
        assert_eq!(st.len(), 2);
        assert_eq!(st.obligations[0].obligation.goal, p("eq (plus 0 0) 0"));
        let step = &st.obligations[1].obligation;
        assert_eq!(step.goal, p("eq (plus (S n) 0) (S n)"));
        assert_eq!(step.hyp("IHn").unwrap().as_prop(), Some(&p("eq (plus n 0) n")));
        let st = apply_tactic(&env, &st, &bare(BaseTactic::Reflexivity)).unwrap();
        let st = apply_tactic(&env, &st, &bare(BaseTactic::Simpl)).unwrap();
        assert_eq!(st.obligations[0].obligation.goal, p("eq (S (plus n 0)) (S n)"));
        let st = apply_tactic(&env, &st, &cmd(BaseTactic::Rewrite, hyp("IHn"))).unwrap();
        let st = apply_tactic(&env, &st, &bare(BaseTactic::Reflexivity)).unwrap();
        assert!(st.is_complete());
    }

    #[test]
    fn list_induction_introduces_head() {
        let st = run_all(
            &Env::default(),
            "forall l : list, eq (append l nil) l",
            &[cmd(BaseTactic::Induction, tok("l"))],
        );
        let step = &st.obligations[1].obligation;
        assert_eq!(step.goal, p("eq (append (cons x l) nil) (cons x l)"));
        assert_eq!(step.var_sort(&Ident::new("x")), Some(Sort::Nat));
    }

    #[test]
    fn apply_lemma_with_premises() {
        let env = Env {
            definitions: vec![],
            lemmas: vec![(Ident::new("mp"), p("forall n : nat, impl (P n) (Q n)"))],
        };
        let st = run_all(
            &env,
            "Q 3",
            &[cmd(BaseTactic::Apply, Argument::LemmaIdent(Ident::new("mp")))],
        );
        assert_eq!(st.obligations[0].obligation.goal, p("P 3"));
    }

    #[test]
    fn apply_with_uninferable_meta_fails() {
        let env = Env {
            definitions: vec![],
            lemmas: vec![(Ident::new("tr"), p("forall m : nat, impl (P m) R"))],
        };
        let err = apply_tactic(
            &env,
            &ProofState::initial(p("R")),
            &cmd(BaseTactic::Apply, Argument::LemmaIdent(Ident::new("tr"))),
        )
        .unwrap_err();
        assert!(matches!(err, TacticError::NotApplicable(_)));
    }

    #[test]
    fn rewrite_puts_side_conditions_first() {
        let env = Env {
            definitions: vec![],
            lemmas: vec![(Ident::new("c"), p("impl A (eq 1 2)"))],
        };
        let st = run_all(
            &env,
            "eq (plus 1 1) 2",
            &[cmd(BaseTactic::Rewrite, Argument::LemmaIdent(Ident::new("c")))],
        );
        assert_eq!(st.obligations[0].obligation.goal, p("A"));
        assert_eq!(st.obligations[1].obligation.goal, p("eq (plus 2 2) 3"));
    }

    #[test]
    fn unfold_definitions_and_not() {
        let env = Env {
            definitions: vec![Definition {
                name: Ident::new("dbl"),
                params: vec![(Ident::new("n"), Sort::Nat)],
                body: p("eq (plus n n) (mult 2 n)"),
            }],
            lemmas: vec![],
        };
        let st = run_all(&env, "dbl 3", &[cmd(BaseTactic::Unfold, tok("dbl"))]);
        assert_eq!(st.obligations[0].obligation.goal, p("eq (plus 3 3) (mult 2 3)"));
        let st = run_all(&env, "not A", &[cmd(BaseTactic::Unfold, tok("not"))]);
        assert_eq!(st.obligations[0].obligation.goal, p("impl A False"));
        let err = apply_tactic(&env, &ProofState::initial(p("A")), &cmd(BaseTactic::Unfold, tok("dbl"))).unwrap_err();
        assert!(matches!(err, TacticError::BadArgument(_)));
    }

    #[test]
    fn destruct_conjunction_and_disjunction() {
        let env = Env::default();
        let st = run_all(
            &env,
            "impl (and A B) B",
            &[bare(BaseTactic::Intro), cmd(BaseTactic::Destruct, hyp("H0"))],
        );
        let o = &st.obligations[0].obligation;
        assert_eq!(o.hyps.len(), 2);
        assert!(apply_tactic(&env, &st, &bare(BaseTactic::Assumption))
            .unwrap()
            .is_complete());
        let st = run_all(
            &env,
            "impl (or A B) (or B A)",
            &[bare(BaseTactic::Intro), cmd(BaseTactic::Destruct, hyp("H0"))],
        );
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn try_leaves_state_but_extends_history() {
        let st = run_all(
            &Env::default(),
            "A",
            &[ProofCommand::bare(TacticName::Try(BaseTactic::Easy))],
        );
        assert_eq!(st.len(), 1);
        assert_eq!(st.obligations[0].obligation.goal, p("A"));
        assert_eq!(st.obligations[0].history.len(), 1);
    }

    #[test]
    fn argument_kinds_are_checked() {
        let err = apply_tactic(
            &Env::default(),
            &ProofState::initial(p("A")),
            &cmd(BaseTactic::Intro, tok("A")),
        )
        .unwrap_err();
        assert!(matches!(err, TacticError::BadArgument(_)));
        let err = apply_tactic(
            &Env::default(),
            &ProofState::initial(p("A")),
            &cmd(BaseTactic::Apply, Argument::LemmaIdent(Ident::new("nope"))),
        )
        .unwrap_err();
        assert_eq!(err, TacticError::UnknownLemma(Ident::new("nope")));
    }

    #[test]
    fn assert_orders_new_fact_first() {
        let st = run_all(&Env::default(), "B", &[cmd(BaseTactic::Assert, Argument::Expr(p("A")))]);
        assert_eq!(st.obligations[0].obligation.goal, p("A"));
        assert_eq!(st.obligations[1].obligation.hyp("H0").unwrap().as_prop(), Some(&p("A")));
    }

    #[test]
    fn induction_reverts_dependent_hypotheses() {
        let st = run_all(
            &Env::default(),
            "forall n : nat, impl (P n) (Q n)",
            &[
                bare(BaseTactic::Intro),
                bare(BaseTactic::Intro),
                cmd(BaseTactic::Induction, hyp("n")),
            ],
        );
        let step = &st.obligations[1].obligation;
        assert_eq!(step.hyp("IHn").unwrap().as_prop(), Some(&p("impl (P n) (Q n)")));
        assert_eq!(step.hyp("H0").unwrap().as_prop(), Some(&p("P (S n)")));
        assert_eq!(
            st.obligations[0].obligation.hyp("H0").unwrap().as_prop(),
            Some(&p("P 0"))
        );
    }
}

//! Test-only oracles and generators, written independently of the library's
//! own comparison code.
#![allow(dead_code)]

use proptest::prelude::*;
use tacsearch::kernel::{Func, HypBody, Hypothesis, Obligation, OpenObligation, ProofState, Prop, Sort, Term};
use tacsearch::Ident;

fn term_nf(t: &Term, bound: &[String], out: &mut String) {
    match t {
        Term::Var(v) => match bound.iter().rposition(|b| b == v.as_str()) {
            Some(i) => out.push_str(&format!("#{}", bound.len() - 1 - i)),
            None => out.push_str(&format!("${}", v.as_str())),
        },
        Term::Zero => out.push('0'),
        Term::Succ(a) => {
            out.push_str("S(");
            term_nf(a, bound, out);
            out.push(')');
        }
        Term::Nil => out.push_str("nil"),
        Term::Cons(a, b) => {
            out.push_str("cons(");
            term_nf(a, bound, out);
            out.push(',');
            term_nf(b, bound, out);
            out.push(')');
        }
        Term::True => out.push_str("true"),
        Term::False => out.push_str("false"),
        Term::Fn(f, args) => {
            out.push_str(&format!("{f:?}("));
            for a in args {
                term_nf(a, bound, out);
                out.push(',');
            }
            out.push(')');
        }
    }
}

fn prop_nf(p: &Prop, bound: &mut Vec<String>, out: &mut String) {
    match p {
        Prop::Atom(a) => out.push_str(&format!("@{}", a.as_str())),
        Prop::App(f, args) => {
            out.push_str(&format!("{}(", f.as_str()));
            for a in args {
                term_nf(a, bound, out);
                out.push(',');
            }
            out.push(')');
        }
        Prop::Eq(a, b) => {
            out.push_str("eq(");
            term_nf(a, bound, out);
            out.push(',');
            term_nf(b, bound, out);
            out.push(')');
        }
        Prop::Not(a) => {
            out.push_str("not(");
            prop_nf(a, bound, out);
            out.push(')');
        }
        Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
            let tag = match p {
                Prop::And(..) => "and",
                Prop::Or(..) => "or",
                _ => "impl",
            };
            out.push_str(tag);
            out.push('(');
            prop_nf(a, bound, out);
            out.push(',');
            prop_nf(b, bound, out);
            out.push(')');
        }
        Prop::Forall(x, s, body) => {
            out.push_str(&format!("all:{s:?}("));
            bound.push(x.as_str().to_owned());
            prop_nf(body, bound, out);
            bound.pop();
            out.push(')');
        }
    }
}

/// Bound variables replaced by binder distance, free ones kept by name.
pub fn normal_form(p: &Prop) -> String {
    let mut s = String::new();
    prop_nf(p, &mut Vec::new(), &mut s);
    s
}

fn hyp_key(h: &Hypothesis) -> String {
    match &h.body {
        HypBody::Prop(p) => format!("P {}", normal_form(p)),
        HypBody::Var(s) => format!("V {} {s:?}", h.id.as_str()),
    }
}

/// Brute-force `o1 ≥o o2`.
pub fn oracle_obligation(o1: &Obligation, o2: &Obligation) -> bool {
    if normal_form(&o1.goal) != normal_form(&o2.goal) {
        return false;
    }
    let have: Vec<String> = o2.hyps.iter().map(hyp_key).collect();
    o1.hyps.iter().all(|h| have.contains(&hyp_key(h)))
}

/// Brute-force `s1 ≥ s2` by enumerating every pair.
pub fn oracle_state(s1: &ProofState, s2: &ProofState) -> bool {
    for o2 in &s2.obligations {
        let mut found = false;
        for o1 in &s1.obligations {
            if oracle_obligation(&o1.obligation, &o2.obligation) {
                found = true;
            }
        }
        if !found {
            return false;
        }
    }
    true
}

pub fn state(obs: Vec<Obligation>) -> ProofState {
    ProofState {
        obligations: obs
            .into_iter()
            .map(|obligation| OpenObligation {
                obligation,
                history: vec![],
            })
            .collect(),
    }
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        Just(Term::Nil),
        Just(Term::var("x")),
        Just(Term::var("y")),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::Succ(Box::new(t))),
            (inner.clone(), inner).prop_map(|(a, b)| Term::Fn(Func::Plus, vec![a, b])),
        ]
    })
}

/// Small propositions over atoms A..C and variables x, y; binders reuse
/// those names so alpha-equivalent variants are common.
pub fn prop_strategy() -> impl Strategy<Value = Prop> {
    let leaf = prop_oneof![
        Just(Prop::atom("A")),
        Just(Prop::atom("B")),
        Just(Prop::atom("C")),
        (term_strategy(), term_strategy()).prop_map(|(a, b)| Prop::Eq(a, b)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Prop::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Prop::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Prop::implies(a, b)),
            inner.clone().prop_map(Prop::not),
            (prop_oneof![Just("x"), Just("y"), Just("z")], inner).prop_map(|(v, b)| Prop::Forall(
                Ident::new(v),
                Sort::Nat,
                Box::new(b)
            )),
        ]
    })
}

pub fn obligation_strategy() -> impl Strategy<Value = Obligation> {
    (
        prop::collection::vec(prop_strategy(), 0..4),
        prop::bool::ANY,
        prop_strategy(),
    )
        .prop_map(|(hs, with_var, goal)| {
            let mut hyps: Vec<Hypothesis> = Vec::new();
            if with_var {
                hyps.push(Hypothesis::var("x", Sort::Nat));
            }
            hyps.extend(
                hs.into_iter()
                    .enumerate()
                    .map(|(i, p)| Hypothesis::prop(&format!("H{i}"), p)),
            );
            Obligation::new(hyps, goal)
        })
}

pub fn state_strategy() -> impl Strategy<Value = ProofState> {
    prop::collection::vec(obligation_strategy(), 0..4).prop_map(state)
}

/// A state at least as hard as `s`: every obligation loses a subset of its
/// hypotheses (relabelled), and extra obligations are appended.
pub fn harder_than(s: &ProofState, keep: &[bool], extra: Vec<Obligation>) -> ProofState {
    let mut k = keep.iter().cycle();
    let mut obs: Vec<Obligation> = s
        .obligations
        .iter()
        .map(|o| {
            let hyps = o
                .obligation
                .hyps
                .iter()
                .filter(|_| *k.next().unwrap())
                .enumerate()
                .map(|(i, h)| match &h.body {
                    HypBody::Prop(p) => Hypothesis::prop(&format!("K{i}"), p.clone()),
                    HypBody::Var(_) => h.clone(),
                })
                .collect();
            Obligation::new(hyps, o.obligation.goal.clone())
        })
        .collect();
    obs.extend(extra);
    state(obs)
}

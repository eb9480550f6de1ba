use std::fmt;

use serde::{Deserialize, Serialize};

/// An identifier over `[A-Za-z0-9_']`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ident(String);

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(Self::is_valid(&name), "invalid identifier {name:?}");
        Ident(name)
    }

    /// A name no parser can produce, for internal bookkeeping.
    pub(crate) fn internal(name: &str) -> Self {
        Ident(format!("#{name}"))
    }

    pub fn is_valid(name: &str) -> bool {
        !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sort {
    Nat,
    List,
    Bool,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Nat => "nat",
            Sort::List => "list",
            Sort::Bool => "bool",
        }
    }

    pub fn from_name(s: &str) -> Option<Sort> {
        match s {
            "nat" => Some(Sort::Nat),
            "list" => Some(Sort::List),
            "bool" => Some(Sort::Bool),
            _ => None,
        }
    }
}

/// Built-in function symbols with their defining equations (see `eval`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Func {
    Plus,
    Mult,
    Append,
    Length,
}

impl Func {
    pub const ALL: [Func; 4] = [Func::Plus, Func::Mult, Func::Append, Func::Length];

    pub fn name(self) -> &'static str {
        match self {
            Func::Plus => "plus",
            Func::Mult => "mult",
            Func::Append => "append",
            Func::Length => "length",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Length => 1,
            _ => 2,
        }
    }

    /// Argument sorts and result sort.
    pub fn signature(self) -> (&'static [Sort], Sort) {
        match self {
            Func::Plus | Func::Mult => (&[Sort::Nat, Sort::Nat], Sort::Nat),
            Func::Append => (&[Sort::List, Sort::List], Sort::List),
            Func::Length => (&[Sort::List], Sort::Nat),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(Ident),
    Zero,
    Succ(Box<Term>),
    Nil,
    Cons(Box<Term>, Box<Term>),
    True,
    False,
    Fn(Func, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Ident::new(name))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn cons(h: Term, t: Term) -> Term {
        Term::Cons(Box::new(h), Box::new(t))
    }

    pub fn num(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    pub fn app(f: Func, args: Vec<Term>) -> Term {
        debug_assert_eq!(f.arity(), args.len());
        Term::Fn(f, args)
    }

    /// `Some(n)` if the term is the numeral `S^n 0`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn contains_var(&self, v: &Ident) -> bool {
        match self {
            Term::Var(x) => x == v,
            Term::Zero | Term::Nil | Term::True | Term::False => false,
            Term::Succ(t) => t.contains_var(v),
            Term::Cons(a, b) => a.contains_var(v) || b.contains_var(v),
            Term::Fn(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn free_vars_into(&self, out: &mut Vec<Ident>) {
        match self {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Zero | Term::Nil | Term::True | Term::False => {}
            Term::Succ(t) => t.free_vars_into(out),
            Term::Cons(a, b) => {
                a.free_vars_into(out);
                b.free_vars_into(out);
            }
            Term::Fn(_, args) => args.iter().for_each(|a| a.free_vars_into(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Prop {
    Atom(Ident),
    App(Ident, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Forall(Ident, Sort, Box<Prop>),
}

impl Prop {
    pub fn atom(name: &str) -> Prop {
        Prop::Atom(Ident::new(name))
    }

    pub fn not(p: Prop) -> Prop {
        Prop::Not(Box::new(p))
    }

    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, s: Sort, body: Prop) -> Prop {
        Prop::Forall(Ident::new(v), s, Box::new(body))
    }

    pub fn falsity() -> Prop {
        Prop::atom("False")
    }

    pub fn free_vars(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        self.free_vars_rec(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_rec(&self, bound: &mut Vec<Ident>, out: &mut Vec<Ident>) {
        let push_term = |t: &Term, bound: &Vec<Ident>, out: &mut Vec<Ident>| {
            let mut vs = Vec::new();
            t.free_vars_into(&mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Prop::Atom(_) => {}
            Prop::App(_, args) => args.iter().for_each(|a| push_term(a, bound, out)),
            Prop::Eq(a, b) => {
                push_term(a, bound, out);
                push_term(b, bound, out);
            }
            Prop::Not(p) => p.free_vars_rec(bound, out),
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                a.free_vars_rec(bound, out);
                b.free_vars_rec(bound, out);
            }
            Prop::Forall(x, _, body) => {
                bound.push(x.clone());
                body.free_vars_rec(bound, out);
                bound.pop();
            }
        }
    }

    pub fn mentions_var(&self, v: &Ident) -> bool {
        self.free_vars().contains(v)
    }
}

/// What a hypothesis asserts: a proposition, or the declaration of a
/// hypothesis-scoped variable of some sort (`n : nat`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HypBody {
    Prop(Prop),
    Var(Sort),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypothesis {
    pub id: Ident,
    pub body: HypBody,
}

impl Hypothesis {
    pub fn prop(id: &str, p: Prop) -> Self {
        Hypothesis {
            id: Ident::new(id),
            body: HypBody::Prop(p),
        }
    }

    pub fn var(id: &str, s: Sort) -> Self {
        Hypothesis {
            id: Ident::new(id),
            body: HypBody::Var(s),
        }
    }

    pub fn as_prop(&self) -> Option<&Prop> {
        match &self.body {
            HypBody::Prop(p) => Some(p),
            HypBody::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Obligation {
    pub hyps: Vec<Hypothesis>,
    pub goal: Prop,
}

impl Obligation {
    pub fn new(hyps: Vec<Hypothesis>, goal: Prop) -> Self {
        debug_assert!(
            hyps.iter()
                .enumerate()
                .all(|(i, h)| hyps[..i].iter().all(|o| o.id != h.id)),
            "duplicate hypothesis id"
        );
        Obligation { hyps, goal }
    }

    pub fn hyp(&self, id: &str) -> Option<&Hypothesis> {
        self.hyps.iter().find(|h| h.id.as_str() == id)
    }

    pub fn var_sort(&self, id: &Ident) -> Option<Sort> {
        self.hyps.iter().find_map(|h| match &h.body {
            HypBody::Var(s) if &h.id == id => Some(*s),
            _ => None,
        })
    }

    pub fn uses_name(&self, name: &str) -> bool {
        self.hyps.iter().any(|h| h.id.as_str() == name)
    }
}

/// Base tactics of the kernel. `Try` variants of these are learned names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BaseTactic {
    Intro,
    Apply,
    Rewrite,
    Unfold,
    Destruct,
    Induction,
    Reflexivity,
    Assumption,
    Split,
    Left,
    Right,
    Simpl,
    Easy,
    Assert,
}

impl BaseTactic {
    pub const ALL: [BaseTactic; 14] = [
        BaseTactic::Intro,
        BaseTactic::Apply,
        BaseTactic::Rewrite,
        BaseTactic::Unfold,
        BaseTactic::Destruct,
        BaseTactic::Induction,
        BaseTactic::Reflexivity,
        BaseTactic::Assumption,
        BaseTactic::Split,
        BaseTactic::Left,
        BaseTactic::Right,
        BaseTactic::Simpl,
        BaseTactic::Easy,
        BaseTactic::Assert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseTactic::Intro => "intro",
            BaseTactic::Apply => "apply",
            BaseTactic::Rewrite => "rewrite",
            BaseTactic::Unfold => "unfold",
            BaseTactic::Destruct => "destruct",
            BaseTactic::Induction => "induction",
            BaseTactic::Reflexivity => "reflexivity",
            BaseTactic::Assumption => "assumption",
            BaseTactic::Split => "split",
            BaseTactic::Left => "left",
            BaseTactic::Right => "right",
            BaseTactic::Simpl => "simpl",
            BaseTactic::Easy => "easy",
            BaseTactic::Assert => "assert",
        }
    }

    pub fn from_name(s: &str) -> Option<BaseTactic> {
        BaseTactic::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Every tactic takes exactly zero or one argument.
    pub fn takes_argument(self) -> bool {
        matches!(
            self,
            BaseTactic::Apply
                | BaseTactic::Rewrite
                | BaseTactic::Unfold
                | BaseTactic::Destruct
                | BaseTactic::Induction
                | BaseTactic::Assert
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TacticName {
    Base(BaseTactic),
    /// `try t`, kept as its own learned tactic.
    Try(BaseTactic),
}

impl TacticName {
    pub fn base(self) -> BaseTactic {
        match self {
            TacticName::Base(b) | TacticName::Try(b) => b,
        }
    }

    pub fn takes_argument(self) -> bool {
        self.base().takes_argument()
    }

    pub fn parse(s: &str) -> Option<TacticName> {
        match s.strip_prefix("try_") {
            Some(rest) => BaseTactic::from_name(rest).map(TacticName::Try),
            None => BaseTactic::from_name(s).map(TacticName::Base),
        }
    }
}

impl fmt::Display for TacticName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TacticName::Base(b) => f.write_str(b.name()),
            TacticName::Try(b) => write!(f, "try_{}", b.name()),
        }
    }
}

impl From<BaseTactic> for TacticName {
    fn from(b: BaseTactic) -> Self {
        TacticName::Base(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Argument {
    None,
    GoalToken(String),
    HypIdent(Ident),
    LemmaIdent(Ident),
    /// A full proposition, as taken by `assert`. Never predicted.
    Expr(Prop),
}

impl Argument {
    pub fn kind(&self) -> ArgKind {
        match self {
            Argument::None => ArgKind::None,
            Argument::GoalToken(_) => ArgKind::GoalToken,
            Argument::HypIdent(_) => ArgKind::HypIdent,
            Argument::LemmaIdent(_) => ArgKind::LemmaIdent,
            Argument::Expr(_) => ArgKind::Expr,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Argument::None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArgKind {
    None,
    GoalToken,
    HypIdent,
    LemmaIdent,
    Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProofCommand {
    pub tactic: TacticName,
    pub arg: Argument,
}

impl ProofCommand {
    pub fn new(tactic: impl Into<TacticName>, arg: Argument) -> Self {
        ProofCommand {
            tactic: tactic.into(),
            arg,
        }
    }

    pub fn bare(tactic: impl Into<TacticName>) -> Self {
        ProofCommand::new(tactic, Argument::None)
    }
}

/// One open obligation together with the commands along its ancestor chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpenObligation {
    pub obligation: Obligation,
    pub history: Vec<ProofCommand>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProofState {
    pub obligations: Vec<OpenObligation>,
}

impl ProofState {
    pub fn initial(theorem: Prop) -> Self {
        ProofState {
            obligations: vec![OpenObligation {
                obligation: Obligation::new(Vec::new(), theorem),
                history: Vec::new(),
            }],
        }
    }

    pub fn is_complete(&self) -> bool {
        self.obligations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.obligations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obligations.is_empty()
    }

    pub fn first(&self) -> Option<&OpenObligation> {
        self.obligations.first()
    }
}

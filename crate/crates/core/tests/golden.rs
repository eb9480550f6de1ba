//! Outputs frozen from a first run. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

use tacsearch::kernel::{parse_prop, tokenize, Argument, BaseTactic};
use tacsearch::search::{search, to_dot, to_json, FixedSource, SearchConfig, SearchTree};
use tacsearch::{Env, Ident, ProofCommand};

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, want, "golden file {name} differs");
}

const PROPS: &[&str] = &[
    "impl A (and (or B A) A)",
    "forall n : nat, eq (plus n 0) n",
    "forall xs : list, eq (length (append xs nil)) (length xs)",
    "not (and P (not P))",
    "forall b : bool, or (eq b true) (eq b false)",
    "eq (mult (S (S 0)) (S 0)) (plus (S 0) (S 0))",
    "forall x : nat, forall y : nat, impl (eq x y) (eq (S x) (S y))",
    "both 1 (cons 0 nil)",
];

#[test]
fn tokenizer_output() {
    let mut out = String::new();
    for p in PROPS {
        let toks = tokenize(&parse_prop(p).unwrap());
        out.push_str(&format!("{p}\n  {}\n", toks.join(" ")));
    }
    check("tokens.txt", &out);
}

fn fixture_tree() -> SearchTree {
    let cmds = [
        BaseTactic::Simpl,
        BaseTactic::Intro,
        BaseTactic::Split,
        BaseTactic::Right,
        BaseTactic::Assumption,
        BaseTactic::Left,
    ]
    .map(ProofCommand::bare)
    .into_iter()
    .chain([ProofCommand::new(
        BaseTactic::Destruct,
        Argument::HypIdent(Ident::new("H0")),
    )])
    .collect();
    let cfg = SearchConfig {
        width: 5,
        depth: 6,
        budget: 64,
    };
    search(
        &parse_prop("impl A (and (or B A) A)").unwrap(),
        &Env::default(),
        &FixedSource(cmds),
        &cfg,
    )
    .tree
}

#[test]
fn fixture_search_dot() {
    check("fixture_tree.dot", &to_dot(&fixture_tree()));
}

#[test]
fn tree_json_round_trips() {
    let tree = fixture_tree();
    let back: SearchTree = serde_json::from_str(&to_json(&tree)).unwrap();
    assert_eq!(back, tree);
    assert_eq!(to_dot(&back), to_dot(&tree));
}

//! Theorem families. Each family produces a statement and one of a few
//! script styles; some depend on earlier theorems of the same file.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A theorem before naming: a stem for the name, statement text, script text.
#[derive(Clone, Debug)]
pub struct Draft {
    pub stem: &'static str,
    /// Identifies the statement so later theorems can depend on it.
    pub key: String,
    pub statement: String,
    pub script: String,
}

/// A draft that refers to earlier theorems by key. `{0}`, `{1}`, ... in the
/// script are replaced by the names of the theorems proving `needs[i]`.
pub struct Planned {
    pub needs: Vec<Draft>,
    pub draft: Draft,
}

const ATOMS: [&str; 8] = ["A", "B", "C", "D", "E", "P", "Q", "R"];
const NAT_VARS: [&str; 3] = ["n", "m", "k"];
const LIST_VARS: [&str; 3] = ["l", "xs", "ys"];

pub const DEFINITIONS: &str = "\
Definition both (a : nat) (b : nat) : Prop := and (eq a a) (eq b b).
Definition dbl (n : nat) : Prop := eq (plus n n) (mult 2 n).
Definition wrap (n : nat) : Prop := or (eq n n) False.
";

/// The zero-parameter definition of a file depends on its atom.
pub fn triv_definition(atom: &str) -> String {
    format!("Definition triv : Prop := impl {atom} {atom}.\n")
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("non-empty choice")
}

/// Pick a script style; `weights` pairs a relative weight with the text.
fn style(rng: &mut ChaCha8Rng, weights: &[(u32, String)]) -> String {
    let total: u32 = weights.iter().map(|(w, _)| w).sum();
    let mut x = rng.gen_range(0..total);
    for (w, s) in weights {
        if x < *w {
            return s.clone();
        }
        x -= w;
    }
    unreachable!()
}

fn atoms(rng: &mut ChaCha8Rng, k: usize) -> Vec<&'static str> {
    ATOMS.choose_multiple(rng, k).copied().collect()
}

fn draft(stem: &'static str, key: impl Into<String>, statement: String, script: String) -> Planned {
    Planned {
        needs: vec![],
        draft: Draft {
            stem,
            key: key.into(),
            statement,
            script,
        },
    }
}

fn num(rng: &mut ChaCha8Rng) -> u64 {
    rng.gen_range(0..6)
}

pub fn imp_refl(rng: &mut ChaCha8Rng) -> Planned {
    let x = atoms(rng, 1)[0];
    let s = style(
        rng,
        &[
            (6, "intro. assumption.".into()),
            (2, "intro. easy.".into()),
            (2, "intro; assumption.".into()),
        ],
    );
    draft("imp_refl", format!("imp_refl:{x}"), format!("impl {x} {x}"), s)
}

pub fn imp_weaken(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    let s = style(
        rng,
        &[
            (6, "intro. intro. assumption.".into()),
            (2, "intro. intro. easy.".into()),
        ],
    );
    draft("weaken", "", format!("impl {} (impl {} {})", v[0], v[1], v[0]), s)
}

pub fn and_elim(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    let out = if rng.gen_bool(0.5) { v[0] } else { v[1] };
    draft(
        "and_elim",
        "",
        format!("impl (and {} {}) {out}", v[0], v[1]),
        "intro. destruct H0. assumption.".into(),
    )
}

pub fn and_intro(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    let s = style(
        rng,
        &[
            (4, "intro. intro. split; assumption.".into()),
            (3, "intro. intro. split. assumption. assumption.".into()),
            (2, "intro. intro. now split.".into()),
        ],
    );
    draft(
        "and_intro",
        "",
        format!("impl {a} (impl {b} (and {a} {b}))", a = v[0], b = v[1]),
        s,
    )
}

pub fn or_intro(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    let left = rng.gen_bool(0.5);
    let (hyp, side) = if left { (v[0], "left") } else { (v[1], "right") };
    let s = style(
        rng,
        &[
            (3, format!("intro. {side}. assumption.")),
            (1, format!("intro. now {side}.")),
        ],
    );
    draft("or_intro", "", format!("impl {hyp} (or {} {})", v[0], v[1]), s)
}

fn or_comm_draft(a: &str, b: &str) -> Draft {
    Draft {
        stem: "or_comm",
        key: format!("or_comm:{a}:{b}"),
        statement: format!("impl (or {a} {b}) (or {b} {a})"),
        script: "intro. destruct H0. right. assumption. left. assumption.".into(),
    }
}

pub fn or_comm(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    Planned {
        needs: vec![],
        draft: or_comm_draft(v[0], v[1]),
    }
}

fn and_comm_draft(rng: &mut ChaCha8Rng, a: &str, b: &str) -> Draft {
    Draft {
        stem: "and_comm",
        key: format!("and_comm:{a}:{b}"),
        statement: format!("impl (and {a} {b}) (and {b} {a})"),
        script: style(
            rng,
            &[
                (3, "intro. destruct H0. split; assumption.".into()),
                (2, "intro. destruct H0. split. assumption. assumption.".into()),
            ],
        ),
    }
}

pub fn and_comm(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    Planned {
        needs: vec![],
        draft: and_comm_draft(rng, v[0], v[1]),
    }
}

pub fn modus_ponens(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 2);
    draft(
        "mp",
        "",
        format!("impl (impl {a} {b}) (impl {a} {b})", a = v[0], b = v[1]),
        "intro. intro. apply H0. assumption.".into(),
    )
}

pub fn imp_trans(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 3);
    draft(
        "imp_trans",
        "",
        format!(
            "impl (impl {a} {b}) (impl (impl {b} {c}) (impl {a} {c}))",
            a = v[0],
            b = v[1],
            c = v[2]
        ),
        "intro. intro. intro. apply H1. apply H0. assumption.".into(),
    )
}

pub fn double_neg(rng: &mut ChaCha8Rng) -> Planned {
    let x = atoms(rng, 1)[0];
    draft(
        "dneg",
        "",
        format!("impl {x} (not (not {x}))"),
        "unfold not. intro. intro. apply H1. assumption.".into(),
    )
}

pub fn not_unfold(rng: &mut ChaCha8Rng) -> Planned {
    let x = atoms(rng, 1)[0];
    draft(
        "not_imp",
        "",
        format!("impl (not {x}) (impl {x} False)"),
        "unfold not. intro. assumption.".into(),
    )
}

pub fn and_dup(rng: &mut ChaCha8Rng) -> Planned {
    let x = atoms(rng, 1)[0];
    let s = style(
        rng,
        &[
            (3, "intro. split; assumption.".into()),
            (1, format!("intro. assert ({x}) by assumption. split; assumption.")),
        ],
    );
    draft("and_dup", "", format!("impl {x} (and {x} {x})"), s)
}

pub fn plus_0_n(rng: &mut ChaCha8Rng) -> Planned {
    let n = *pick(rng, &NAT_VARS);
    let s = style(
        rng,
        &[
            (4, "intro. simpl. reflexivity.".into()),
            (2, "intro. reflexivity.".into()),
            (2, "intro. now simpl.".into()),
        ],
    );
    draft("plus_O_n", "", format!("forall {n} : nat, eq (plus 0 {n}) {n}"), s)
}

pub fn closed_arith(rng: &mut ChaCha8Rng) -> Planned {
    let (a, b) = (num(rng), num(rng));
    let stmt = match rng.gen_range(0..4) {
        0 => format!("eq (plus {a} {b}) {}", a + b),
        1 => format!("eq (mult {a} {b}) {}", a * b),
        2 => format!("eq (length (cons {a} (cons {b} nil))) 2"),
        _ => format!("eq (append (cons {a} nil) (cons {b} nil)) (cons {a} (cons {b} nil))"),
    };
    let s = style(rng, &[(3, "reflexivity.".into()), (2, "simpl. reflexivity.".into())]);
    draft("calc", "", stmt, s)
}

fn plus_n_0_draft(rng: &mut ChaCha8Rng) -> Draft {
    let n = *pick(rng, &NAT_VARS);
    Draft {
        stem: "plus_n_O",
        key: "plus_n_O".into(),
        statement: format!("forall {n} : nat, eq (plus {n} 0) {n}"),
        script: style(
            rng,
            &[
                (
                    5,
                    format!("induction {n}. reflexivity. simpl. rewrite IH{n}. reflexivity."),
                ),
                (
                    3,
                    format!("induction {n}; try reflexivity. simpl. rewrite IH{n}. reflexivity."),
                ),
                (
                    1,
                    format!("induction {n}; simpl. reflexivity. rewrite IH{n}. reflexivity."),
                ),
            ],
        ),
    }
}

pub fn plus_n_0(rng: &mut ChaCha8Rng) -> Planned {
    Planned {
        needs: vec![],
        draft: plus_n_0_draft(rng),
    }
}

fn app_nil_draft(rng: &mut ChaCha8Rng) -> Draft {
    let l = *pick(rng, &LIST_VARS);
    Draft {
        stem: "app_nil_r",
        key: "app_nil_r".into(),
        statement: format!("forall {l} : list, eq (append {l} nil) {l}"),
        script: style(
            rng,
            &[
                (
                    5,
                    format!("induction {l}. reflexivity. simpl. rewrite IH{l}. reflexivity."),
                ),
                (
                    2,
                    format!("induction {l}; try reflexivity. simpl. rewrite IH{l}. reflexivity."),
                ),
            ],
        ),
    }
}

pub fn app_nil(rng: &mut ChaCha8Rng) -> Planned {
    Planned {
        needs: vec![],
        draft: app_nil_draft(rng),
    }
}

fn plus_n_sm_draft() -> Draft {
    Draft {
        stem: "plus_n_Sm",
        key: "plus_n_Sm".into(),
        statement: "forall n : nat, forall m : nat, eq (plus n (S m)) (S (plus n m))".into(),
        script: "induction n. intro. reflexivity. intro. simpl. rewrite IHn. reflexivity.".into(),
    }
}

pub fn plus_n_sm(_rng: &mut ChaCha8Rng) -> Planned {
    Planned {
        needs: vec![],
        draft: plus_n_sm_draft(),
    }
}

pub fn length_append(rng: &mut ChaCha8Rng) -> Planned {
    let s = style(
        rng,
        &[
            (
                3,
                "induction l1. intro. reflexivity. intro. simpl. rewrite IHl1. reflexivity.".into(),
            ),
            (
                1,
                "induction l1. intro. reflexivity. intro. simpl. now rewrite IHl1.".into(),
            ),
        ],
    );
    draft(
        "app_length",
        "",
        "forall l1 : list, forall l2 : list, eq (length (append l1 l2)) (plus (length l1) (length l2))".into(),
        s,
    )
}

pub fn mult_n_0(rng: &mut ChaCha8Rng) -> Planned {
    let n = *pick(rng, &NAT_VARS);
    draft(
        "mult_n_O",
        "",
        format!("forall {n} : nat, eq (mult {n} 0) 0"),
        format!("induction {n}. reflexivity. simpl. assumption."),
    )
}

pub fn length_cons(rng: &mut ChaCha8Rng) -> Planned {
    let l = *pick(rng, &LIST_VARS);
    let k = num(rng);
    let s = style(
        rng,
        &[
            (1, "intro. reflexivity.".into()),
            (1, "intro. simpl. reflexivity.".into()),
        ],
    );
    draft(
        "length_cons",
        "",
        format!("forall {l} : list, eq (length (cons {k} {l})) (S (length {l}))"),
        s,
    )
}

pub fn bool_cases(_rng: &mut ChaCha8Rng) -> Planned {
    draft(
        "bool_cases",
        "",
        "forall b : bool, or (eq b true) (eq b false)".into(),
        "destruct b. left. reflexivity. right. reflexivity.".into(),
    )
}

pub fn rewrite_plus_n_0(rng: &mut ChaCha8Rng) -> Planned {
    let n = *pick(rng, &NAT_VARS);
    Planned {
        needs: vec![plus_n_0_draft(rng)],
        draft: Draft {
            stem: "plus_n_O_twice",
            key: String::new(),
            statement: format!("forall {n} : nat, eq (plus (plus {n} 0) 0) {n}"),
            script: "intro. rewrite {0}. rewrite {0}. reflexivity.".into(),
        },
    }
}

pub fn apply_plus_n_0(rng: &mut ChaCha8Rng) -> Planned {
    let n = *pick(rng, &NAT_VARS);
    let x = atoms(rng, 1)[0];
    let s = style(
        rng,
        &[
            (3, "intro. intro. apply {0}.".into()),
            (1, "intro. intro. rewrite {0}. reflexivity.".into()),
        ],
    );
    Planned {
        needs: vec![plus_n_0_draft(rng)],
        draft: Draft {
            stem: "plus_n_O_under",
            key: String::new(),
            statement: format!("forall {n} : nat, impl {x} (eq (plus {n} 0) {n})"),
            script: s,
        },
    }
}

pub fn rewrite_app_nil(rng: &mut ChaCha8Rng) -> Planned {
    let l = *pick(rng, &LIST_VARS);
    Planned {
        needs: vec![app_nil_draft(rng)],
        draft: Draft {
            stem: "length_app_nil",
            key: String::new(),
            statement: format!("forall {l} : list, eq (length (append {l} nil)) (length {l})"),
            script: "intro. rewrite {0}. reflexivity.".into(),
        },
    }
}

pub fn rewrite_plus_n_sm(_rng: &mut ChaCha8Rng) -> Planned {
    Planned {
        needs: vec![plus_n_sm_draft()],
        draft: Draft {
            stem: "plus_n_SSm",
            key: String::new(),
            statement: "forall n : nat, forall m : nat, eq (plus n (S (S m))) (S (S (plus n m)))".into(),
            script: "intro. intro. rewrite {0}. rewrite {0}. reflexivity.".into(),
        },
    }
}

pub fn apply_and_comm(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 3);
    Planned {
        needs: vec![and_comm_draft(rng, v[0], v[1])],
        draft: Draft {
            stem: "and_comm_or",
            key: String::new(),
            statement: format!(
                "impl (and {a} {b}) (or (and {b} {a}) {c})",
                a = v[0],
                b = v[1],
                c = v[2]
            ),
            script: "intro. left. apply {0}. assumption.".into(),
        },
    }
}

pub fn apply_or_comm(rng: &mut ChaCha8Rng) -> Planned {
    let v = atoms(rng, 3);
    Planned {
        needs: vec![or_comm_draft(v[0], v[1])],
        draft: Draft {
            stem: "or_comm_and",
            key: String::new(),
            statement: format!("impl (and {c} (or {a} {b})) (or {b} {a})", a = v[0], b = v[1], c = v[2]),
            script: "intro. destruct H0. apply {0}. assumption.".into(),
        },
    }
}

pub fn unfold_both(rng: &mut ChaCha8Rng) -> Planned {
    let (a, b) = (num(rng), num(rng));
    let s = style(
        rng,
        &[
            (3, "unfold both. split; reflexivity.".into()),
            (2, "unfold both. split. reflexivity. reflexivity.".into()),
            (2, "unfold both. now split.".into()),
        ],
    );
    draft("both", "", format!("both {a} {b}"), s)
}

pub fn unfold_dbl(rng: &mut ChaCha8Rng) -> Planned {
    let k = num(rng);
    let s = style(
        rng,
        &[
            (3, "unfold dbl. reflexivity.".into()),
            (1, "unfold dbl. simpl. reflexivity.".into()),
        ],
    );
    draft("dbl", "", format!("dbl {k}"), s)
}

pub fn unfold_wrap(rng: &mut ChaCha8Rng) -> Planned {
    let k = num(rng);
    draft(
        "wrap",
        "",
        format!("wrap {k}"),
        "unfold wrap. left. reflexivity.".into(),
    )
}

pub fn unfold_triv(_rng: &mut ChaCha8Rng) -> Planned {
    draft("triv", "", "triv".into(), "unfold triv. intro. assumption.".into())
}

pub fn unfold_multi(rng: &mut ChaCha8Rng) -> Planned {
    let (a, b, k) = (num(rng), num(rng), num(rng));
    draft(
        "both_dbl",
        "",
        format!("and (both {a} {b}) (dbl {k})"),
        "unfold both, dbl. split. split; reflexivity. reflexivity.".into(),
    )
}

pub type Family = fn(&mut ChaCha8Rng) -> Planned;

/// Families with their relative weights.
pub const FAMILIES: &[(u32, Family)] = &[
    (4, imp_refl),
    (3, imp_weaken),
    (3, and_elim),
    (3, and_intro),
    (3, or_intro),
    (2, or_comm),
    (2, and_comm),
    (3, modus_ponens),
    (2, imp_trans),
    (2, double_neg),
    (2, not_unfold),
    (2, and_dup),
    (3, plus_0_n),
    (3, closed_arith),
    (3, plus_n_0),
    (2, app_nil),
    (1, plus_n_sm),
    (1, length_append),
    (2, mult_n_0),
    (2, length_cons),
    (2, bool_cases),
    (3, rewrite_plus_n_0),
    (3, apply_plus_n_0),
    (2, rewrite_app_nil),
    (2, rewrite_plus_n_sm),
    (3, apply_and_comm),
    (2, apply_or_comm),
    (3, unfold_both),
    (2, unfold_dbl),
    (2, unfold_wrap),
    (2, unfold_triv),
    (2, unfold_multi),
];

pub fn pick_family(rng: &mut ChaCha8Rng) -> Family {
    let total: u32 = FAMILIES.iter().map(|(w, _)| w).sum();
    let mut x = rng.gen_range(0..total);
    for (w, f) in FAMILIES {
        if x < *w {
            return *f;
        }
        x -= w;
    }
    unreachable!()
}

pub fn pick_atom(rng: &mut ChaCha8Rng) -> &'static str {
    pick(rng, &ATOMS)
}

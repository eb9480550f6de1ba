//! Proof kernel: syntax, printing, parsing, and tactic semantics.

mod check;
mod env;
pub mod logic;
mod parse;
mod print;
mod syntax;
mod tactics;

pub use check::{check_proof, CheckResult};
pub use env::{obligation_vars, typecheck, Definition, Env, TypeError};
pub use parse::{is_reserved, lex, parse_prop, parse_term, ParseError, Parser, Spanned, Tok};
pub use print::{head_token, tokenize, tokenize_hyp};
pub use syntax::*;
pub use tactics::{apply_tactic, resolve_word, run_command, TacticError};

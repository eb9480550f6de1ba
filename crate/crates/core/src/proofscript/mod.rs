//! Proof-script language: parsing, tactical desugaring, and linearization
//! into flat command sequences.

mod ast;
mod desugar;
mod linearize;
mod parser;
mod replay;
mod samples;

pub use ast::{RawArg, RawCommand, ScriptAst, ScriptFile, TheoremScript};
pub use desugar::{desugar, learned_try_tactics};
pub use linearize::{linearize, LinearScript, LinearizeError};
pub use parser::{parse_file, parse_script};
pub use replay::{replays, resolve, run as replay};
pub use samples::{extract_samples, extract_samples_untransformed, lemma_pool, theorem_env, ExtractStats};

//! Learned tactic prediction and bounded proof search over a small
//! tactic-based proof kernel.

pub mod kernel;

pub use kernel::{
    apply_tactic, check_proof, Argument, BaseTactic, CheckResult, Env, Ident, Obligation, ProofCommand, ProofState,
    Prop, TacticError, TacticName,
};
pub mod corpusgen;
pub mod features;
pub mod neural;
pub mod pipeline;
pub mod predictor;
pub mod proofscript;
pub mod search;

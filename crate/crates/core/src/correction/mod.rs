//! Correction recommendations: the adequacy tables and the checking loop
//! that applies them behavior by behavior.

pub mod action;
pub mod check;
pub mod tables;

pub use action::{BasicAction, CorrectionAction, Target, Witness};
pub use check::{
    matches_good_behavior, run_spec_check, CheckError, Hooks, NoEdits, Oracle, OracleQuery, Phase, Required,
    RunOutcome, SpecCheck, Step, Verdict,
};
pub use tables::{neg_triple_action, postcondition_action, precondition_action, triple_action, TableError};

//! Tri-valued predicate evaluation and execution of implementation bodies.

pub mod behavior;
pub mod builtins;
pub mod exec;
pub mod predicate;
pub mod tribool;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::Span;

pub use behavior::{eval_post, eval_post_on_behavior, eval_pre, eval_pre_on_behavior};
pub use exec::{exec_function, ExecOutcome};
pub use predicate::{eval_clauses, eval_expr, Env, Evaluation};
pub use tribool::TriBool;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FaultKind {
    IndexOutOfBounds,
    SliceBounds,
    DivisionByZero,
    Overflow,
    TypeMismatch,
    StepBudget,
    RecursionDepth,
    NoImplementation,
    MissingReturn,
    UnboundVariable,
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaultKind::IndexOutOfBounds => "index out of bounds",
            FaultKind::SliceBounds => "slice out of bounds",
            FaultKind::DivisionByZero => "division by zero",
            FaultKind::Overflow => "integer overflow",
            FaultKind::TypeMismatch => "type mismatch",
            FaultKind::StepBudget => "step budget exceeded",
            FaultKind::RecursionDepth => "recursion depth exceeded",
            FaultKind::NoImplementation => "function has no body",
            FaultKind::MissingReturn => "missing return",
            FaultKind::UnboundVariable => "unbound variable",
        })
    }
}

/// Why an evaluation could not produce a value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fault {
    pub kind: FaultKind,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Fault {
    pub fn new(kind: FaultKind, span: Span, message: impl Into<String>) -> Self {
        Fault {
            kind,
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self.kind, FaultKind::StepBudget | FaultKind::RecursionDepth)
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}:{}: {}", self.kind, self.line, self.col, self.message)
    }
}

/// Evaluation that could not even be attempted. Distinct from `Undefined`:
/// it means validation let something through.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{name}` at {span}")]
    UnboundVariable { name: String, span: Span },
}

impl From<EvalError> for Fault {
    fn from(e: EvalError) -> Self {
        match &e {
            EvalError::UnboundVariable { span, .. } => Fault::new(FaultKind::UnboundVariable, *span, e.to_string()),
        }
    }
}

/// Limits on a single evaluation or execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    pub max_steps: u64,
    pub max_depth: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_depth: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BudgetKind {
    Steps,
    RecursionDepth,
}

impl fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetKind::Steps => "steps",
            BudgetKind::RecursionDepth => "recursion depth",
        })
    }
}

//! The checking loop: walks the behaviors of the function under analysis,
//! pausing after the precondition verdict and again after the
//! postcondition (or triple) verdict of each behavior.
//!
//! With an empty body the recorded outputs are checked against `P` and `Q`.
//! Otherwise the body is executed on each input and the oracle `g` decides
//! whether the computed output is acceptable. `g` is resolved without asking
//! when a good behavior with the same input agrees with every output it
//! records.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::action::{CorrectionAction, Target, Witness};
use super::tables::{neg_triple_action, postcondition_action, precondition_action, triple_action};
use crate::eval::{eval_post, eval_pre, exec_function, Budget, EvalError, ExecOutcome, Fault, TriBool};
use crate::lang::{apply_edit, AnnotatedProgram, Behavior, BehaviorKind, Diagnostic, Edit, FunctionDef};
use crate::value::Valuation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Phase {
    /// The precondition table on `P(i)`.
    Pre,
    /// The postcondition table on the recorded `(i, o)`, spec-only mode.
    Post,
    /// The triple tables on the executed `(i, o)`.
    Triple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Required {
    pub p: bool,
    pub q: Option<bool>,
}

/// One pause point's findings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub behavior_index: usize,
    pub kind: BehaviorKind,
    pub phase: Phase,
    pub input: Valuation,
    /// The recorded output in spec-only mode, the computed one otherwise.
    pub output: Option<Valuation>,
    pub p_truth: TriBool,
    pub q_truth: Option<TriBool>,
    pub g: Option<bool>,
    pub required: Required,
    pub action: CorrectionAction,
    /// Set when execution faulted or ran out of budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    /// Faults masked by short-circuiting.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Fault>,
}

impl Verdict {
    /// `#2 good pre: P=true -> Skip`
    pub fn line(&self) -> String {
        let mut s = format!(
            "#{} {} {}: P={}",
            self.behavior_index + 1,
            self.kind,
            match self.phase {
                Phase::Pre => "pre",
                Phase::Post => "post",
                Phase::Triple => "triple",
            },
            short(&self.p_truth)
        );
        if let Some(q) = &self.q_truth {
            s.push_str(&format!(" Q={}", short(q)));
        }
        if let Some(g) = self.g {
            s.push_str(&format!(" g={g}"));
        }
        s.push_str(&format!(" -> {}", self.action.summary()));
        s
    }
}

fn short(t: &TriBool) -> &'static str {
    match t {
        TriBool::True => "true",
        TriBool::False => "false",
        TriBool::Undefined(_) => "undefined",
    }
}

/// A request for the developer's judgement of a computed output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleQuery {
    pub behavior_index: usize,
    pub input: Valuation,
    pub output: Valuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Step {
    Verdict(Verdict),
    Query(OracleQuery),
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("an oracle question is pending")]
    QueryPending,
    #[error("no oracle question is pending")]
    NoPendingQuery,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
enum Next {
    Pre,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pending {
    query: OracleQuery,
    kind: BehaviorKind,
    p: TriBool,
    q: TriBool,
    warnings: Vec<Fault>,
}

/// Resumable state of one pass over the behaviors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecCheck {
    cursor: usize,
    next: Next,
    pending: Option<Pending>,
    budget: Budget,
}

impl SpecCheck {
    pub fn new(budget: Budget) -> Self {
        SpecCheck {
            cursor: 0,
            next: Next::Pre,
            pending: None,
            budget,
        }
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn pending_query(&self) -> Option<&OracleQuery> {
        self.pending.as_ref().map(|p| &p.query)
    }

    /// True when the next step evaluates a precondition.
    pub fn at_pre(&self) -> bool {
        self.next == Next::Pre
    }

    /// Back to the first behavior.
    pub fn restart(&mut self) {
        *self = SpecCheck::new(self.budget);
    }

    /// Called after the program changed. The current behavior is checked
    /// again from its precondition; a pending question about the old
    /// program is dropped.
    pub fn program_changed(&mut self) {
        self.pending = None;
        self.next = Next::Pre;
    }

    /// Advances to the next pause point.
    pub fn step(&mut self, program: &AnnotatedProgram) -> Result<Step, CheckError> {
        if self.pending.is_some() {
            return Err(CheckError::QueryPending);
        }
        let f = program.entry_function();
        let Some(b) = f.behavior(self.cursor) else {
            return Ok(Step::Done);
        };
        let index = self.cursor;
        let pre = eval_pre(program, f, &b.input, self.budget)?;
        if self.next == Next::Pre {
            self.next = Next::Post;
            return Ok(Step::Verdict(Verdict {
                behavior_index: index,
                kind: b.kind,
                phase: Phase::Pre,
                input: b.input.clone(),
                output: None,
                action: precondition_action(b.kind, &pre.value, &b.input),
                required: Required {
                    p: b.kind != BehaviorKind::DontCare,
                    q: None,
                },
                p_truth: pre.value,
                q_truth: None,
                g: None,
                fault: None,
                warnings: pre.warnings,
            }));
        }

        let verdict = if f.is_spec_only() {
            self.spec_only_verdict(program, f, b, index, pre.value, pre.warnings)?
        } else {
            match self.triple_verdict(program, f, b, index, pre.value, pre.warnings)? {
                Ok(v) => v,
                Err(query) => return Ok(Step::Query(query)),
            }
        };
        self.advance();
        Ok(Step::Verdict(verdict))
    }

    /// Supplies the oracle's answer to the pending question.
    pub fn answer(&mut self, g: bool) -> Result<Verdict, CheckError> {
        let Pending {
            query,
            kind,
            p,
            q,
            warnings,
        } = self.pending.take().ok_or(CheckError::NoPendingQuery)?;
        let action = if p.is_true() {
            triple_action(g, &q, &query.input, &query.output)
        } else {
            neg_triple_action(g, &q, &query.input, &query.output)
        };
        self.advance();
        Ok(Verdict {
            behavior_index: query.behavior_index,
            kind,
            phase: Phase::Triple,
            required: Required {
                p: kind != BehaviorKind::DontCare,
                q: p.is_true().then_some(g),
            },
            input: query.input,
            output: Some(query.output),
            p_truth: p,
            q_truth: Some(q),
            g: Some(g),
            action,
            fault: None,
            warnings,
        })
    }

    fn advance(&mut self) {
        self.cursor += 1;
        self.next = Next::Pre;
    }

    fn spec_only_verdict(
        &self,
        program: &AnnotatedProgram,
        f: &FunctionDef,
        b: &Behavior,
        index: usize,
        p: TriBool,
        mut warnings: Vec<Fault>,
    ) -> Result<Verdict, CheckError> {
        let post = eval_post(program, f, &b.input, &b.output, self.budget)?;
        warnings.extend(post.warnings);
        let (action, required_q) = match b.kind {
            BehaviorKind::DontCare => (CorrectionAction::skip(), None),
            kind => (
                postcondition_action(kind, &post.value, &b.input, &b.output)
                    .expect("labeled behaviors have postcondition rows"),
                Some(kind == BehaviorKind::Good),
            ),
        };
        Ok(Verdict {
            behavior_index: index,
            kind: b.kind,
            phase: Phase::Post,
            input: b.input.clone(),
            output: Some(b.output.clone()),
            p_truth: p,
            q_truth: Some(post.value),
            g: None,
            required: Required {
                p: b.kind != BehaviorKind::DontCare,
                q: required_q,
            },
            action,
            fault: None,
            warnings,
        })
    }

    /// `Err(query)` when the oracle must be asked.
    fn triple_verdict(
        &mut self,
        program: &AnnotatedProgram,
        f: &FunctionDef,
        b: &Behavior,
        index: usize,
        p: TriBool,
        mut warnings: Vec<Fault>,
    ) -> Result<Result<Verdict, OracleQuery>, CheckError> {
        let mut verdict = Verdict {
            behavior_index: index,
            kind: b.kind,
            phase: Phase::Triple,
            input: b.input.clone(),
            output: None,
            p_truth: p.clone(),
            q_truth: None,
            g: None,
            required: Required {
                p: b.kind != BehaviorKind::DontCare,
                q: None,
            },
            action: CorrectionAction::skip(),
            fault: None,
            warnings: Vec::new(),
        };
        if b.kind == BehaviorKind::DontCare {
            verdict.warnings = warnings;
            return Ok(Ok(verdict));
        }
        if p.is_undefined() {
            verdict.action = CorrectionAction::make_well_defined(Target::P, Witness::input(&b.input));
            verdict.warnings = warnings;
            return Ok(Ok(verdict));
        }

        let outcome = exec_function(program, &f.name, &b.input, self.budget);
        let output = match outcome {
            ExecOutcome::Returned { .. } => outcome.output().expect("returned"),
            ExecOutcome::Fault { fault } => {
                if p.is_true() {
                    verdict.action = CorrectionAction::revise_impl(Witness::input(&b.input));
                }
                verdict.fault = Some(fault);
                verdict.warnings = warnings;
                return Ok(Ok(verdict));
            }
            ExecOutcome::BudgetExceeded { fault, .. } => {
                if p.is_true() {
                    let w = Witness::input(&b.input);
                    verdict.action = CorrectionAction::or(
                        CorrectionAction::revise_impl(w.clone()),
                        CorrectionAction::raise_budget(w),
                    );
                }
                verdict.fault = Some(fault);
                verdict.warnings = warnings;
                return Ok(Ok(verdict));
            }
        };

        let post = eval_post(program, f, &b.input, &output, self.budget)?;
        warnings.extend(post.warnings);
        if !matches_good_behavior(f, &b.input, &output) {
            let query = OracleQuery {
                behavior_index: index,
                input: b.input.clone(),
                output,
            };
            self.pending = Some(Pending {
                query: query.clone(),
                kind: b.kind,
                p,
                q: post.value,
                warnings,
            });
            return Ok(Err(query));
        }
        verdict.action = if p.is_true() {
            triple_action(true, &post.value, &b.input, &output)
        } else {
            neg_triple_action(true, &post.value, &b.input, &output)
        };
        verdict.required.q = p.is_true().then_some(true);
        verdict.output = Some(output);
        verdict.q_truth = Some(post.value);
        verdict.g = Some(true);
        verdict.warnings = warnings;
        Ok(Ok(verdict))
    }
}

/// Whether some good behavior has input `input` and agrees with `output` on
/// every variable it records.
pub fn matches_good_behavior(f: &FunctionDef, input: &Valuation, output: &Valuation) -> bool {
    f.behaviors().any(|b| {
        b.kind == BehaviorKind::Good
            && &b.input == input
            && b.output.iter().all(|(k, v)| output.get(k) == Some(v))
    })
}

/// The developer's judgement `g(i, o)`.
pub trait Oracle {
    fn judge(&mut self, query: &OracleQuery) -> bool;
}

impl<F: FnMut(&OracleQuery) -> bool> Oracle for F {
    fn judge(&mut self, query: &OracleQuery) -> bool {
        self(query)
    }
}

/// Developer interaction between pause points.
pub trait Hooks {
    /// Called with every verdict; returning an edit applies it before the
    /// loop continues.
    fn on_verdict(&mut self, verdict: &Verdict, program: &AnnotatedProgram) -> Option<Edit>;

    /// Called when an edit returned from `on_verdict` was rejected. The
    /// program is left as it was.
    fn on_edit_error(&mut self, _edit: &Edit, _diagnostics: &[Diagnostic]) {}
}

/// Hooks that never edit.
pub struct NoEdits;

impl Hooks for NoEdits {
    fn on_verdict(&mut self, _: &Verdict, _: &AnnotatedProgram) -> Option<Edit> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub verdicts: Vec<Verdict>,
    /// The program after all accepted edits.
    pub program: AnnotatedProgram,
}

/// Runs the check to completion.
pub fn run_spec_check(
    program: AnnotatedProgram,
    budget: Budget,
    oracle: &mut dyn Oracle,
    hooks: &mut dyn Hooks,
) -> Result<RunOutcome, CheckError> {
    let mut program = program;
    let mut check = SpecCheck::new(budget);
    let mut verdicts = Vec::new();
    loop {
        let verdict = match check.step(&program)? {
            Step::Done => break,
            Step::Verdict(v) => v,
            Step::Query(q) => {
                let g = oracle.judge(&q);
                check.answer(g)?
            }
        };
        if let Some(edit) = hooks.on_verdict(&verdict, &program) {
            match apply_edit(&program, &edit) {
                Ok(edited) => {
                    program = edited.program;
                    check.program_changed();
                }
                Err(diags) => hooks.on_edit_error(&edit, &diags),
            }
        }
        verdicts.push(verdict);
    }
    Ok(RunOutcome { verdicts, program })
}

//! Non-interactive checking: every behavior, then optionally accuracy over
//! a domain file, summarized as an exit status.
//!
//! Nobody is around to answer oracle questions, so any implementation
//! output that no good behavior vouches for is judged wrong.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::accuracy::{check_program, AccuracyError, AccuracyOptions, AccuracyReport, DomainSpec, DEFAULT_WITNESS_CAP};
use crate::correction::{SpecCheck, Step, Verdict};
use crate::eval::Budget;
use crate::lang::{load_program, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ExitStatus {
    /// Every verdict is Skip and the specification is accurate.
    Ok,
    /// Some verdict recommends a change, or accuracy found witnesses.
    Witnesses,
    /// A step budget or domain cap was hit.
    Limit,
    /// The program or domain could not be read.
    InvalidInput,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Ok => 0,
            ExitStatus::InvalidInput => 2,
            ExitStatus::Witnesses => 3,
            ExitStatus::Limit => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BatchOptions {
    pub domain: Option<PathBuf>,
    /// Stop at the first non-Skip verdict or accuracy witness.
    pub fail_fast: bool,
    pub budget: Budget,
    pub witness_cap: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            domain: None,
            fail_fast: false,
            budget: Budget::default(),
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchReport {
    pub status: ExitStatus,
    pub exit_code: u8,
    pub diagnostics: Vec<Diagnostic>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<AccuracyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BatchReport {
    fn new() -> Self {
        BatchReport {
            status: ExitStatus::Ok,
            exit_code: 0,
            diagnostics: Vec::new(),
            verdicts: Vec::new(),
            accuracy: None,
            error: None,
        }
    }

    fn raise(&mut self, status: ExitStatus) {
        self.status = self.status.max(status);
        self.exit_code = self.status.code();
    }

    fn fail(mut self, error: impl ToString) -> Self {
        self.error = Some(error.to_string());
        self.raise(ExitStatus::InvalidInput);
        self
    }
}

impl fmt::Display for BatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.diagnostics {
            writeln!(f, "{d}")?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "error: {e}")?;
        }
        for v in &self.verdicts {
            writeln!(f, "{}", v.line())?;
            if !v.action.is_skip() {
                writeln!(f, "    {}", v.action)?;
            }
        }
        if let Some(r) = &self.accuracy {
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

pub fn run_batch(path: &Path, options: &BatchOptions) -> BatchReport {
    match std::fs::read_to_string(path) {
        Ok(source) => run_batch_source(&source, options),
        Err(e) => BatchReport::new().fail(format!("cannot read {}: {e}", path.display())),
    }
}

pub fn run_batch_source(source: &str, options: &BatchOptions) -> BatchReport {
    let mut report = BatchReport::new();
    let program = match load_program(source) {
        Ok((program, warnings)) => {
            report.diagnostics = warnings;
            program
        }
        Err(diagnostics) => {
            report.diagnostics = diagnostics;
            return report.fail("program has errors");
        }
    };
    let domain = match &options.domain {
        None => None,
        Some(path) => match DomainSpec::load(path) {
            Ok(d) => Some(d),
            Err(e) => return report.fail(e),
        },
    };

    let mut check = SpecCheck::new(options.budget);
    loop {
        let verdict = match check.step(&program) {
            Ok(Step::Done) => break,
            Ok(Step::Verdict(v)) => v,
            Ok(Step::Query(_)) => match check.answer(false) {
                Ok(v) => v,
                Err(e) => return report.fail(e),
            },
            Err(e) => return report.fail(e),
        };
        let budget_fault = verdict.fault.as_ref().is_some_and(|f| f.is_budget())
            || verdict.p_truth.fault().is_some_and(|f| f.is_budget())
            || verdict.q_truth.as_ref().and_then(|q| q.fault()).is_some_and(|f| f.is_budget());
        if budget_fault {
            report.raise(ExitStatus::Limit);
        }
        let flagged = !verdict.action.is_skip();
        report.verdicts.push(verdict);
        if flagged {
            report.raise(ExitStatus::Witnesses);
            if options.fail_fast {
                return report;
            }
        }
    }

    if let Some(domain) = domain {
        let accuracy_options = AccuracyOptions {
            witness_cap: options.witness_cap,
            fail_fast: options.fail_fast,
        };
        match check_program(&program, &domain, options.budget, accuracy_options) {
            Ok(r) => {
                if r.has_witnesses() {
                    report.raise(ExitStatus::Witnesses);
                }
                report.accuracy = Some(r);
            }
            Err(e @ AccuracyError::DomainTooLarge { .. }) => {
                report.error = Some(e.to_string());
                report.raise(ExitStatus::Limit);
            }
            Err(e) => return report.fail(e),
        }
    }
    report
}

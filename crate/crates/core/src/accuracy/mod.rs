//! Accuracy of a specification over a finite domain.
//!
//! A specification is under-constrained when it admits a bad behavior and
//! over-constrained when it rejects a good one. Both are judged here by
//! enumeration, so every verdict holds only on the domain that was walked.

pub mod domain;
pub mod labeled;
pub mod report;
pub mod spec;

use thiserror::Error;

pub use domain::{split, DomainSpec, Enumeration, VarDomain, DEFAULT_CAP};
pub use labeled::{LabeledBehavior, LabeledSet, ReferenceLabeler};
pub use report::{
    check_accuracy, compare_specs, AccuracyOptions, AccuracyReport, AccuracyVerdict, Comparison, Finding, WitnessList,
    DEFAULT_WITNESS_CAP,
};
pub use spec::{generate_spec, ManualSpec, Specification, TableSpec};

use crate::eval::Budget;
use crate::lang::{AnnotatedProgram, BehaviorKind};

#[derive(Debug, Error)]
pub enum AccuracyError {
    #[error("domain has {count} behaviors, over the cap of {cap}")]
    DomainTooLarge { count: u128, cap: u64 },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid filter: {0}")]
    Filter(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("domain has no values for `{0}`")]
    MissingVariable(String),
    #[error("domain variable `{0}` is neither a parameter nor `rv`")]
    UnknownVariable(String),
    #[error("behavior {input} -> {output} is labeled both {first} and {second}")]
    InconsistentLabels {
        input: String,
        output: String,
        first: BehaviorKind,
        second: BehaviorKind,
    },
    #[error("no usable reference function `{0}`")]
    UnknownReference(String),
}

impl AccuracyError {
    /// Resource limits, as opposed to malformed input.
    pub fn is_cap(&self) -> bool {
        matches!(self, AccuracyError::DomainTooLarge { .. })
    }
}

/// Checks the entry function's specification. With a `reference`, every
/// behavior in `domain` is labeled by running it; otherwise the program's
/// own behavior blocks are the labeled set and the domain only names the
/// variables.
pub fn check_program(
    program: &AnnotatedProgram,
    domain: &DomainSpec,
    budget: Budget,
    options: AccuracyOptions,
) -> Result<AccuracyReport, AccuracyError> {
    let f = program.entry_function();
    let spec = ManualSpec::new(program).with_budget(budget);
    domain.check_against(f)?;
    match &domain.reference {
        Some(name) => {
            let mut labeler = ReferenceLabeler::new(program, name, budget)?;
            let mut report = AccuracyReport::empty(options.witness_cap);
            for v in domain.enumerate()? {
                let (input, output) = split(&v, f);
                let kind = labeler.label(&input, &output)?;
                let b = LabeledBehavior::new(kind, input, output);
                if report.record(&spec, &b) && options.fail_fast {
                    report.stopped_early = true;
                    break;
                }
            }
            Ok(report)
        }
        None => {
            let labeled = LabeledSet::from_function(f)?;
            Ok(check_accuracy(&spec, labeled.behaviors(), options))
        }
    }
}

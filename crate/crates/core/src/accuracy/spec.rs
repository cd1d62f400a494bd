//! Specifications as objects that can be asked about behaviors: the
//! annotations of a program, or a table generated from labels.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::labeled::LabeledSet;
use crate::eval::{eval_post, eval_pre, Budget, TriBool};
use crate::lang::{AnnotatedProgram, BehaviorKind, FunctionDef};
use crate::value::Valuation;

pub trait Specification {
    fn pre(&self, input: &Valuation) -> TriBool;

    fn post(&self, input: &Valuation, output: &Valuation) -> TriBool;

    /// `P(i) => Q(i, o)`. `Q` is not evaluated when `P` is false.
    fn satisfies(&self, input: &Valuation, output: &Valuation) -> TriBool {
        let p = self.pre(input);
        if p.is_false() {
            return TriBool::True;
        }
        p.implies(self.post(input, output))
    }
}

/// The `@pre`/`@post` of one function.
#[derive(Debug, Clone, Copy)]
pub struct ManualSpec<'a> {
    program: &'a AnnotatedProgram,
    function: &'a FunctionDef,
    budget: Budget,
}

impl<'a> ManualSpec<'a> {
    /// The entry function's specification.
    pub fn new(program: &'a AnnotatedProgram) -> Self {
        ManualSpec {
            program,
            function: program.entry_function(),
            budget: Budget::default(),
        }
    }

    pub fn for_function(program: &'a AnnotatedProgram, name: &str) -> Option<Self> {
        Some(ManualSpec {
            program,
            function: program.function(name)?,
            budget: Budget::default(),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn function(&self) -> &'a FunctionDef {
        self.function
    }
}

impl Specification for ManualSpec<'_> {
    fn pre(&self, input: &Valuation) -> TriBool {
        match eval_pre(self.program, self.function, input, self.budget) {
            Ok(e) => e.value,
            Err(e) => TriBool::Undefined(e.into()),
        }
    }

    fn post(&self, input: &Valuation, output: &Valuation) -> TriBool {
        match eval_post(self.program, self.function, input, output, self.budget) {
            Ok(e) => e.value,
            Err(e) => TriBool::Undefined(e.into()),
        }
    }
}

/// A specification given by enumeration: `P` holds on the listed inputs and
/// `Q` on the listed pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub inputs: BTreeSet<Valuation>,
    pub pairs: BTreeSet<(Valuation, Valuation)>,
}

impl Specification for TableSpec {
    fn pre(&self, input: &Valuation) -> TriBool {
        self.inputs.contains(input).into()
    }

    fn post(&self, input: &Valuation, output: &Valuation) -> TriBool {
        self.pairs.contains(&(input.clone(), output.clone())).into()
    }
}

/// The table specification of a labeled set: `P` holds on every input that
/// has a good or bad behavior, and `Q` exactly on the good behaviors.
pub fn generate_spec(labeled: &LabeledSet) -> TableSpec {
    let mut spec = TableSpec::default();
    for b in labeled.behaviors() {
        match b.kind {
            BehaviorKind::Good => {
                spec.inputs.insert(b.input.clone());
                spec.pairs.insert((b.input.clone(), b.output.clone()));
            }
            BehaviorKind::Bad => {
                spec.inputs.insert(b.input.clone());
            }
            BehaviorKind::DontCare => {}
        }
    }
    spec
}

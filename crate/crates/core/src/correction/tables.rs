//! The adequacy tables. Each maps a behavior's label (or the oracle's
//! judgement) and the actual truth value to a correction. Undefined truth
//! values always map to `MakeWellDefined`.

use thiserror::Error;

use super::action::{CorrectionAction as A, Target, Witness};
use crate::eval::TriBool;
use crate::lang::BehaviorKind;
use crate::value::Valuation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("the postcondition table has no rows for {0} behaviors")]
    InvalidKind(BehaviorKind),
}

/// Adequacy of `P` on a labeled input.
pub fn precondition_action(kind: BehaviorKind, p: &TriBool, input: &Valuation) -> A {
    let w = Witness::input(input);
    match (kind, p) {
        (_, TriBool::Undefined(_)) => A::make_well_defined(Target::P, w),
        (BehaviorKind::Good | BehaviorKind::Bad, TriBool::True) => A::skip(),
        (BehaviorKind::Good | BehaviorKind::Bad, TriBool::False) => A::weaken(Target::P, w),
        (BehaviorKind::DontCare, TriBool::True) => A::strengthen(Target::P, w),
        (BehaviorKind::DontCare, TriBool::False) => A::skip(),
    }
}

/// Adequacy of `Q` on a labeled behavior. `dontCare` places no demand on `Q`.
pub fn postcondition_action(
    kind: BehaviorKind,
    q: &TriBool,
    input: &Valuation,
    output: &Valuation,
) -> Result<A, TableError> {
    let w = Witness::pair(input, output);
    Ok(match (kind, q) {
        (BehaviorKind::DontCare, _) => return Err(TableError::InvalidKind(kind)),
        (_, TriBool::Undefined(_)) => A::make_well_defined(Target::Q, w),
        (BehaviorKind::Good, TriBool::True) => A::skip(),
        (BehaviorKind::Good, TriBool::False) => A::weaken(Target::Q, w),
        (BehaviorKind::Bad, TriBool::True) => A::strengthen(Target::Q, w),
        (BehaviorKind::Bad, TriBool::False) => A::skip(),
    })
}

/// Adequacy of the triple when `P(i)` holds and the implementation produced
/// `o`; `g` is the oracle's judgement of `(i, o)`.
pub fn triple_action(g: bool, q: &TriBool, input: &Valuation, output: &Valuation) -> A {
    let w = Witness::pair(input, output);
    match (g, q) {
        (_, TriBool::Undefined(_)) => A::make_well_defined(Target::Q, w),
        (true, TriBool::True) => A::skip(),
        (true, TriBool::False) => A::weaken(Target::Q, w),
        (false, TriBool::True) => A::and(A::strengthen(Target::Q, w.clone()), A::revise_impl(w)),
        (false, TriBool::False) => A::revise_impl(w),
    }
}

/// Adequacy of the triple when `P(i)` is false.
pub fn neg_triple_action(g: bool, q: &TriBool, input: &Valuation, output: &Valuation) -> A {
    let w = Witness::pair(input, output);
    match (g, q) {
        (_, TriBool::Undefined(_)) => A::make_well_defined(Target::Q, w),
        (true, TriBool::True) => A::skip(),
        (true, TriBool::False) => A::or(A::strengthen(Target::Q, w), A::skip()),
        (false, TriBool::True) => A::or(A::strengthen(Target::P, Witness::input(input)), A::revise_impl(w)),
        (false, TriBool::False) => A::skip(),
    }
}

//! Correction actions: recommendations rendered as data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::value::{format_valuation, Valuation};

/// Which half of the specification an action is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    P,
    Q,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::P => "P",
            Target::Q => "Q",
        })
    }
}

/// The input, or input/output pair, an action refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub input: Valuation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Valuation>,
}

impl Witness {
    pub fn input(input: &Valuation) -> Self {
        Witness {
            input: input.clone(),
            output: None,
        }
    }

    pub fn pair(input: &Valuation, output: &Valuation) -> Self {
        Witness {
            input: input.clone(),
            output: Some(output.clone()),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.output {
            None => write!(f, "input {}", format_valuation(&self.input, &[])),
            Some(o) => write!(
                f,
                "({}, {})",
                format_valuation(&self.input, &[]),
                format_valuation(o, &[])
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "camelCase")]
pub enum BasicAction {
    /// Leave the specification and implementation unchanged.
    Skip,
    /// Make the target true at the witness.
    Weaken { target: Target, witness: Witness },
    /// Make the target false at the witness.
    Strengthen { target: Target, witness: Witness },
    /// Stop the implementation from producing this output on this input.
    ReviseImpl { witness: Witness },
    /// Make the target evaluable at the witness.
    MakeWellDefined { target: Target, witness: Witness },
    /// The implementation ran out of budget; a larger one may let it finish.
    RaiseBudget { witness: Witness },
}

impl BasicAction {
    fn name(&self) -> String {
        match self {
            BasicAction::Skip => "Skip".into(),
            BasicAction::Weaken { target, .. } => format!("Weaken({target})"),
            BasicAction::Strengthen { target, .. } => format!("Strengthen({target})"),
            BasicAction::ReviseImpl { .. } => "ReviseImpl".into(),
            BasicAction::MakeWellDefined { target, .. } => format!("MakeWellDefined({target})"),
            BasicAction::RaiseBudget { .. } => "RaiseBudget".into(),
        }
    }
}

impl fmt::Display for BasicAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicAction::Skip => f.write_str("skip"),
            BasicAction::Weaken { target, witness } => write!(f, "weaken {target} at {witness}"),
            BasicAction::Strengthen { target, witness } => {
                write!(f, "strengthen {target} at {witness}")
            }
            BasicAction::ReviseImpl { witness } => write!(f, "revise the implementation at {witness}"),
            BasicAction::MakeWellDefined { target, witness } => {
                write!(f, "make {target} well-defined at {witness}")
            }
            BasicAction::RaiseBudget { witness } => write!(f, "raise the budget for {witness}"),
        }
    }
}

/// A formula over basic actions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase")]
pub enum CorrectionAction {
    Basic {
        #[serde(flatten)]
        action: BasicAction,
    },
    And {
        args: Vec<CorrectionAction>,
    },
    /// The developer picks one disjunct.
    Or {
        args: Vec<CorrectionAction>,
    },
}

impl CorrectionAction {
    pub fn skip() -> Self {
        BasicAction::Skip.into()
    }

    pub fn weaken(target: Target, witness: Witness) -> Self {
        BasicAction::Weaken { target, witness }.into()
    }

    pub fn strengthen(target: Target, witness: Witness) -> Self {
        BasicAction::Strengthen { target, witness }.into()
    }

    pub fn revise_impl(witness: Witness) -> Self {
        BasicAction::ReviseImpl { witness }.into()
    }

    pub fn make_well_defined(target: Target, witness: Witness) -> Self {
        BasicAction::MakeWellDefined { target, witness }.into()
    }

    pub fn raise_budget(witness: Witness) -> Self {
        BasicAction::RaiseBudget { witness }.into()
    }

    pub fn and(a: CorrectionAction, b: CorrectionAction) -> Self {
        CorrectionAction::And { args: vec![a, b] }
    }

    pub fn or(a: CorrectionAction, b: CorrectionAction) -> Self {
        CorrectionAction::Or { args: vec![a, b] }
    }

    pub fn is_skip(&self) -> bool {
        matches!(
            self,
            CorrectionAction::Basic {
                action: BasicAction::Skip
            }
        )
    }

    /// The disjuncts a developer chooses between; empty unless this is an
    /// `Or`.
    pub fn options(&self) -> &[CorrectionAction] {
        match self {
            CorrectionAction::Or { args } => args,
            _ => &[],
        }
    }

    /// Compact form without witnesses, e.g. `And(Strengthen(Q), ReviseImpl)`.
    pub fn summary(&self) -> String {
        match self {
            CorrectionAction::Basic { action } => action.name(),
            CorrectionAction::And { args } => format!("And({})", join(args)),
            CorrectionAction::Or { args } => format!("Or({})", join(args)),
        }
    }
}

fn join(args: &[CorrectionAction]) -> String {
    args.iter().map(|a| a.summary()).collect::<Vec<_>>().join(", ")
}

impl From<BasicAction> for CorrectionAction {
    fn from(action: BasicAction) -> Self {
        CorrectionAction::Basic { action }
    }
}

impl fmt::Display for CorrectionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrectionAction::Basic { action } => write!(f, "{action}"),
            CorrectionAction::And { args } | CorrectionAction::Or { args } => {
                let sep = if matches!(self, CorrectionAction::And { .. }) {
                    " and "
                } else {
                    " or "
                };
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    if matches!(a, CorrectionAction::Basic { .. }) {
                        write!(f, "{a}")?;
                    } else {
                        write!(f, "({a})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::valuation;

    #[test]
    fn json_shape_and_round_trip() {
        let w = Witness::pair(&valuation([("x", 1)]), &valuation([("rv", 2)]));
        let a = CorrectionAction::and(
            CorrectionAction::strengthen(Target::Q, w.clone()),
            CorrectionAction::revise_impl(w),
        );
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["op"], "and");
        assert_eq!(json["args"][0]["op"], "basic");
        assert_eq!(json["args"][0]["action"], "strengthen");
        assert_eq!(json["args"][0]["target"], "Q");
        assert_eq!(json["args"][1]["witness"]["output"]["rv"], 2);
        let back: CorrectionAction = serde_json::from_value(json).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.summary(), "And(Strengthen(Q), ReviseImpl)");
    }

    #[test]
    fn display() {
        let w = Witness::input(&valuation([("l", 0)]));
        let a = CorrectionAction::or(CorrectionAction::strengthen(Target::P, w), CorrectionAction::skip());
        assert_eq!(a.to_string(), "strengthen P at input {l=0} or skip");
        assert_eq!(a.options().len(), 2);
    }
}

//! Labeled behaviors: explicit lists, oracle callbacks and reference
//! implementations.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::domain::{split, DomainSpec};
use super::AccuracyError;
use crate::eval::{exec_function, Budget, ExecOutcome};
use crate::lang::{AnnotatedProgram, BehaviorKind, FunctionDef};
use crate::value::{format_valuation, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabeledBehavior {
    pub input: Valuation,
    pub output: Valuation,
    pub kind: BehaviorKind,
}

impl LabeledBehavior {
    pub fn new(kind: BehaviorKind, input: Valuation, output: Valuation) -> Self {
        LabeledBehavior { input, output, kind }
    }
}

/// A consistent set of labeled behaviors: no input/output pair carries two
/// labels. Exact repeats are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LabeledSet {
    behaviors: Vec<LabeledBehavior>,
    #[serde(skip)]
    index: HashMap<(Valuation, Valuation), BehaviorKind>,
}

impl LabeledSet {
    pub fn new(behaviors: impl IntoIterator<Item = LabeledBehavior>) -> Result<Self, AccuracyError> {
        let mut set = LabeledSet::default();
        set.extend(behaviors)?;
        Ok(set)
    }

    /// Adds behaviors, failing on the first conflicting label. Behaviors
    /// before the conflict are kept.
    pub fn extend(&mut self, behaviors: impl IntoIterator<Item = LabeledBehavior>) -> Result<(), AccuracyError> {
        for b in behaviors {
            let key = (b.input.clone(), b.output.clone());
            match self.index.get(&key) {
                Some(k) if *k == b.kind => {}
                Some(k) => {
                    return Err(AccuracyError::InconsistentLabels {
                        input: format_valuation(&b.input, &[]),
                        output: format_valuation(&b.output, &[]),
                        first: *k,
                        second: b.kind,
                    })
                }
                None => {
                    self.index.insert(key, b.kind);
                    self.behaviors.push(b);
                }
            }
        }
        Ok(())
    }

    /// The behaviors written in `f`'s behavior blocks.
    pub fn from_function(f: &FunctionDef) -> Result<Self, AccuracyError> {
        Self::new(
            f.behaviors()
                .map(|b| LabeledBehavior::new(b.kind, b.input.clone(), b.output.clone())),
        )
    }

    /// Labels every behavior of `domain` with `oracle(input, output)`.
    pub fn from_oracle(
        domain: &DomainSpec,
        f: &FunctionDef,
        mut oracle: impl FnMut(&Valuation, &Valuation) -> BehaviorKind,
    ) -> Result<Self, AccuracyError> {
        domain.check_against(f)?;
        let behaviors = domain.enumerate()?.map(|v| {
            let (input, output) = split(&v, f);
            let kind = oracle(&input, &output);
            LabeledBehavior::new(kind, input, output)
        });
        Self::new(behaviors)
    }

    pub fn get(&self, input: &Valuation, output: &Valuation) -> Option<BehaviorKind> {
        self.index.get(&(input.clone(), output.clone())).copied()
    }

    pub fn behaviors(&self) -> &[LabeledBehavior] {
        &self.behaviors
    }

    pub fn len(&self) -> usize {
        self.behaviors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.behaviors.is_empty()
    }

    pub fn count(&self, kind: BehaviorKind) -> usize {
        self.behaviors.iter().filter(|b| b.kind == kind).count()
    }
}

impl<'de> Deserialize<'de> for LabeledSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            behaviors: Vec<LabeledBehavior>,
        }
        let raw = Raw::deserialize(d)?;
        LabeledSet::new(raw.behaviors).map_err(serde::de::Error::custom)
    }
}

/// Labels behaviors by running a trusted function: its own output is good,
/// every other output bad. Inputs on which it faults or runs out of budget
/// are dontCare.
pub struct ReferenceLabeler<'a> {
    program: &'a AnnotatedProgram,
    function: &'a FunctionDef,
    budget: Budget,
    cache: BTreeMap<Valuation, Option<Valuation>>,
}

impl<'a> ReferenceLabeler<'a> {
    pub fn new(program: &'a AnnotatedProgram, name: &str, budget: Budget) -> Result<Self, AccuracyError> {
        let function = program
            .function(name)
            .ok_or_else(|| AccuracyError::UnknownReference(name.to_string()))?;
        if function.body.is_empty() {
            return Err(AccuracyError::UnknownReference(format!("{name} has no body")));
        }
        Ok(ReferenceLabeler {
            program,
            function,
            budget,
            cache: BTreeMap::new(),
        })
    }

    /// What the reference computes on `input`, or `None` if it does not
    /// return normally.
    pub fn reference_output(&mut self, input: &Valuation) -> Result<Option<Valuation>, AccuracyError> {
        if let Some(out) = self.cache.get(input) {
            return Ok(out.clone());
        }
        let mut args = Valuation::new();
        for p in &self.function.params {
            let v = input
                .get(&p.name)
                .ok_or_else(|| AccuracyError::MissingVariable(p.name.clone()))?;
            args.insert(p.name.clone(), v.clone());
        }
        let out = match exec_function(self.program, &self.function.name, &args, self.budget) {
            outcome @ ExecOutcome::Returned { .. } => outcome.output(),
            _ => None,
        };
        self.cache.insert(input.clone(), out.clone());
        Ok(out)
    }

    pub fn label(&mut self, input: &Valuation, output: &Valuation) -> Result<BehaviorKind, AccuracyError> {
        Ok(match self.reference_output(input)? {
            None => BehaviorKind::DontCare,
            Some(reference) => {
                if output.iter().all(|(k, v)| reference.get(k) == Some(v)) {
                    BehaviorKind::Good
                } else {
                    BehaviorKind::Bad
                }
            }
        })
    }

    /// Labels `domain`, whose variables are those of `f`.
    pub fn label_domain(&mut self, domain: &DomainSpec, f: &FunctionDef) -> Result<LabeledSet, AccuracyError> {
        domain.check_against(f)?;
        let mut out = Vec::new();
        for v in domain.enumerate()? {
            let (input, output) = split(&v, f);
            let kind = self.label(&input, &output)?;
            out.push(LabeledBehavior::new(kind, input, output));
        }
        LabeledSet::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;
    use crate::value::valuation;

    const SRC: &str = "
        int half(int x) {
            @behavior h {
                good { input={x=4} output={rv=2} }
                bad { input={x=4} output={rv=3} }
                good { input={x=4} output={rv=2} }
            }
            return x / 2;
        }
        int div(int x) { return 10 / x; }";

    #[test]
    fn repeats_are_dropped_and_conflicts_rejected() {
        let p = parse_program(SRC).unwrap();
        let set = LabeledSet::from_function(p.entry_function()).unwrap();
        assert_eq!(set.len(), 2);
        let mut set = set;
        let err = set
            .extend([LabeledBehavior::new(
                BehaviorKind::Bad,
                valuation([("x", 4)]),
                valuation([("rv", 2)]),
            )])
            .unwrap_err();
        assert!(matches!(err, AccuracyError::InconsistentLabels { .. }));
    }

    #[test]
    fn reference_labels() {
        let p = parse_program(SRC).unwrap();
        let mut r = ReferenceLabeler::new(&p, "div", Budget::default()).unwrap();
        let x = |n: i64| valuation([("x", n)]);
        let rv = |n: i64| valuation([("rv", n)]);
        assert_eq!(r.label(&x(5), &rv(2)).unwrap(), BehaviorKind::Good);
        assert_eq!(r.label(&x(5), &rv(3)).unwrap(), BehaviorKind::Bad);
        assert_eq!(r.label(&x(0), &rv(0)).unwrap(), BehaviorKind::DontCare);
        assert!(ReferenceLabeler::new(&p, "nope", Budget::default()).is_err());
    }

    #[test]
    fn json_round_trip_checks_consistency() {
        let p = parse_program(SRC).unwrap();
        let set = LabeledSet::from_function(p.entry_function()).unwrap();
        let json = serde_json::to_string(&set).unwrap();
        let back: LabeledSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);
        let clash = r#"{"behaviors":[
            {"input":{"x":1},"output":{"rv":1},"kind":"good"},
            {"input":{"x":1},"output":{"rv":1},"kind":"bad"}]}"#;
        assert!(serde_json::from_str::<LabeledSet>(clash).is_err());
    }
}

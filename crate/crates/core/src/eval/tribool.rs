//! Three-valued truth with a recorded reason for undefinedness.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Fault;

/// `True`, `False`, or `Undefined` carrying the first fault that made the
/// value undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriBool {
    True,
    False,
    Undefined(Fault),
}

impl TriBool {
    pub fn is_true(&self) -> bool {
        matches!(self, TriBool::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, TriBool::False)
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, TriBool::Undefined(_))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            TriBool::True => Some(true),
            TriBool::False => Some(false),
            TriBool::Undefined(_) => None,
        }
    }

    pub fn fault(&self) -> Option<&Fault> {
        match self {
            TriBool::Undefined(f) => Some(f),
            _ => None,
        }
    }

    pub fn not(self) -> TriBool {
        match self {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            u => u,
        }
    }

    /// Kleene conjunction: `False` wins over `Undefined` on either side.
    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::False, _) | (_, TriBool::False) => TriBool::False,
            (TriBool::True, TriBool::True) => TriBool::True,
            (TriBool::Undefined(f), _) | (_, TriBool::Undefined(f)) => TriBool::Undefined(f),
        }
    }

    /// Kleene disjunction: `True` wins over `Undefined` on either side.
    pub fn or(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::True, _) | (_, TriBool::True) => TriBool::True,
            (TriBool::False, TriBool::False) => TriBool::False,
            (TriBool::Undefined(f), _) | (_, TriBool::Undefined(f)) => TriBool::Undefined(f),
        }
    }

    pub fn implies(self, other: TriBool) -> TriBool {
        self.not().or(other)
    }
}

impl From<bool> for TriBool {
    fn from(b: bool) -> Self {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::True => f.write_str("true"),
            TriBool::False => f.write_str("false"),
            TriBool::Undefined(fault) => write!(f, "undefined ({fault})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Bool(bool),
    Undefined { undefined: Fault },
}

/// JSON form: `true`, `false`, or `{"undefined": <fault>}`.
impl Serialize for TriBool {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TriBool::True => s.serialize_bool(true),
            TriBool::False => s.serialize_bool(false),
            TriBool::Undefined(f) => Repr::Undefined {
                undefined: f.clone(),
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for TriBool {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Bool(b) => b.into(),
            Repr::Undefined { undefined } => TriBool::Undefined(undefined),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::FaultKind;
    use crate::lang::Span;

    fn u() -> TriBool {
        TriBool::Undefined(Fault::new(FaultKind::DivisionByZero, Span::default(), "x / 0"))
    }

    fn all() -> [TriBool; 3] {
        [TriBool::True, TriBool::False, u()]
    }

    #[test]
    fn masking() {
        assert_eq!(TriBool::False.and(u()), TriBool::False);
        assert_eq!(u().and(TriBool::False), TriBool::False);
        assert_eq!(TriBool::True.or(u()), TriBool::True);
        assert_eq!(u().implies(TriBool::True), TriBool::True);
        assert_eq!(TriBool::False.implies(u()), TriBool::True);
        assert!(TriBool::True.implies(u()).is_undefined());
    }

    #[test]
    fn de_morgan_on_all_pairs() {
        for a in all() {
            for b in all() {
                assert_eq!(
                    a.clone().and(b.clone()).not(),
                    a.clone().not().or(b.clone().not())
                );
                assert_eq!(a.clone().or(b.clone()).not(), a.clone().not().and(b.not()));
            }
        }
    }

    #[test]
    fn json_shape() {
        assert_eq!(serde_json::to_string(&TriBool::True).unwrap(), "true");
        let s = serde_json::to_string(&u()).unwrap();
        assert!(s.starts_with(r#"{"undefined":{"kind":"divisionByZero""#), "{s}");
        let back: TriBool = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u());
    }
}

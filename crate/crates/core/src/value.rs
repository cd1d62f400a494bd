//! Runtime data shared by behaviors, the evaluator and the accuracy checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lang::ast::Type;

/// An integer, a boolean, or an array of integers. Strings are arrays of
/// character codes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Arr(Vec<i64>),
}

impl Value {
    pub fn ty(&self) -> Type {
        match self {
            Value::Int(_) => Type::Int,
            Value::Bool(_) => Type::Bool,
            Value::Arr(_) => Type::IntArray,
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<Vec<i64>> for Value {
    fn from(v: Vec<i64>) -> Self {
        Value::Arr(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Arr(items) => {
                f.write_str("{")?;
                for (i, n) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// A binding of variable names to values, e.g. the input or the output half
/// of a behavior.
pub type Valuation = BTreeMap<String, Value>;

/// Renders a valuation as `{a={1,2}, l=0}`. Keys listed in `order` come
/// first, the rest follow alphabetically.
pub fn format_valuation(vals: &Valuation, order: &[&str]) -> String {
    let mut parts = Vec::with_capacity(vals.len());
    for key in order {
        if let Some(v) = vals.get(*key) {
            parts.push(format!("{key}={v}"));
        }
    }
    for (k, v) in vals {
        if !order.contains(&k.as_str()) {
            parts.push(format!("{k}={v}"));
        }
    }
    format!("{{{}}}", parts.join(", "))
}

/// Builds a valuation from `(name, value)` pairs.
pub fn valuation<I, K, V>(pairs: I) -> Valuation
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: Into<Value>,
{
    pairs
        .into_iter()
        .map(|(k, v)| (k.into(), v.into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_untagged() {
        let v: Valuation = valuation([("a", Value::Arr(vec![1, 2])), ("l", Value::Int(0))]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"a":[1,2],"l":0}"#);
        let back: Valuation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let b: Value = serde_json::from_str("true").unwrap();
        assert_eq!(b, Value::Bool(true));
    }

    #[test]
    fn display_follows_declared_order() {
        let v = valuation([("a", Value::Arr(vec![1, 2, 3])), ("e", 4.into()), ("l", 0.into())]);
        assert_eq!(format_valuation(&v, &["l", "a"]), "{l=0, a={1,2,3}, e=4}");
    }
}

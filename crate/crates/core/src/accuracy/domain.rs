//! Finite behavior domains and their enumeration.
//!
//! A domain gives every variable a finite set of values. Enumeration walks
//! the product in document order with the last variable changing fastest.
//! Arrays are ordered by length, then lexicographically.

use std::collections::BTreeSet;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::AccuracyError;
use crate::eval::{eval_expr, Env, TriBool};
use crate::lang::validate::free_vars;
use crate::lang::{parse_expr, Expr, FunctionDef, Type};
use crate::value::{Valuation, Value};

pub const DEFAULT_CAP: u64 = 10_000_000;

fn default_cap() -> u64 {
    DEFAULT_CAP
}

/// Values of one variable. Exactly one of `range`, `set` and `lenRange` is
/// given; arrays also take `elemRange` or `elemSet`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VarDomain {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub len_range: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elem_range: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elem_set: Option<Vec<i64>>,
}

impl VarDomain {
    pub fn range(lo: i64, hi: i64) -> Self {
        VarDomain {
            range: Some([lo, hi]),
            ..Default::default()
        }
    }

    pub fn set<V: Into<Value>>(values: impl IntoIterator<Item = V>) -> Self {
        VarDomain {
            set: Some(values.into_iter().map(Into::into).collect()),
            ..Default::default()
        }
    }

    pub fn array(len: [usize; 2], elems: [i64; 2]) -> Self {
        VarDomain {
            len_range: Some(len),
            elem_range: Some(elems),
            ..Default::default()
        }
    }

    fn shape(&self, name: &str) -> Result<Shape, AccuracyError> {
        let bad = |msg: &str| AccuracyError::InvalidDomain(format!("`{name}`: {msg}"));
        let given = [self.range.is_some(), self.set.is_some(), self.len_range.is_some()]
            .iter()
            .filter(|b| **b)
            .count();
        if given != 1 {
            return Err(bad("give exactly one of range, set or lenRange"));
        }
        if self.len_range.is_none() && (self.elem_range.is_some() || self.elem_set.is_some()) {
            return Err(bad("element values only apply to arrays"));
        }
        if let Some([lo, hi]) = self.range {
            if lo > hi {
                return Err(bad("empty range"));
            }
            return Ok(Shape::Range(lo, hi));
        }
        if let Some(set) = &self.set {
            let set: BTreeSet<Value> = set.iter().cloned().collect();
            if set.is_empty() {
                return Err(bad("empty set"));
            }
            return Ok(Shape::Set(set.into_iter().collect()));
        }
        let [min_len, max_len] = self.len_range.expect("checked above");
        if min_len > max_len {
            return Err(bad("empty length range"));
        }
        let elems: Vec<i64> = match (self.elem_range, &self.elem_set) {
            (Some([lo, hi]), None) if lo <= hi => (lo..=hi).collect(),
            (Some(_), None) => return Err(bad("empty element range")),
            (None, Some(set)) => set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
            _ => return Err(bad("arrays need exactly one of elemRange or elemSet")),
        };
        if elems.is_empty() && max_len > 0 {
            return Err(bad("empty element set"));
        }
        Ok(Shape::Array {
            min_len,
            max_len,
            elems,
        })
    }
}

enum Shape {
    Range(i64, i64),
    Set(Vec<Value>),
    Array {
        min_len: usize,
        max_len: usize,
        elems: Vec<i64>,
    },
}

impl Shape {
    fn size(&self) -> u128 {
        match self {
            Shape::Range(lo, hi) => (*hi as i128 - *lo as i128 + 1) as u128,
            Shape::Set(s) => s.len() as u128,
            Shape::Array {
                min_len,
                max_len,
                elems,
            } => (*min_len..=*max_len).fold(0u128, |acc, len| {
                let n = (elems.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
                acc.saturating_add(n)
            }),
        }
    }

    fn values(&self) -> Vec<Value> {
        match self {
            Shape::Range(lo, hi) => (*lo..=*hi).map(Value::Int).collect(),
            Shape::Set(s) => s.clone(),
            Shape::Array {
                min_len,
                max_len,
                elems,
            } => {
                let mut out = Vec::new();
                for len in *min_len..=*max_len {
                    let mut idx = vec![0usize; len];
                    loop {
                        out.push(Value::Arr(idx.iter().map(|&i| elems[i]).collect()));
                        if !bump(&mut idx, elems.len()) {
                            break;
                        }
                    }
                }
                out
            }
        }
    }
}

/// Odometer increment, last digit fastest. False once it wraps around.
fn bump(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// A finite domain of behaviors, as read from a domain file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DomainSpec {
    pub vars: IndexMap<String, VarDomain>,
    /// Predicate over the variables; valuations where it is not true are
    /// skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(default = "default_cap")]
    pub cap: u64,
    /// Function used to label the domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

impl DomainSpec {
    pub fn new(vars: impl IntoIterator<Item = (&'static str, VarDomain)>) -> Self {
        DomainSpec {
            vars: vars.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            filter: None,
            cap: DEFAULT_CAP,
            reference: None,
        }
    }

    pub fn with_filter(mut self, filter: &str) -> Self {
        self.filter = Some(filter.to_string());
        self
    }

    pub fn from_json(text: &str) -> Result<Self, AccuracyError> {
        serde_json::from_str(text).map_err(|e| AccuracyError::InvalidDomain(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, AccuracyError> {
        let text = std::fs::read_to_string(path).map_err(|source| AccuracyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Size of the product before filtering; saturates at `u128::MAX`.
    pub fn size(&self) -> Result<u128, AccuracyError> {
        let mut total = 1u128;
        for (name, d) in &self.vars {
            total = total.saturating_mul(d.shape(name)?.size());
        }
        Ok(total)
    }

    /// Number of valuations that pass the filter.
    pub fn count(&self) -> Result<u64, AccuracyError> {
        Ok(self.enumerate()?.count() as u64)
    }

    pub fn enumerate(&self) -> Result<Enumeration, AccuracyError> {
        let size = self.size()?;
        if size > self.cap as u128 {
            return Err(AccuracyError::DomainTooLarge {
                count: size,
                cap: self.cap,
            });
        }
        let names: Vec<String> = self.vars.keys().cloned().collect();
        let filter = match &self.filter {
            None => None,
            Some(text) => {
                let e = parse_expr(text).map_err(|e| AccuracyError::Filter(e.to_string()))?;
                let mut free = BTreeSet::new();
                free_vars(&e, &mut Vec::new(), &mut free);
                if let Some(v) = free.iter().find(|v| !names.contains(v)) {
                    return Err(AccuracyError::Filter(format!("`{v}` is not a domain variable")));
                }
                Some(e)
            }
        };
        let values = self
            .vars
            .iter()
            .map(|(name, d)| Ok(d.shape(name)?.values()))
            .collect::<Result<Vec<_>, AccuracyError>>()?;
        let exhausted = values.iter().any(Vec::is_empty);
        Ok(Enumeration {
            digits: vec![0; names.len()],
            names,
            values,
            filter,
            exhausted,
        })
    }

    /// Checks that the domain names every parameter of `f` and otherwise
    /// only `rv`.
    pub fn check_against(&self, f: &FunctionDef) -> Result<(), AccuracyError> {
        for p in &f.params {
            if !self.vars.contains_key(&p.name) {
                return Err(AccuracyError::MissingVariable(p.name.clone()));
            }
        }
        for name in self.vars.keys() {
            let known = f.param(name).is_some() || (name == "rv" && f.ret != Type::Void);
            if !known {
                return Err(AccuracyError::UnknownVariable(name.clone()));
            }
        }
        Ok(())
    }
}

/// Splits a domain valuation into the parameters of `f` and the rest.
pub fn split(v: &Valuation, f: &FunctionDef) -> (Valuation, Valuation) {
    v.iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .partition(|(k, _)| f.param(k).is_some())
}

/// Lazy walk over a domain.
#[derive(Debug, Clone)]
pub struct Enumeration {
    names: Vec<String>,
    values: Vec<Vec<Value>>,
    digits: Vec<usize>,
    filter: Option<Expr>,
    exhausted: bool,
}

impl Enumeration {
    fn current(&self) -> Valuation {
        self.names
            .iter()
            .zip(&self.digits)
            .zip(&self.values)
            .map(|((n, &d), vals)| (n.clone(), vals[d].clone()))
            .collect()
    }

    fn advance(&mut self) {
        for (i, d) in self.digits.iter_mut().enumerate().rev() {
            *d += 1;
            if *d < self.values[i].len() {
                return;
            }
            *d = 0;
        }
        self.exhausted = true;
    }
}

impl Iterator for Enumeration {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        while !self.exhausted {
            let v = self.current();
            self.advance();
            let keep = match &self.filter {
                None => true,
                Some(e) => matches!(eval_expr(e, &Env::new(&v, None)), Ok(TriBool::True)),
            };
            if keep {
                return Some(v);
            }
        }
        None
    }
}

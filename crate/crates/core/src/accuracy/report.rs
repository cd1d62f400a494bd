//! Accuracy reports, spec comparison, and their merge.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::domain::{split, DomainSpec};
use super::labeled::LabeledBehavior;
use super::spec::Specification;
use super::AccuracyError;
use crate::eval::{Fault, TriBool};
use crate::lang::{BehaviorKind, FunctionDef};
use crate::value::{format_valuation, Valuation};

pub const DEFAULT_WITNESS_CAP: usize = 100;

/// A behavior singled out by a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Finding {
    pub input: Valuation,
    pub output: Valuation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<BehaviorKind>,
    /// Why the specification was undefined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Finding {
    fn key(&self) -> (&Valuation, &Valuation, Option<BehaviorKind>) {
        (&self.input, &self.output, self.kind)
    }
}

impl PartialOrd for Finding {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Finding {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(kind) = self.kind {
            write!(f, "{kind} ")?;
        }
        write!(
            f,
            "{} -> {}",
            format_valuation(&self.input, &[]),
            format_valuation(&self.output, &[])
        )?;
        if let Some(fault) = &self.fault {
            write!(f, " ({fault})")?;
        }
        Ok(())
    }
}

/// The smallest `cap` findings of a category, plus the exact total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessList {
    pub total: u64,
    pub items: Vec<Finding>,
}

impl WitnessList {
    fn new() -> Self {
        WitnessList {
            total: 0,
            items: Vec::new(),
        }
    }

    fn push(&mut self, item: Finding, cap: usize) {
        self.total += 1;
        let at = self.items.binary_search(&item).unwrap_or_else(|i| i);
        if at < cap {
            self.items.insert(at, item);
            self.items.truncate(cap);
        }
    }

    fn merge(&mut self, other: WitnessList, cap: usize) {
        self.total += other.total;
        for item in other.items {
            let at = self.items.binary_search(&item).unwrap_or_else(|i| i);
            self.items.insert(at, item);
        }
        self.items.truncate(cap);
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccuracyVerdict {
    Accurate,
    UnderConstrained,
    OverConstrained,
    Both,
    UndecidableAtThisDomain,
}

impl fmt::Display for AccuracyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccuracyVerdict::Accurate => "accurate",
            AccuracyVerdict::UnderConstrained => "under-constrained",
            AccuracyVerdict::OverConstrained => "over-constrained",
            AccuracyVerdict::Both => "both",
            AccuracyVerdict::UndecidableAtThisDomain => "undecidable-at-this-domain",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccuracyOptions {
    pub witness_cap: usize,
    /// Stop at the first witness of any category.
    pub fail_fast: bool,
}

impl Default for AccuracyOptions {
    fn default() -> Self {
        AccuracyOptions {
            witness_cap: DEFAULT_WITNESS_CAP,
            fail_fast: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AccuracyReport {
    pub verdict: AccuracyVerdict,
    /// Bad behaviors the specification admits.
    pub under_witnesses: WitnessList,
    /// Good behaviors the specification rejects.
    pub over_witnesses: WitnessList,
    pub undefined_witnesses: WitnessList,
    /// Behaviors examined, dontCare included.
    pub checked: u64,
    pub dont_care: u64,
    pub witness_cap: usize,
    pub stopped_early: bool,
}

impl AccuracyReport {
    pub fn empty(witness_cap: usize) -> Self {
        AccuracyReport {
            verdict: AccuracyVerdict::Accurate,
            under_witnesses: WitnessList::new(),
            over_witnesses: WitnessList::new(),
            undefined_witnesses: WitnessList::new(),
            checked: 0,
            dont_care: 0,
            witness_cap,
            stopped_early: false,
        }
    }

    fn classify(under: bool, over: bool, undefined: bool) -> AccuracyVerdict {
        match (under, over, undefined) {
            (true, true, _) => AccuracyVerdict::Both,
            (true, false, _) => AccuracyVerdict::UnderConstrained,
            (false, true, _) => AccuracyVerdict::OverConstrained,
            (false, false, true) => AccuracyVerdict::UndecidableAtThisDomain,
            (false, false, false) => AccuracyVerdict::Accurate,
        }
    }

    fn refresh(&mut self) {
        self.verdict = Self::classify(
            !self.under_witnesses.is_empty(),
            !self.over_witnesses.is_empty(),
            !self.undefined_witnesses.is_empty(),
        );
    }

    pub fn has_witnesses(&self) -> bool {
        self.verdict != AccuracyVerdict::Accurate
    }

    /// Adds one behavior's outcome. Returns true if it is a witness.
    pub fn record(&mut self, spec: &dyn Specification, b: &LabeledBehavior) -> bool {
        self.checked += 1;
        if b.kind == BehaviorKind::DontCare {
            self.dont_care += 1;
            return false;
        }
        let sat = spec.satisfies(&b.input, &b.output);
        let finding = |fault| Finding {
            input: b.input.clone(),
            output: b.output.clone(),
            kind: Some(b.kind),
            fault,
        };
        let cap = self.witness_cap;
        let hit = match (&sat, b.kind) {
            (TriBool::Undefined(f), _) => {
                self.undefined_witnesses.push(finding(Some(f.clone())), cap);
                true
            }
            (TriBool::True, BehaviorKind::Bad) => {
                self.under_witnesses.push(finding(None), cap);
                true
            }
            (TriBool::False, BehaviorKind::Good) => {
                self.over_witnesses.push(finding(None), cap);
                true
            }
            _ => false,
        };
        if hit {
            self.refresh();
        }
        hit
    }

    /// Combines reports over disjoint parts of a labeled set. The result
    /// does not depend on how the set was split.
    pub fn merge(mut self, other: AccuracyReport) -> AccuracyReport {
        let cap = self.witness_cap.min(other.witness_cap);
        self.witness_cap = cap;
        self.under_witnesses.merge(other.under_witnesses, cap);
        self.over_witnesses.merge(other.over_witnesses, cap);
        self.undefined_witnesses.merge(other.undefined_witnesses, cap);
        self.checked += other.checked;
        self.dont_care += other.dont_care;
        self.stopped_early |= other.stopped_early;
        self.refresh();
        self
    }
}

impl fmt::Display for AccuracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {} (on this domain)", self.verdict)?;
        writeln!(f, "checked {} behaviors, {} dontCare", self.checked, self.dont_care)?;
        if self.stopped_early {
            writeln!(f, "stopped at the first witness")?;
        }
        for (title, list) in [
            ("under-constrained witnesses", &self.under_witnesses),
            ("over-constrained witnesses", &self.over_witnesses),
            ("undefined", &self.undefined_witnesses),
        ] {
            writeln!(f, "{title}: {}", list.total)?;
            for w in &list.items {
                writeln!(f, "  {w}")?;
            }
            if list.total > list.items.len() as u64 {
                writeln!(f, "  ... {} more", list.total - list.items.len() as u64)?;
            }
        }
        Ok(())
    }
}

/// Classifies each behavior by whether `spec` admits it.
pub fn check_accuracy<'b>(
    spec: &dyn Specification,
    behaviors: impl IntoIterator<Item = &'b LabeledBehavior>,
    options: AccuracyOptions,
) -> AccuracyReport {
    let mut report = AccuracyReport::empty(options.witness_cap);
    for b in behaviors {
        if report.record(spec, b) && options.fail_fast {
            report.stopped_early = true;
            break;
        }
    }
    report
}

/// Where two specifications disagree over a domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    /// Behaviors only the first specification admits.
    pub left_only: WitnessList,
    /// Behaviors only the second specification admits.
    pub right_only: WitnessList,
    pub checked: u64,
}

impl Comparison {
    pub fn is_equivalent(&self) -> bool {
        self.left_only.is_empty() && self.right_only.is_empty()
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equivalent() {
            return writeln!(f, "equivalent on domain ({} behaviors)", self.checked);
        }
        writeln!(f, "differ on {} of {} behaviors", self.left_only.total + self.right_only.total, self.checked)?;
        for (title, list) in [("only the first admits", &self.left_only), ("only the second admits", &self.right_only)] {
            writeln!(f, "{title}: {}", list.total)?;
            for w in &list.items {
                writeln!(f, "  {w}")?;
            }
        }
        Ok(())
    }
}

/// Enumerates `domain` and reports every behavior that exactly one of the
/// specifications admits. An undefined outcome does not admit.
pub fn compare_specs(
    left: &dyn Specification,
    right: &dyn Specification,
    domain: &DomainSpec,
    f: &FunctionDef,
    witness_cap: usize,
) -> Result<Comparison, AccuracyError> {
    domain.check_against(f)?;
    let mut out = Comparison {
        left_only: WitnessList::new(),
        right_only: WitnessList::new(),
        checked: 0,
    };
    for v in domain.enumerate()? {
        let (input, output) = split(&v, f);
        out.checked += 1;
        let l = left.satisfies(&input, &output).is_true();
        let r = right.satisfies(&input, &output).is_true();
        if l == r {
            continue;
        }
        let finding = Finding {
            input,
            output,
            kind: None,
            fault: None,
        };
        if l {
            out.left_only.push(finding, witness_cap);
        } else {
            out.right_only.push(finding, witness_cap);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accuracy::{generate_spec, LabeledSet, TableSpec};
    use crate::value::valuation;

    fn b(kind: BehaviorKind, x: i64, rv: i64) -> LabeledBehavior {
        LabeledBehavior::new(kind, valuation([("x", x)]), valuation([("rv", rv)]))
    }

    #[test]
    fn verdicts() {
        use AccuracyVerdict::*;
        assert_eq!(AccuracyReport::classify(false, false, false), Accurate);
        assert_eq!(AccuracyReport::classify(false, false, true), UndecidableAtThisDomain);
        assert_eq!(AccuracyReport::classify(true, false, true), UnderConstrained);
        assert_eq!(AccuracyReport::classify(false, true, false), OverConstrained);
        assert_eq!(AccuracyReport::classify(true, true, false), Both);
        assert_eq!(serde_json::to_value(UndecidableAtThisDomain).unwrap(), "undecidable-at-this-domain");
    }

    #[test]
    fn witnesses_and_cap() {
        let spec = TableSpec::default(); // P false everywhere: admits all.
        let bads: Vec<_> = (0..10).rev().map(|x| b(BehaviorKind::Bad, x, 0)).collect();
        let r = check_accuracy(
            &spec,
            &bads,
            AccuracyOptions {
                witness_cap: 3,
                fail_fast: false,
            },
        );
        assert_eq!(r.verdict, AccuracyVerdict::UnderConstrained);
        assert_eq!(r.under_witnesses.total, 10);
        let xs: Vec<_> = r.under_witnesses.items.iter().map(|f| f.input["x"].clone()).collect();
        assert_eq!(xs, vec![0.into(), 1.into(), 2.into()]);
        let r = check_accuracy(
            &spec,
            &bads,
            AccuracyOptions {
                witness_cap: 3,
                fail_fast: true,
            },
        );
        assert!(r.stopped_early);
        assert_eq!(r.checked, 1);
    }

    #[test]
    fn generated_table_is_accurate() {
        let set = LabeledSet::new([
            b(BehaviorKind::Good, 1, 1),
            b(BehaviorKind::Bad, 1, 2),
            b(BehaviorKind::DontCare, 2, 0),
        ])
        .unwrap();
        let r = check_accuracy(&generate_spec(&set), set.behaviors(), AccuracyOptions::default());
        assert_eq!(r.verdict, AccuracyVerdict::Accurate);
        assert_eq!((r.checked, r.dont_care), (3, 1));
        assert!(r.to_string().starts_with("verdict: accurate"));
    }
}

use std::time::{Duration, Instant};

use speccheck_core::accuracy::{
    check_accuracy, check_program, compare_specs, generate_spec, AccuracyOptions, AccuracyVerdict, DomainSpec,
    LabeledBehavior, LabeledSet, ManualSpec, Specification, VarDomain,
};
use speccheck_core::corpus;
use speccheck_core::eval::{Budget, TriBool};
use speccheck_core::lang::{apply_edit, load_program, AnnotatedProgram, BehaviorKind, Edit, EditKind};
use speccheck_core::value::{valuation, Valuation, Value};

/// Every array of length 1..=3 over {0,1,2}, built without the library.
fn arrays() -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for len in 1..=3u32 {
        for code in 0..3i64.pow(len) {
            let mut a = Vec::new();
            let mut c = code;
            for _ in 0..len {
                a.push(c % 3);
                c /= 3;
            }
            a.reverse();
            out.push(a);
        }
    }
    out
}

fn rightmost(a: &[i64], l: usize, r: usize, e: i64) -> i64 {
    (l..=r).rev().find(|&k| a[k] == e).map_or(-1, |k| k as i64)
}

fn input(a: &[i64], l: usize, r: usize, e: i64) -> Valuation {
    valuation([
        ("a", Value::Arr(a.to_vec())),
        ("l", Value::Int(l as i64)),
        ("r", Value::Int(r as i64)),
        ("e", Value::Int(e)),
    ])
}

/// The linear search domain, labeled by the brute-force rightmost oracle.
fn oracle_labels() -> LabeledSet {
    let mut out = Vec::new();
    for a in arrays() {
        for e in 0..=2 {
            for l in 0..a.len() {
                for r in l..a.len() {
                    let want = rightmost(&a, l, r, e);
                    for rv in [-1, 0, 1, 2] {
                        let kind = if rv == want {
                            BehaviorKind::Good
                        } else {
                            BehaviorKind::Bad
                        };
                        out.push(LabeledBehavior::new(kind, input(&a, l, r, e), valuation([("rv", rv)])));
                    }
                }
            }
        }
    }
    LabeledSet::new(out).unwrap()
}

fn domain() -> DomainSpec {
    DomainSpec::from_json(corpus::LINEAR_SEARCH_DOMAIN).unwrap()
}

fn load(src: &str) -> AnnotatedProgram {
    load_program(src).unwrap().0
}

fn ints(v: &Valuation) -> (Vec<i64>, usize, usize, i64) {
    let Value::Arr(a) = &v["a"] else { panic!() };
    let int = |k: &str| match v[k] {
        Value::Int(n) => n,
        _ => panic!(),
    };
    (a.clone(), int("l") as usize, int("r") as usize, int("e"))
}

#[test]
fn domain_count_matches_brute_force() {
    // 39 arrays; (l, r) pairs per length 1, 3, 6; 3 values of e; 4 of rv.
    let expected = (3 + 9 * 3 + 27 * 6) * 3 * 4;
    assert_eq!(oracle_labels().len(), expected);
    assert_eq!(domain().count().unwrap(), expected as u64);
    let small = DomainSpec::new([("a", VarDomain::array([1, 2], [0, 1])), ("e", VarDomain::range(0, 1))]);
    assert_eq!(small.count().unwrap(), 12);
}

#[test]
fn reference_labels_match_the_oracle() {
    let program = load(corpus::LINEAR_SEARCH_FINAL);
    let f = program.entry_function();
    let mut labeler =
        speccheck_core::accuracy::ReferenceLabeler::new(&program, "rightmostReference", Budget::default()).unwrap();
    let from_reference = labeler.label_domain(&domain(), f).unwrap();
    let oracle = oracle_labels();
    assert_eq!(from_reference.len(), oracle.len());
    for b in oracle.behaviors() {
        assert_eq!(from_reference.get(&b.input, &b.output), Some(b.kind));
    }
}

#[test]
fn final_spec_is_accurate() {
    let start = Instant::now();
    let program = load(corpus::LINEAR_SEARCH_FINAL);
    let labels = oracle_labels();
    let report = check_accuracy(&ManualSpec::new(&program), labels.behaviors(), AccuracyOptions::default());
    assert_eq!(report.verdict, AccuracyVerdict::Accurate, "{report}");
    assert_eq!(report.checked, labels.len() as u64);
    let via_domain = check_program(&program, &domain(), Budget::default(), AccuracyOptions::default()).unwrap();
    assert_eq!(via_domain, report);
    assert!(start.elapsed() < Duration::from_secs(30));
}

#[test]
fn pre_pair6_spec_is_over_constrained() {
    let program = load(corpus::LINEAR_SEARCH_PRE_PAIR6);
    let spec = ManualSpec::new(&program);
    let report = check_accuracy(&spec, oracle_labels().behaviors(), AccuracyOptions::default());
    assert!(report.over_witnesses.total >= 1, "{report}");
    // It also admits bad behaviors: nothing ties rv to [l, r] or to the
    // rightmost match.
    assert_eq!(report.verdict, AccuracyVerdict::Both);
    let mut pair6_shape = false;
    for w in &report.over_witnesses.items {
        let (a, l, r, e) = ints(&w.input);
        assert_eq!(w.output["rv"], Value::Int(rightmost(&a, l, r, e)), "not good: {w}");
        assert_eq!(spec.satisfies(&w.input, &w.output), TriBool::False);
        let outside = a.iter().enumerate().any(|(k, &x)| x == e && (k < l || k > r));
        pair6_shape |= outside && w.output["rv"] == Value::Int(-1);
    }
    assert!(pair6_shape);
}

#[test]
fn pre_pair4_spec_is_under_constrained() {
    let program = load(corpus::LINEAR_SEARCH_PRE_PAIR4);
    let spec = ManualSpec::new(&program);
    let report = check_accuracy(&spec, oracle_labels().behaviors(), AccuracyOptions::default());
    assert!(report.under_witnesses.total >= 1, "{report}");
    assert!(report.over_witnesses.is_empty(), "{report}");
    let mut pair4_shape = false;
    for w in &report.under_witnesses.items {
        let (a, l, r, e) = ints(&w.input);
        assert_ne!(w.output["rv"], Value::Int(rightmost(&a, l, r, e)), "not bad: {w}");
        assert!(spec.satisfies(&w.input, &w.output).is_true());
        pair4_shape |= a[l..=r].contains(&e) && w.output["rv"] == Value::Int(-1);
    }
    assert!(pair4_shape);
}

#[test]
fn final_spec_matches_generated_table() {
    let program = load(corpus::LINEAR_SEARCH_FINAL);
    let table = generate_spec(&oracle_labels());
    let cmp = compare_specs(&ManualSpec::new(&program), &table, &domain(), program.entry_function(), 100).unwrap();
    assert!(cmp.is_equivalent(), "{cmp}");
    let same = compare_specs(&table, &table, &domain(), program.entry_function(), 100).unwrap();
    assert!(same.is_equivalent());
}

#[test]
fn leftmost_spec_differs_exactly_on_repeated_matches() {
    let final_program = load(corpus::LINEAR_SEARCH_FINAL);
    let leftmost = apply_edit(
        &final_program,
        &Edit::new(
            EditKind::Post,
            "0 <= l <= r < a.size;
             (rv != -1) => (l <= rv <= r && a[rv] = e) && forall int k:[l .. rv - 1] (a[k] != e);
             (rv = -1) => forall int k:[l .. r] (e != a[k])",
        ),
    )
    .unwrap()
    .program;
    let table = generate_spec(&oracle_labels());
    let cmp = compare_specs(&ManualSpec::new(&leftmost), &table, &domain(), leftmost.entry_function(), 10_000).unwrap();

    let mut expected_left = Vec::new();
    let mut expected_right = Vec::new();
    for a in arrays() {
        for e in 0..=2 {
            for l in 0..a.len() {
                for r in l..a.len() {
                    let hits: Vec<usize> = (l..=r).filter(|&k| a[k] == e).collect();
                    if hits.len() >= 2 {
                        expected_left.push((input(&a, l, r, e), hits[0] as i64));
                        expected_right.push((input(&a, l, r, e), *hits.last().unwrap() as i64));
                    }
                }
            }
        }
    }
    let got = |list: &speccheck_core::accuracy::WitnessList| {
        let mut v: Vec<_> = list
            .items
            .iter()
            .map(|w| match w.output["rv"] {
                Value::Int(n) => (w.input.clone(), n),
                _ => panic!(),
            })
            .collect();
        v.sort();
        v
    };
    expected_left.sort();
    expected_right.sort();
    assert!(!expected_left.is_empty());
    assert_eq!(got(&cmp.left_only), expected_left);
    assert_eq!(got(&cmp.right_only), expected_right);
}

#[test]
fn fail_fast_stops_at_the_first_witness() {
    let program = load(corpus::LINEAR_SEARCH_PRE_PAIR4);
    let options = AccuracyOptions {
        fail_fast: true,
        ..Default::default()
    };
    let report = check_program(&program, &domain(), Budget::default(), options).unwrap();
    assert!(report.stopped_early);
    assert_eq!(report.under_witnesses.total + report.undefined_witnesses.total, 1);
}

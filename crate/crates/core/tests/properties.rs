use proptest::prelude::*;

use speccheck_core::accuracy::{
    check_accuracy, generate_spec, AccuracyOptions, AccuracyReport, AccuracyVerdict, DomainSpec, LabeledBehavior,
    LabeledSet, ManualSpec, Specification, VarDomain,
};
use speccheck_core::eval::{eval_expr, Env, FaultKind, TriBool};
use speccheck_core::lang::pretty::print_expr;
use speccheck_core::lang::{load_program, parse_expr, BehaviorKind};
use speccheck_core::value::{valuation, Valuation, Value};

/// Small integer terms over `x`, `y`, `k`, `j` and the array `a`. Indexing
/// and division can fault.
fn int_leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (-3i64..=3).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("k".to_string()),
        Just("j".to_string()),
        Just("a.size".to_string()),
    ]
}

fn int_term() -> impl Strategy<Value = String> {
    int_leaf().prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "%"]), inner.clone())
                .prop_map(|(l, op, r)| format!("({l} {op} {r})")),
            inner.prop_map(|i| format!("a[{i}]")),
        ]
    })
}

fn bool_atom() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("true".to_string()),
        Just("false".to_string()),
        (int_term(), prop::sample::select(vec!["<", "<=", "=", "!=", ">", ">="]), int_term())
            .prop_map(|(l, op, r)| format!("{l} {op} {r}")),
        (int_term(), int_term(), int_term()).prop_map(|(a, b, c)| format!("{a} <= {b} < {c}")),
    ]
}

fn bool_expr() -> impl Strategy<Value = String> {
    bool_atom().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|b| format!("!({b})")),
            (inner.clone(), prop::sample::select(vec!["&&", "||", "=>"]), inner.clone())
                .prop_map(|(l, op, r)| format!("({l} {op} {r})")),
            (
                prop::sample::select(vec!["forall", "exists"]),
                prop::sample::select(vec!["k", "j"]),
                int_leaf(),
                int_leaf(),
                inner
            )
                .prop_map(|(q, v, lo, hi, b)| format!("{q} int {v}:[{lo} .. {hi}] ({b})")),
        ]
    })
}

fn env() -> impl Strategy<Value = Valuation> {
    (
        -3i64..=3,
        -3i64..=3,
        -3i64..=3,
        -3i64..=3,
        prop::collection::vec(-3i64..=3, 0..4),
    )
        .prop_map(|(x, y, k, j, a)| {
            valuation([
                ("x", Value::Int(x)),
                ("y", Value::Int(y)),
                ("k", Value::Int(k)),
                ("j", Value::Int(j)),
                ("a", Value::Arr(a)),
            ])
        })
}

fn eval(src: &str, env: &Valuation) -> TriBool {
    let e = parse_expr(src).unwrap_or_else(|err| panic!("{src}: {err}"));
    eval_expr(&e, &Env::new(env, None)).unwrap()
}

/// The truth value, and for undefined results the kind of fault. Source
/// positions differ between equivalent texts.
fn shape(t: &TriBool) -> (Option<bool>, Option<FaultKind>) {
    (t.as_bool(), t.fault().map(|f| f.kind))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn de_morgan(a in bool_expr(), b in bool_expr(), env in env()) {
        prop_assert_eq!(
            shape(&eval(&format!("!(({a}) && ({b}))"), &env)),
            shape(&eval(&format!("!({a}) || !({b})"), &env))
        );
        prop_assert_eq!(
            shape(&eval(&format!("!(({a}) || ({b}))"), &env)),
            shape(&eval(&format!("!({a}) && !({b})"), &env))
        );
    }

    #[test]
    fn implication_is_not_or(a in bool_expr(), b in bool_expr(), env in env()) {
        prop_assert_eq!(
            shape(&eval(&format!("({a}) => ({b})"), &env)),
            shape(&eval(&format!("!({a}) || ({b})"), &env))
        );
    }

    #[test]
    fn forall_is_not_exists_not(lo in int_leaf(), hi in int_leaf(), b in bool_expr(), env in env()) {
        prop_assert_eq!(
            shape(&eval(&format!("forall int k:[{lo} .. {hi}] ({b})"), &env)),
            shape(&eval(&format!("!(exists int k:[{lo} .. {hi}] (!({b})))"), &env))
        );
    }

    #[test]
    fn multi_binder_quantifiers_nest(
        q in prop::sample::select(vec!["forall", "exists"]),
        lo1 in int_leaf(), hi1 in int_leaf(), lo2 in int_leaf(), hi2 in int_leaf(),
        b in bool_expr(),
        env in env(),
    ) {
        let multi = format!("{q} (int k:[{lo1} .. {hi1}], int j:[{lo2} .. {hi2}]) ({b})");
        let nested = format!("{q} int k:[{lo1} .. {hi1}] ({q} int j:[{lo2} .. {hi2}] ({b}))");
        prop_assert_eq!(shape(&eval(&multi, &env)), shape(&eval(&nested, &env)));
    }

    #[test]
    fn empty_ranges(b in bool_expr(), env in env()) {
        prop_assert_eq!(eval(&format!("forall int k:[1 .. 0] ({b})"), &env), TriBool::True);
        prop_assert_eq!(eval(&format!("exists int k:[1 .. 0] ({b})"), &env), TriBool::False);
    }

    #[test]
    fn printed_expressions_parse_back(b in bool_expr()) {
        let e = parse_expr(&b).unwrap();
        let printed = print_expr(&e);
        let again = parse_expr(&printed).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(print_expr(&again), printed);
    }

    #[test]
    fn chained_comparisons_are_conjunctions(a in int_term(), b in int_term(), c in int_term()) {
        prop_assert_eq!(
            parse_expr(&format!("{a} <= {b} < {c}")).unwrap(),
            parse_expr(&format!("{a} <= {b} && {b} < {c}")).unwrap()
        );
    }
}

/// Random labeled sets over a single int input and output.
fn labeled_behaviors() -> impl Strategy<Value = Vec<LabeledBehavior>> {
    prop::collection::btree_map(
        (0i64..4, 0i64..4),
        prop::sample::select(vec![BehaviorKind::Good, BehaviorKind::Bad, BehaviorKind::DontCare]),
        0..16,
    )
    .prop_map(|m| {
        m.into_iter()
            .map(|((x, rv), kind)| LabeledBehavior::new(kind, valuation([("x", x)]), valuation([("rv", rv)])))
            .collect()
    })
}

const HALF: &str = "int half(int x) {
    @pre s (x >= 1);
    @post s (rv * 2 <= x && x < rv * 2 + 2);
}";

fn check(spec: &dyn Specification, behaviors: &[LabeledBehavior], cap: usize) -> AccuracyReport {
    check_accuracy(
        spec,
        behaviors,
        AccuracyOptions {
            witness_cap: cap,
            fail_fast: false,
        },
    )
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn generated_spec_is_accurate_on_its_labels(behaviors in labeled_behaviors()) {
        let set = LabeledSet::new(behaviors).unwrap();
        let report = check(&generate_spec(&set), set.behaviors(), 100);
        prop_assert_eq!(report.verdict, AccuracyVerdict::Accurate);
    }

    #[test]
    fn more_evidence_keeps_old_witnesses(first in labeled_behaviors(), more in labeled_behaviors()) {
        let program = load_program(HALF).unwrap().0;
        let spec = ManualSpec::new(&program);
        let small = LabeledSet::new(first).unwrap();
        let mut big = small.clone();
        // Conflicting additions are skipped; the rest still extend the set.
        for b in more {
            let _ = big.extend([b]);
        }
        let before = check(&spec, small.behaviors(), usize::MAX);
        let after = check(&spec, big.behaviors(), usize::MAX);
        for (old, new) in [
            (&before.under_witnesses, &after.under_witnesses),
            (&before.over_witnesses, &after.over_witnesses),
            (&before.undefined_witnesses, &after.undefined_witnesses),
        ] {
            for w in &old.items {
                prop_assert!(new.items.contains(w));
            }
        }
    }

    #[test]
    fn merge_ignores_partitioning(behaviors in labeled_behaviors(), cut in 0usize..16, cap in 1usize..6) {
        let program = load_program(HALF).unwrap().0;
        let spec = ManualSpec::new(&program);
        let cut = cut.min(behaviors.len());
        let whole = check(&spec, &behaviors, cap);
        let (l, r) = behaviors.split_at(cut);
        let left = check(&spec, l, cap);
        let right = check(&spec, r, cap);
        prop_assert_eq!(&left.clone().merge(right.clone()), &whole);
        prop_assert_eq!(&right.merge(left), &whole);
    }

    #[test]
    fn enumeration_is_deterministic_and_counted(
        lo in -2i64..2, width in 0i64..3, max_len in 0usize..3, elems in prop::collection::btree_set(-2i64..3, 1..3),
    ) {
        let mut d = DomainSpec::new([
            ("x", VarDomain::range(lo, lo + width)),
            ("a", VarDomain { len_range: Some([0, max_len]), elem_set: Some(elems.iter().copied().collect()), ..Default::default() }),
        ]);
        d.filter = Some("x < a.size + 1".into());
        let first: Vec<_> = d.enumerate().unwrap().collect();
        let second: Vec<_> = d.enumerate().unwrap().collect();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.len() as u64, d.count().unwrap());
        // Independent count of the product under the filter.
        let n = elems.len();
        let mut expected = 0;
        for x in lo..=lo + width {
            for len in 0..=max_len {
                if x < len as i64 + 1 {
                    expected += n.pow(len as u32);
                }
            }
        }
        prop_assert_eq!(first.len(), expected);
    }
}

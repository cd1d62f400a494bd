use speccheck_core::corpus::JUSTIFY_SAME_WORDS;
use speccheck_core::eval::{eval_post_on_behavior, eval_pre_on_behavior, exec_function, Budget, ExecOutcome, TriBool};
use speccheck_core::lang::{load_program, BehaviorKind};
use speccheck_core::value::Value;

/// Words of the paragraph starting at `l`, ignoring the spacing and line
/// breaks between them.
fn words(s: &[i64], l: usize) -> Vec<Vec<i64>> {
    s[l..]
        .split(|&c| c == 32 || c == 10)
        .filter(|w| !w.is_empty())
        .map(|w| w.to_vec())
        .collect()
}

fn arr(v: &Value) -> Vec<i64> {
    match v {
        Value::Arr(a) => a.clone(),
        other => panic!("not an array: {other}"),
    }
}

fn int(v: &Value) -> i64 {
    match v {
        Value::Int(n) => *n,
        other => panic!("not an int: {other}"),
    }
}

#[test]
fn postcondition_agrees_with_labels() {
    let (program, _) = load_program(JUSTIFY_SAME_WORDS).unwrap();
    let f = program.entry_function();
    assert_eq!(f.behavior_count(), 7);
    for (i, b) in f.behaviors().enumerate() {
        let p = eval_pre_on_behavior(&program, b, Budget::default()).unwrap();
        assert_eq!(p.value, TriBool::True, "behavior {i}: {p:?}");
        let q = eval_post_on_behavior(&program, b, Budget::default()).unwrap();
        let expected = TriBool::from(b.kind == BehaviorKind::Good);
        assert_eq!(q.value, expected, "behavior {i}");
    }
}

#[test]
fn implementation_agrees_with_word_split() {
    let (program, _) = load_program(JUSTIFY_SAME_WORDS).unwrap();
    for (i, b) in program.entry_function().behaviors().enumerate() {
        let p1 = arr(&b.input["p1"]);
        let p2 = arr(&b.input["p2"]);
        let l1 = int(&b.input["l1"]) as usize;
        let l2 = int(&b.input["l2"]) as usize;
        let expected = words(&p1, l1) == words(&p2, l2);
        match exec_function(&program, "sameWords", &b.input, Budget::default()) {
            ExecOutcome::Returned { rv, .. } => {
                assert_eq!(rv, Some(Value::Bool(expected)), "behavior {i}")
            }
            other => panic!("behavior {i}: {other:?}"),
        }
    }
}

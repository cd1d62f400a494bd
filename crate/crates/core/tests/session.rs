use proptest::prelude::*;

use speccheck_core::corpus;
use speccheck_core::correction::Step;
use speccheck_core::lang::{BehaviorKind, Edit, EditKind};
use speccheck_core::session::{Event, Session, SessionError, Settings};

#[derive(Debug, Clone)]
enum Command {
    Step,
    Answer(bool),
    Edit(usize),
    Restart,
    Choose(usize),
}

const EDITS: [(EditKind, &str); 6] = [
    (EditKind::Pre, "l <= r"),
    (EditKind::Post, "(rv != -1) => a[rv] = e"),
    (EditKind::Body, corpus::bodies::LEFT_TO_RIGHT),
    (EditKind::Body, corpus::bodies::RIGHT_TO_LEFT),
    (
        EditKind::BehaviorsAppend,
        "good { input={a={5,2,7,6,7,8}, l=1, r=5, e=7} output={rv=4} }",
    ),
    // Rejected: `q` is not in scope.
    (EditKind::Pre, "l <= q"),
];

fn command() -> impl Strategy<Value = Command> {
    prop_oneof![
        4 => Just(Command::Step),
        2 => any::<bool>().prop_map(Command::Answer),
        2 => (0..EDITS.len()).prop_map(Command::Edit),
        1 => Just(Command::Restart),
        1 => (0usize..3).prop_map(Command::Choose),
    ]
}

fn run(s: &mut Session, c: &Command) {
    match c {
        Command::Step => {
            let _ = s.step();
        }
        Command::Answer(g) => {
            let _ = s.answer(*g);
        }
        Command::Edit(i) => {
            let (kind, text) = EDITS[*i];
            s.apply_edit(Edit::new(kind, text));
        }
        Command::Restart => s.restart(),
        Command::Choose(n) => {
            let _ = s.choose(*n);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn replaying_the_log_rebuilds_the_session(
        start in prop::sample::select(vec![corpus::LINEAR_SEARCH_TRACE, corpus::LINEAR_SEARCH_ANNOTATED, corpus::SORTED_SEARCH]),
        commands in prop::collection::vec(command(), 0..40),
    ) {
        let mut s = Session::create(start, Settings::default()).unwrap();
        for c in &commands {
            run(&mut s, c);
        }
        let back = Session::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.state(), s.state());
        prop_assert_eq!(back.source(), s.source());
        prop_assert_eq!(back.log(), s.log());
        let replayed = Session::replay(s.id().to_string(), Settings::default(), s.log()).unwrap();
        prop_assert_eq!(replayed.state(), s.state());
    }
}

#[test]
fn spec_only_sessions() {
    let s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).unwrap();
    assert!(s.is_spec_only());
    assert!(s.state().spec_only);
    let s = Session::create(corpus::LINEAR_SEARCH_ANNOTATED, Settings::default()).unwrap();
    assert!(!s.is_spec_only());
}

#[test]
fn appending_behaviors_grows_the_queue() {
    let mut s = Session::create(corpus::LINEAR_SEARCH_ANNOTATED, Settings::default()).unwrap();
    let before = s.behavior_count();
    let out = s.apply_edit(Edit::new(
        EditKind::BehaviorsAppend,
        "good { input={a={5,2,7,6,7,8}, l=1, r=5, e=7} output={rv=4} }
         bad { input={a={5,2,7,6,7,8}, l=1, r=5, e=7} output={rv=2} }",
    ));
    assert!(out.applied);
    assert_eq!(s.behavior_count(), before + 2);
}

#[test]
fn return_instead_of_break() {
    let mut s = Session::create(corpus::LINEAR_SEARCH_ANNOTATED, Settings::default()).unwrap();
    let body = corpus::bodies::LEFT_TO_RIGHT;
    assert!(s.apply_edit(Edit::new(EditKind::Body, body)).applied);
    s.step().unwrap();
    s.step().unwrap();
    s.step().unwrap();
    // Pair 2's output matches its good behavior, so no question is asked.
    let Step::Verdict(v) = s.step().unwrap() else { panic!() };
    assert_eq!(v.output.unwrap()["rv"], 1.into());
    assert!(v.action.is_skip());
}

#[test]
fn save_errors_leave_the_session_alone() {
    let mut s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).unwrap();
    s.step().unwrap();
    let before = s.state();
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/session.json");
    assert!(matches!(s.save(&missing), Err(SessionError::Io { .. })));
    assert_eq!(s.state(), before);

    let path = dir.path().join("session.json");
    s.save(&path).unwrap();
    let mut back = Session::load(&path).unwrap();
    assert_eq!(back.step().unwrap(), s.step().unwrap());
}

#[test]
fn tampered_logs_are_rejected() {
    let mut s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).unwrap();
    s.step().unwrap();
    let mut log = s.log().to_vec();
    log.push(Event::Stepped { step: Step::Done });
    assert!(matches!(
        Session::replay("x".into(), Settings::default(), &log),
        Err(SessionError::Corrupt(_))
    ));
}

#[test]
fn recorded_behaviors_are_evaluated_without_the_body() {
    let s = Session::create(corpus::LINEAR_SEARCH_FINAL, Settings::default()).unwrap();
    let truths = s.evaluate_behaviors().unwrap();
    assert_eq!(truths.len(), s.behavior_count());
    assert_eq!(s.log().len(), 1);
    for t in truths {
        match t.kind {
            BehaviorKind::Good => assert!(t.p_truth.is_true() && t.q_truth.is_true(), "{t:?}"),
            BehaviorKind::Bad => assert!(t.p_truth.is_true() && t.q_truth.is_false(), "{t:?}"),
            BehaviorKind::DontCare => assert!(t.p_truth.is_false(), "{t:?}"),
        }
    }
}

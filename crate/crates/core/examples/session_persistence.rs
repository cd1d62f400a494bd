//! A session is its event log: save it mid-refinement, load it back, and
//! carry on where it stopped.

use speccheck_core::corpus;
use speccheck_core::correction::Step;
use speccheck_core::lang::{Edit, EditKind};
use speccheck_core::session::{Session, Settings};

fn describe(step: &Step) -> String {
    match step {
        Step::Verdict(v) => v.line(),
        Step::Query(q) => format!("question about behavior #{}", q.behavior_index + 1),
        Step::Done => "done".into(),
    }
}

fn main() {
    let mut s = Session::create(corpus::LINEAR_SEARCH_TRACE, Settings::default()).expect("valid program");
    for _ in 0..2 {
        println!("{}", describe(&s.step().unwrap()));
    }
    let outcome = s.apply_edit(Edit::new(EditKind::Pre, "l <= r"));
    println!("edit applied: {}", outcome.applied);
    let rejected = s.apply_edit(Edit::new(EditKind::Pre, "l <= q"));
    println!("bad edit applied: {} ({})", rejected.applied, rejected.diagnostics[0]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("session.json");
    s.save(&path).unwrap();
    println!("\nsaved {} events to {}", s.log().len(), path.display());

    let mut back = Session::load(&path).unwrap();
    assert_eq!(back.state(), s.state());
    println!("resumed at behavior {}", back.cursor() + 1);
    for _ in 0..2 {
        println!("{}", describe(&back.step().unwrap()));
    }
    println!("\nlog:");
    for event in back.log() {
        println!("  {}", serde_json::to_string(event).unwrap());
    }
}

//! The sameWords specification from a text-justification checker: a
//! recursive postcondition over character arrays, evaluated on the
//! recorded behaviors and then against the implementation.

use speccheck_core::corpus;
use speccheck_core::eval::{exec_function, Budget};
use speccheck_core::session::{Session, Settings};
use speccheck_core::value::Value;

fn text(v: &Value) -> String {
    match v {
        Value::Arr(cs) => cs
            .iter()
            .map(|&c| if c == 10 { 'N' } else { char::from_u32(c as u32).unwrap_or('?') })
            .collect(),
        other => other.to_string(),
    }
}

fn main() {
    let settings = Settings {
        budget: Budget {
            max_depth: 100,
            ..Budget::default()
        },
        domain: None,
    };
    let budget = settings.budget;
    let session = Session::create(corpus::JUSTIFY_SAME_WORDS, settings).expect("valid program");
    for t in session.evaluate_behaviors().expect("evaluates") {
        println!(
            "#{} {:5} p1={:24} p2={:22} rv={} P={} Q={}",
            t.behavior_index + 1,
            t.kind.to_string(),
            format!("\"{}\"@{}", text(&t.input["p1"]), t.input["l1"]),
            format!("\"{}\"@{}", text(&t.input["p2"]), t.input["l2"]),
            t.output["rv"],
            t.p_truth,
            t.q_truth
        );
    }

    println!();
    let program = session.program();
    for (i, b) in program.entry_function().behaviors().enumerate() {
        let out = exec_function(program, "sameWords", &b.input, budget);
        let rv = out.output().map(|o| o["rv"].to_string()).unwrap_or_else(|| "fault".into());
        println!("#{} implementation returns {rv}", i + 1);
    }
}

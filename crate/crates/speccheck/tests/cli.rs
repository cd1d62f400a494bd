mod common;

use std::io::Write;

use common::{check_json, corpus, run};

fn domain() -> String {
    corpus("linear_search.domain.json").to_str().unwrap().to_string()
}

#[test]
fn accurate_final_spec_exits_zero() {
    let (report, code) = check_json("linear_search_final.sc", &["--domain", &domain()]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["accuracy"]["verdict"], "accurate");
}

#[test]
fn witnesses_exit_three_and_are_printed() {
    let d = domain();
    let path = corpus("linear_search_pre_pair4.sc");
    let out = run(&["check", path.to_str().unwrap(), "--domain", &d, "--witness-cap", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: under-constrained"), "{text}");
    assert!(text.contains("under-constrained witnesses:"), "{text}");
}

#[test]
fn fail_fast_stops_at_the_first_problem() {
    let (report, code) = check_json("linear_search_trace.sc", &["--fail-fast"]);
    assert_eq!(code, 3);
    assert_eq!(report["verdicts"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_input_exits_two() {
    let (report, code) = check_json("linear_search_final.sc", &["--domain", "/no/such/domain.json"]);
    assert_eq!(code, 2);
    assert!(report["error"].as_str().unwrap().contains("domain"), "{report}");

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.sc");
    std::fs::File::create(&broken)
        .unwrap()
        .write_all(b"int f(int x) { @pre s (x > ; }")
        .unwrap();
    let out = run(&["check", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["run", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn caps_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("big.json");
    std::fs::write(
        &d,
        r#"{"vars": {"a": {"lenRange": [0, 12], "elemRange": [0, 9]},
                    "l": {"range": [0, 9]}, "r": {"range": [0, 9]}, "e": {"range": [0, 9]},
                    "rv": {"set": [-1, 0]}},
            "cap": 1000, "reference": "rightmostReference"}"#,
    )
    .unwrap();
    let (report, code) = check_json("linear_search_final.sc", &["--domain", d.to_str().unwrap()]);
    assert_eq!(code, 4, "{report}");

    // A step budget too small for the body.
    let (report, code) = check_json("justify_same_words.sc", &["--step-budget", "50"]);
    assert_eq!(code, 4, "{report}");
}

#[test]
fn text_repl_on_stdin() {
    let path = corpus("linear_search_trace.sc");
    let mut child = std::process::Command::new(common::bin())
        .args(["run", path.to_str().unwrap()])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"step\nstep\npre l <= r\nstate\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "linearSearch: 7 behaviors, spec-only");
    assert!(lines[1].starts_with("#1 good pre: P=false -> Weaken(P)"), "{text}");
    assert!(text.contains("pre updated"));
    // The edit keeps the cursor on the second pair.
    assert!(text.trim_end().ends_with("behavior 2 of 7"), "{text}");
}

//! Line-oriented terminal loop over a session.
//!
//! One command per line. `pre`, `post`, `body`, `append` and `source` take
//! their text on the same line, or on the following lines up to a line
//! holding a single `.`. With `--json` every reply is one JSON object per
//! line: `{"command": ..., "result": ...}` or `{"command": ..., "error": ...}`.

use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use speccheck_core::accuracy::{AccuracyOptions, DomainSpec};
use speccheck_core::correction::{Step, Verdict};
use speccheck_core::eval::TriBool;
use speccheck_core::lang::{Edit, EditKind};
use speccheck_core::session::Session;
use speccheck_core::value::format_valuation;

const HELP: &str = "\
commands:
  step | s              advance to the next verdict or question
  yes | no              answer the pending question about an output
  choose <n>            pick option n of the last verdict's alternatives
  pre|post|body <text>  replace that part of the entry function
  append <behaviors>    add behaviors to the last behavior block
  source                replace the whole program
  behaviors             evaluate P and Q on the recorded behaviors
  restart               go back to the first behavior
  show                  print the current program
  state                 print the session state
  log                   print the event log
  accuracy <domain>     check accuracy over a domain file
  save <path>           write the session to a file
  help | quit";

enum Reply {
    Ok { json: Value, text: String },
    Err(String),
}

impl Reply {
    fn ok<T: Serialize>(value: &T, text: impl Into<String>) -> Reply {
        Reply::Ok {
            json: serde_json::to_value(value).expect("replies serialize"),
            text: text.into(),
        }
    }
}

pub struct Repl<W: Write> {
    session: Session,
    out: W,
    json: bool,
}

impl<W: Write> Repl<W> {
    pub fn new(session: Session, out: W, json: bool) -> Self {
        Repl { session, out, json }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn into_session(self) -> Session {
        self.session
    }

    /// Prints a summary of the loaded program, then serves commands until
    /// end of input or `quit`.
    pub fn run<R: BufRead>(&mut self, input: R) -> io::Result<()> {
        let state = self.session.state();
        let text = format!(
            "{}: {} behaviors{}",
            state.entry,
            state.behavior_count,
            if state.spec_only { ", spec-only" } else { "" }
        );
        self.emit("load", Reply::ok(&state, text))?;
        let mut lines = input.lines();
        while let Some(line) = lines.next() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (cmd, arg) = match line.split_once(char::is_whitespace) {
                Some((c, a)) => (c, Some(a.trim().to_string())),
                None => (line, None),
            };
            if matches!(cmd, "quit" | "exit" | "q") {
                break;
            }
            let arg = match (takes_text(cmd), arg) {
                (true, None) => Some(read_block(&mut lines)?),
                (_, arg) => arg,
            };
            let reply = self.execute(cmd, arg);
            self.emit(cmd, reply)?;
        }
        self.out.flush()
    }

    fn execute(&mut self, cmd: &str, arg: Option<String>) -> Reply {
        match cmd {
            "step" | "s" => match self.session.step() {
                Ok(step) => {
                    let text = step_text(&step);
                    Reply::ok(&step, text)
                }
                Err(e) => Reply::Err(e.to_string()),
            },
            "yes" | "no" => match self.session.answer(cmd == "yes") {
                Ok(v) => {
                    let text = verdict_text(&v);
                    Reply::ok(&v, text)
                }
                Err(e) => Reply::Err(e.to_string()),
            },
            "choose" => {
                let Some(n) = arg.and_then(|a| a.parse::<usize>().ok()) else {
                    return Reply::Err("usage: choose <n>".into());
                };
                match self.session.choose(n) {
                    Ok(action) => {
                        let text = format!("chose {}", action);
                        Reply::ok(&action, text)
                    }
                    Err(e) => Reply::Err(e.to_string()),
                }
            }
            "pre" | "post" | "body" | "append" | "source" => {
                let kind = match cmd {
                    "pre" => EditKind::Pre,
                    "post" => EditKind::Post,
                    "body" => EditKind::Body,
                    "append" => EditKind::BehaviorsAppend,
                    _ => EditKind::FullSource,
                };
                let outcome = self.session.apply_edit(Edit::new(kind, arg.unwrap_or_default()));
                let mut text = if outcome.applied {
                    format!("{kind} updated")
                } else {
                    format!("{kind} rejected")
                };
                for d in &outcome.diagnostics {
                    text.push_str(&format!("\n{d}"));
                }
                Reply::ok(&outcome, text)
            }
            "behaviors" => match self.session.evaluate_behaviors() {
                Ok(truths) => {
                    let text = truths
                        .iter()
                        .map(|t| {
                            format!(
                                "#{} {}: P={} Q={}",
                                t.behavior_index + 1,
                                t.kind,
                                truth_text(&t.p_truth),
                                truth_text(&t.q_truth)
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n");
                    Reply::ok(&truths, text)
                }
                Err(e) => Reply::Err(e.to_string()),
            },
            "restart" => {
                self.session.restart();
                Reply::ok(&self.session.state(), "back to the first behavior")
            }
            "show" => Reply::ok(&json!({ "source": self.session.source() }), self.session.source().trim_end()),
            "state" => {
                let state = self.session.state();
                let text = format!(
                    "behavior {} of {}{}",
                    state.cursor + 1,
                    state.behavior_count,
                    if state.pending_query.is_some() {
                        ", waiting for an answer"
                    } else {
                        ""
                    }
                );
                Reply::ok(&state, text)
            }
            "log" => {
                let text = self
                    .session
                    .log()
                    .iter()
                    .map(|e| serde_json::to_string(e).expect("events serialize"))
                    .collect::<Vec<_>>()
                    .join("\n");
                Reply::ok(&json!({ "events": self.session.log() }), text)
            }
            "accuracy" => {
                let Some(path) = arg else {
                    return Reply::Err("usage: accuracy <domain.json>".into());
                };
                let report = DomainSpec::load(Path::new(&path))
                    .map_err(|e| e.to_string())
                    .and_then(|d| {
                        self.session
                            .run_accuracy(&d, AccuracyOptions::default())
                            .map_err(|e| e.to_string())
                    });
                match report {
                    Ok(r) => {
                        let text = r.to_string();
                        Reply::ok(&r, text.trim_end())
                    }
                    Err(e) => Reply::Err(e),
                }
            }
            "save" => {
                let Some(path) = arg else {
                    return Reply::Err("usage: save <path>".into());
                };
                match self.session.save(Path::new(&path)) {
                    Ok(()) => Reply::ok(&json!({ "path": path }), format!("saved to {path}")),
                    Err(e) => Reply::Err(e.to_string()),
                }
            }
            "help" | "?" => Reply::ok(&json!({ "help": HELP }), HELP),
            other => Reply::Err(format!("unknown command `{other}`; try help")),
        }
    }

    fn emit(&mut self, command: &str, reply: Reply) -> io::Result<()> {
        match (reply, self.json) {
            (Reply::Ok { json, .. }, true) => {
                writeln!(self.out, "{}", json!({ "command": command, "result": json }))
            }
            (Reply::Err(e), true) => writeln!(self.out, "{}", json!({ "command": command, "error": e })),
            (Reply::Ok { text, .. }, false) => writeln!(self.out, "{text}"),
            (Reply::Err(e), false) => writeln!(self.out, "error: {e}"),
        }
    }
}

fn takes_text(cmd: &str) -> bool {
    matches!(cmd, "pre" | "post" | "body" | "append" | "source")
}

/// Lines up to a lone `.`.
fn read_block<I: Iterator<Item = io::Result<String>>>(lines: &mut I) -> io::Result<String> {
    let mut block = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim() == "." {
            break;
        }
        block.push(line);
    }
    Ok(block.join("\n"))
}

fn truth_text(t: &TriBool) -> String {
    match t.fault() {
        Some(f) => format!("undefined ({f})"),
        None => t.to_string(),
    }
}

fn verdict_text(v: &Verdict) -> String {
    let mut text = v.line();
    if !v.action.is_skip() {
        text.push_str(&format!("\n    {}", v.action));
    }
    if let Some(f) = &v.fault {
        text.push_str(&format!("\n    fault: {f}"));
    }
    for w in &v.warnings {
        text.push_str(&format!("\n    masked: {w}"));
    }
    let options = v.action.options();
    for (i, o) in options.iter().enumerate() {
        text.push_str(&format!("\n    [{i}] {o}"));
    }
    text
}

fn step_text(step: &Step) -> String {
    match step {
        Step::Verdict(v) => verdict_text(v),
        Step::Query(q) => format!(
            "#{} is {} correct for {}? (yes/no)",
            q.behavior_index + 1,
            format_valuation(&q.output, &[]),
            format_valuation(&q.input, &[])
        ),
        Step::Done => "done".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use speccheck_core::corpus;
    use speccheck_core::session::Settings;

    fn run(src: &str, script: &str, json: bool) -> String {
        let session = Session::create(src, Settings::default()).unwrap();
        let mut out = Vec::new();
        Repl::new(session, &mut out, json).run(script.as_bytes()).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn text_mode() {
        let out = run(corpus::LINEAR_SEARCH_TRACE, "step\nstep\npre l <= r\nstep\nbogus\n", false);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "linearSearch: 7 behaviors, spec-only");
        assert!(lines[1].ends_with("-> Weaken(P)"), "{out}");
        assert!(out.contains("pre updated"));
        assert!(out.contains("error: unknown command `bogus`"));
    }

    #[test]
    fn multi_line_edits_and_json() {
        let script = "body\nint i = r;\nwhile (i >= l) {\n  if (a[i] == e)\n    return i;\n  i--;\n}\nreturn -1;\n.\nstate\n";
        let out = run(corpus::LINEAR_SEARCH_ANNOTATED, script, true);
        let replies: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(replies[1]["command"], "body");
        assert_eq!(replies[1]["result"]["applied"], true);
        assert_eq!(replies[2]["result"]["cursor"], 0);
    }

    #[test]
    fn errors_are_reported_not_fatal() {
        let out = run(corpus::LINEAR_SEARCH_TRACE, "yes\nchoose x\nstep\n", true);
        let replies: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert!(replies[1]["error"].as_str().unwrap().contains("no oracle question"), "{out}");
        assert!(replies[2]["error"].is_string());
        assert_eq!(replies[3]["result"]["type"], "verdict");
    }
}

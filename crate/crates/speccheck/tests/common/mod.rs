//! Drives the `speccheck` binary the way a terminal user would.

#![allow(dead_code)]

use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::{Child, ChildStdin, ChildStdout, Command, Output, Stdio};

use serde_json::Value;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_speccheck")
}

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("speccheck runs")
}

/// `speccheck --json ... check` parsed, with its exit code.
pub fn check_json(file: &str, extra: &[&str]) -> (Value, i32) {
    let path = corpus(file);
    let mut args = vec!["--json", "check", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    let report = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (report, out.status.code().unwrap_or(-1))
}

/// An interactive `speccheck --json run` child, one reply per command.
pub struct Repl {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    pub loaded: Value,
}

impl Repl {
    pub fn start(file: &str, extra: &[&str]) -> Repl {
        let path = corpus(file);
        let mut args: Vec<&str> = extra.to_vec();
        args.extend(["--json", "run", path.to_str().unwrap()]);
        let mut child = Command::new(bin())
            .args(&args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .expect("speccheck runs");
        let stdin = child.stdin.take().unwrap();
        let stdout = BufReader::new(child.stdout.take().unwrap());
        let mut repl = Repl {
            child,
            stdin,
            stdout,
            loaded: Value::Null,
        };
        repl.loaded = repl.read();
        repl
    }

    fn read(&mut self) -> Value {
        let mut line = String::new();
        self.stdout.read_line(&mut line).expect("reply");
        serde_json::from_str(&line).unwrap_or_else(|e| panic!("{e}: {line:?}"))
    }

    /// Sends one command; a `text` becomes a block ended by `.`.
    pub fn send(&mut self, cmd: &str, text: Option<&str>) -> Value {
        match text {
            Some(t) => writeln!(self.stdin, "{cmd}\n{t}\n.").unwrap(),
            None => writeln!(self.stdin, "{cmd}").unwrap(),
        }
        self.stdin.flush().unwrap();
        let reply = self.read();
        assert_eq!(reply["command"], cmd.split_whitespace().next().unwrap(), "{reply}");
        reply
    }

    pub fn result(&mut self, cmd: &str, text: Option<&str>) -> Value {
        let reply = self.send(cmd, text);
        match reply.get("result") {
            Some(r) => r.clone(),
            None => panic!("`{cmd}` failed: {reply}"),
        }
    }

    pub fn quit(mut self) {
        let _ = writeln!(self.stdin, "quit");
        let status = self.child.wait().expect("speccheck exits");
        assert!(status.success());
    }
}

/// Compact name of an action tree as it appears in JSON replies, matching
/// the library's summary form, e.g. `Or(Strengthen(P), ReviseImpl)`.
pub fn summary(action: &Value) -> String {
    match action["op"].as_str().unwrap() {
        "basic" => {
            let name = action["action"].as_str().unwrap();
            let mut cap = name[..1].to_uppercase();
            cap.push_str(&name[1..]);
            match action["target"].as_str() {
                Some(t) => format!("{cap}({t})"),
                None => cap,
            }
        }
        op => {
            let args: Vec<String> = action["args"].as_array().unwrap().iter().map(summary).collect();
            let op = if op == "and" { "And" } else { "Or" };
            format!("{op}({})", args.join(", "))
        }
    }
}

pub fn is_undefined(truth: &Value) -> bool {
    truth.get("undefined").is_some()
}

//! The linearSearch refinement walkthrough: seven labeled pairs, no body,
//! and a developer who edits the specification after certain verdicts.

use speccheck_core::corpus;
use speccheck_core::correction::{run_spec_check, Hooks, OracleQuery, Verdict};
use speccheck_core::eval::Budget;
use speccheck_core::lang::{load_program, pretty::print_clauses, AnnotatedProgram, Edit};

/// Replays the scripted edits after the post verdict of each pair.
struct Developer {
    pending: Vec<Edit>,
}

impl Hooks for Developer {
    fn on_verdict(&mut self, v: &Verdict, _: &AnnotatedProgram) -> Option<Edit> {
        println!("{}", v.line());
        if !v.action.is_skip() {
            println!("    {}", v.action);
        }
        if v.phase == speccheck_core::correction::Phase::Post {
            for s in corpus::LINEAR_SEARCH_TRACE_EDITS.iter().filter(|s| s.after == v.behavior_index) {
                self.pending
                    .extend(s.edits.iter().rev().map(|(kind, text)| Edit::new(*kind, *text)));
            }
        }
        let edit = self.pending.pop();
        if let Some(e) = &edit {
            println!("  edit {}: {}", e.kind, e.text.replace('\n', " "));
        }
        edit
    }
}

fn main() {
    let (program, _) = load_program(corpus::LINEAR_SEARCH_TRACE).expect("valid program");
    let mut developer = Developer { pending: Vec::new() };
    let mut never = |_: &OracleQuery| unreachable!("spec-only sessions ask nothing");
    let out = run_spec_check(program, Budget::default(), &mut never, &mut developer).expect("check runs");
    let f = out.program.entry_function();
    println!("\nfinal precondition: {}", print_clauses(f.pre.as_ref().unwrap()));
    println!("final postcondition: {}", print_clauses(f.post.as_ref().unwrap()));
}

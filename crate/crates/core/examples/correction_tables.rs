//! Prints every cell of the four adequacy tables.

use speccheck_core::correction::{neg_triple_action, postcondition_action, precondition_action, triple_action};
use speccheck_core::eval::{Fault, FaultKind, TriBool};
use speccheck_core::lang::{BehaviorKind, Span};
use speccheck_core::value::valuation;

fn main() {
    let truths = [
        TriBool::True,
        TriBool::False,
        TriBool::Undefined(Fault::new(FaultKind::IndexOutOfBounds, Span::default(), "a[9]")),
    ];
    let short = |t: &TriBool| match t {
        TriBool::True => "T",
        TriBool::False => "F",
        TriBool::Undefined(_) => "U",
    };
    let i = valuation([("x", 1)]);
    let o = valuation([("rv", 2)]);

    println!("spec-only, by label and truth value:");
    println!("  {:10} {:5} {:22} postcondition", "kind", "value", "precondition");
    for kind in [BehaviorKind::Good, BehaviorKind::Bad, BehaviorKind::DontCare] {
        for t in &truths {
            let post = postcondition_action(kind, t, &i, &o)
                .map(|a| a.summary())
                .unwrap_or_else(|e| e.to_string());
            println!(
                "  {:10} {:5} {:22} {post}",
                kind.to_string(),
                short(t),
                precondition_action(kind, t, &i).summary()
            );
        }
    }

    println!("\nwith an implementation, by g and Q:");
    println!("  {:5} {:5} {:32} P false", "g", "Q", "P true");
    for g in [true, false] {
        for t in &truths {
            println!(
                "  {:5} {:5} {:32} {}",
                g.to_string(),
                short(t),
                triple_action(g, t, &i, &o).summary(),
                neg_triple_action(g, t, &i, &o).summary()
            );
        }
    }
}

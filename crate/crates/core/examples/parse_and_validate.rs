//! Loads an annotated function, shows the diagnostics for a broken one, and
//! prints the accepted program back in canonical form.

use speccheck_core::lang::{load_program, pretty_print};

const BROKEN: &str = "int half(int x) {
    @pre s (x >= 1 && y > 0);
    @post s (rv * 2 <= x);
    return x / 2;
}";

const FIXED: &str = "int half(int x) {
    @pre s (x >= 1);
    @post s (rv * 2 <= x && x < rv * 2 + 2);
    @behavior s {
        good { input={x=5} output={rv=2} }
        bad { input={x=5} output={rv=3} }
    }
    return x / 2;
}";

fn main() {
    match load_program(BROKEN) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(diagnostics) => {
            println!("rejected:");
            for d in diagnostics {
                println!("  {d}");
            }
        }
    }

    let (program, warnings) = load_program(FIXED).expect("valid program");
    for w in warnings {
        println!("warning: {w}");
    }
    let f = program.entry_function();
    println!("\n{} has {} behaviors", f.name, f.behavior_count());
    println!("{}", pretty_print(&program));
}

//! Three-valued evaluation: faults make a predicate undefined unless a
//! connective decides the result first.

use speccheck_core::eval::{eval_expr, Env};
use speccheck_core::lang::parse_expr;
use speccheck_core::value::{format_valuation, valuation, Value};

fn main() {
    let env = valuation([
        ("a", Value::Arr(vec![5, 2, 7])),
        ("i", Value::Int(3)),
        ("d", Value::Int(0)),
    ]);
    println!("with {}", format_valuation(&env, &[]));
    for src in [
        "a[i] = 7",
        "i < a.size && a[i] = 7",
        "a[i] = 7 || true",
        "i >= a.size => a[i] = 7",
        "10 / d > 1",
        "forall int k:[0 .. a.size - 1] (a[k] > 1)",
        "exists int k:[0 .. a.size] (a[k] = 7)",
        "exists int k:[0 .. a.size] (a[k] = 9)",
        "forall int k:[1 .. 0] (a[k] = 9)",
        "0 <= i <= a.size",
    ] {
        let e = parse_expr(src).expect("parses");
        let t = eval_expr(&e, &Env::new(&env, None)).expect("all names bound");
        match t.fault() {
            Some(f) => println!("{src:45} undefined: {f}"),
            None => println!("{src:45} {t}"),
        }
    }
}

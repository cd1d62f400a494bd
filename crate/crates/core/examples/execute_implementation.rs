//! Runs function bodies directly, including one that faults and one that
//! runs out of steps.

use speccheck_core::eval::{exec_function, Budget, ExecOutcome};
use speccheck_core::lang::load_program;
use speccheck_core::value::{format_valuation, valuation, Value};

const SOURCE: &str = "int rightmost(int[] a, int l, int r, int e) {
    int i = r;
    while (i >= l) {
        if (a[i] == e)
            return i;
        i--;
    }
    return -1;
}

void fill(int[] a, int v) {
    int i = 0;
    while (i < a.size) {
        a[i] = v;
        i++;
    }
}

int spin(int x) {
    while (true) { x = x + 1; }
    return x;
}";

fn show(name: &str, out: &ExecOutcome) {
    match out {
        ExecOutcome::Returned { .. } => {
            println!("{name}: {}", format_valuation(&out.output().unwrap(), &[]))
        }
        ExecOutcome::Fault { fault } => println!("{name}: fault: {fault}"),
        ExecOutcome::BudgetExceeded { kind, fault } => println!("{name}: out of {kind}: {fault}"),
    }
}

fn main() {
    let (program, _) = load_program(SOURCE).expect("valid program");
    let budget = Budget::default();
    let a = Value::Arr(vec![5, 2, 7, 6, 7, 8]);
    let args = valuation([("a", a.clone()), ("l", 1.into()), ("r", 5.into()), ("e", 7.into())]);
    show("rightmost", &exec_function(&program, "rightmost", &args, budget));

    let args = valuation([("a", a.clone()), ("l", 0.into()), ("r", 9.into()), ("e", 1.into())]);
    show("rightmost past the end", &exec_function(&program, "rightmost", &args, budget));

    let args = valuation([("a", Value::Arr(vec![1, 2, 3])), ("v", 0.into())]);
    show("fill", &exec_function(&program, "fill", &args, budget));

    let small = Budget {
        max_steps: 10_000,
        ..budget
    };
    show("spin", &exec_function(&program, "spin", &valuation([("x", 0)]), small));
}

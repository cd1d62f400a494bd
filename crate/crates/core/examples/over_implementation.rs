//! A linear scan checked against a specification that assumes a sorted
//! array: the bad behavior on an unsorted array falls outside P, yet the
//! implementation still answers it.

use speccheck_core::corpus;
use speccheck_core::correction::{run_spec_check, NoEdits, OracleQuery};
use speccheck_core::eval::Budget;
use speccheck_core::lang::load_program;
use speccheck_core::value::format_valuation;

fn main() {
    for (name, source) in [("sorted_search", corpus::SORTED_SEARCH), ("binary_search", corpus::BINARY_SEARCH)] {
        println!("== {name}");
        let (program, _) = load_program(source).expect("valid program");
        // The developer rejects every output no good behavior vouches for.
        let mut oracle = |q: &OracleQuery| {
            println!(
                "  is {} right for {}? no",
                format_valuation(&q.output, &[]),
                format_valuation(&q.input, &[])
            );
            false
        };
        let out = run_spec_check(program, Budget::default(), &mut oracle, &mut NoEdits).expect("check runs");
        for v in out.verdicts {
            println!("  {}", v.line());
            for (i, option) in v.action.options().iter().enumerate() {
                println!("      [{i}] {option}");
            }
        }
    }
}

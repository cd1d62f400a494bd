//! Bounded-exhaustive accuracy checking: labels come from a reference
//! implementation, and every behavior in a small domain is checked against
//! three versions of the linearSearch specification.

use speccheck_core::accuracy::{
    check_program, compare_specs, AccuracyOptions, DomainSpec, LabeledSet, ManualSpec, ReferenceLabeler, generate_spec,
};
use speccheck_core::corpus;
use speccheck_core::eval::Budget;
use speccheck_core::lang::load_program;

fn main() {
    let domain = DomainSpec::from_json(corpus::LINEAR_SEARCH_DOMAIN).expect("valid domain");
    println!("domain: {} behaviors after the filter\n", domain.count().unwrap());
    let options = AccuracyOptions {
        witness_cap: 3,
        fail_fast: false,
    };
    for (name, source) in [
        ("final", corpus::LINEAR_SEARCH_FINAL),
        ("before pair 6", corpus::LINEAR_SEARCH_PRE_PAIR6),
        ("before pair 4", corpus::LINEAR_SEARCH_PRE_PAIR4),
    ] {
        let (program, _) = load_program(source).expect("valid program");
        let report = check_program(&program, &domain, Budget::default(), options).expect("domain fits");
        println!("== {name}\n{report}");
    }

    // The table specification built from the same labels agrees with the
    // final specification everywhere on the domain.
    let (program, _) = load_program(corpus::LINEAR_SEARCH_FINAL).unwrap();
    let f = program.entry_function();
    let mut labeler = ReferenceLabeler::new(&program, "rightmostReference", Budget::default()).unwrap();
    let labels: LabeledSet = labeler.label_domain(&domain, f).unwrap();
    let table = generate_spec(&labels);
    let cmp = compare_specs(&ManualSpec::new(&program), &table, &domain, f, 3).unwrap();
    println!("final vs table specification: {cmp}");
}

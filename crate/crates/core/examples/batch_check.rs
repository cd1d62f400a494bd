//! Non-interactive checking as used by `speccheck check`: every question is
//! answered "no" and the result is summarised as an exit status.

use speccheck_core::corpus;
use speccheck_core::session::{run_batch_source, BatchOptions};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let domain = dir.path().join("domain.json");
    std::fs::write(&domain, corpus::LINEAR_SEARCH_DOMAIN).unwrap();
    for (name, source) in corpus::PROGRAMS {
        let with_domain = name.starts_with("linear_search_final") || name.starts_with("linear_search_pre");
        let options = BatchOptions {
            domain: with_domain.then(|| domain.clone()),
            witness_cap: 2,
            ..BatchOptions::default()
        };
        let report = run_batch_source(source, &options);
        println!("{name:28} exit {} ({:?})", report.exit_code, report.status);
    }
}

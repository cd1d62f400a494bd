use speccheck_core::corpus;
use speccheck_core::correction::{run_spec_check, NoEdits, OracleQuery, Phase, Target};
use speccheck_core::correction::{BasicAction, CorrectionAction};
use speccheck_core::eval::{Budget, TriBool};
use speccheck_core::lang::load_program;
use speccheck_core::value::valuation;

#[test]
fn linear_scan_under_sorted_precondition() {
    let (program, _) = load_program(corpus::SORTED_SEARCH).unwrap();
    let mut asked = Vec::new();
    let mut oracle = |q: &OracleQuery| {
        asked.push(q.output.clone());
        false
    };
    let out = run_spec_check(program, Budget::default(), &mut oracle, &mut NoEdits).unwrap();
    assert_eq!(asked, vec![valuation([("rv", 4)])]);
    let triple = out.verdicts.iter().find(|v| v.phase == Phase::Triple).unwrap();
    assert_eq!(triple.p_truth, TriBool::False);
    assert_eq!(triple.q_truth, Some(TriBool::True));
    assert_eq!(triple.action.summary(), "Or(Strengthen(P), ReviseImpl)");
    let CorrectionAction::Basic {
        action: BasicAction::Strengthen { target, witness },
    } = &triple.action.options()[0]
    else {
        panic!("{:?}", triple.action)
    };
    assert_eq!(*target, Target::P);
    assert!(witness.output.is_none());
}

#[test]
fn binary_search_is_not_flagged() {
    let (program, _) = load_program(corpus::BINARY_SEARCH).unwrap();
    let mut oracle = |_: &OracleQuery| false;
    let out = run_spec_check(program, Budget::default(), &mut oracle, &mut NoEdits).unwrap();
    let triples: Vec<_> = out.verdicts.iter().filter(|v| v.phase == Phase::Triple).collect();
    assert_eq!(triples.len(), 4);
    for v in triples {
        assert!(v.action.is_skip(), "{}", v.line());
    }
}

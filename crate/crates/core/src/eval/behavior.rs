//! Evaluating a function's precondition and postcondition on a behavior.
//!
//! An absent `@pre` reads as `false` and an absent `@post` as `true`, the
//! weakest starting specification.

use super::predicate::{eval_clauses, Env, Evaluation};
use super::{Budget, EvalError};
use crate::lang::{AnnotatedProgram, Behavior, FunctionDef};
use crate::value::Valuation;

/// `P(i)` for `f`.
pub fn eval_pre(
    program: &AnnotatedProgram,
    f: &FunctionDef,
    input: &Valuation,
    budget: Budget,
) -> Result<Evaluation, EvalError> {
    match &f.pre {
        None => Ok(Evaluation::constant(false)),
        Some(pre) => eval_clauses(&pre.clauses, &Env::new(input, Some(program)).with_budget(budget)),
    }
}

/// `Q(i, o)` for `f`. Output bindings shadow inputs of the same name, so an
/// array parameter is seen in its final state.
pub fn eval_post(
    program: &AnnotatedProgram,
    f: &FunctionDef,
    input: &Valuation,
    output: &Valuation,
    budget: Budget,
) -> Result<Evaluation, EvalError> {
    match &f.post {
        None => Ok(Evaluation::constant(true)),
        Some(post) => {
            let mut env = input.clone();
            env.extend(output.iter().map(|(k, v)| (k.clone(), v.clone())));
            eval_clauses(&post.clauses, &Env::new(&env, Some(program)).with_budget(budget))
        }
    }
}

/// `P(i)` of the entry function on the behavior's input.
pub fn eval_pre_on_behavior(
    program: &AnnotatedProgram,
    b: &Behavior,
    budget: Budget,
) -> Result<Evaluation, EvalError> {
    eval_pre(program, program.entry_function(), &b.input, budget)
}

/// `Q(i, o)` of the entry function on the behavior's recorded input and
/// output.
pub fn eval_post_on_behavior(
    program: &AnnotatedProgram,
    b: &Behavior,
    budget: Budget,
) -> Result<Evaluation, EvalError> {
    eval_post(program, program.entry_function(), &b.input, &b.output, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::TriBool;
    use crate::lang::parse_program;

    const SRC: &str = "
        int linearSearch(int[] a, int l, int r, int e) {
            @behavior ls {
                good { input={a={1,2,3}, l=0, r=2, e=4} output={rv=-1} }
                dontCare { input={a={5,2,7,3,6,8}, l=4, r=1, e=7} output={rv=-1} }
            }
        }";

    #[test]
    fn weakest_spec_defaults() {
        let p = parse_program(SRC).unwrap();
        let b = p.entry_function().behavior(0).unwrap();
        assert_eq!(eval_pre_on_behavior(&p, b, Budget::default()).unwrap().value, TriBool::False);
        assert_eq!(eval_post_on_behavior(&p, b, Budget::default()).unwrap().value, TriBool::True);
    }

    #[test]
    fn pair_five_fails_l_le_r() {
        let mut p = parse_program(SRC).unwrap();
        p = crate::lang::apply_edit(&p, &crate::lang::Edit::new(crate::lang::EditKind::Pre, "l <= r"))
            .unwrap()
            .program;
        let b = p.entry_function().behavior(1).unwrap();
        assert_eq!(eval_pre_on_behavior(&p, b, Budget::default()).unwrap().value, TriBool::False);
    }
}

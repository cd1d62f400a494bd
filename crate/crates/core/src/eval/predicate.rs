//! Tri-valued evaluation of predicate expressions.
//!
//! `&&`, `||` and `=>` follow Kleene's strong logic: a definite operand that
//! decides the result masks an undefined one on either side. Quantifiers
//! first evaluate their range, then visit instances from `lo` upward and
//! stop at the first instance that decides the result, so a fault met before
//! any deciding instance makes the quantifier undefined.

use std::borrow::Cow;

use super::builtins::{call_builtin, is_builtin};
use super::exec::{arith, call_from_predicate, compare, index_fault};
use super::{Budget, EvalError, Fault, FaultKind, TriBool};
use crate::lang::{AnnotatedProgram, BinOp, Expr, ExprKind, Quantifier, Span, UnOp};
use crate::value::{Valuation, Value};

/// Masked faults kept per evaluation.
pub const MAX_WARNINGS: usize = 16;

/// What a predicate is evaluated against.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a> {
    pub bindings: &'a Valuation,
    /// Resolves calls to user-defined functions. Without it such calls are
    /// undefined.
    pub program: Option<&'a AnnotatedProgram>,
    pub budget: Budget,
}

impl<'a> Env<'a> {
    pub fn new(bindings: &'a Valuation, program: Option<&'a AnnotatedProgram>) -> Self {
        Env {
            bindings,
            program,
            budget: Budget::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }
}

/// A truth value plus faults that were masked on the way to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: TriBool,
    pub warnings: Vec<Fault>,
}

impl Evaluation {
    pub fn constant(value: bool) -> Self {
        Evaluation {
            value: value.into(),
            warnings: Vec::new(),
        }
    }
}

pub fn eval_expr(e: &Expr, env: &Env<'_>) -> Result<TriBool, EvalError> {
    Evaluator::new(env).tri(e)
}

/// Evaluates an implicit conjunction of clauses, in order.
pub fn eval_clauses(clauses: &[Expr], env: &Env<'_>) -> Result<Evaluation, EvalError> {
    let mut ev = Evaluator::new(env);
    let mut acc = TriBool::True;
    for c in clauses {
        if acc.is_false() {
            break;
        }
        let v = ev.tri(c)?;
        acc = ev.combine_and(acc, v);
    }
    Ok(Evaluation {
        value: acc,
        warnings: ev.warnings,
    })
}

/// Evaluates an expression of any type. The inner `Err` is a fault.
pub fn eval_value(e: &Expr, env: &Env<'_>) -> Result<Result<Value, Fault>, EvalError> {
    match Evaluator::new(env).value(e) {
        Ok(v) => Ok(Ok(v)),
        Err(Interrupt::Fault(f)) => Ok(Err(f)),
        Err(Interrupt::Error(e)) => Err(e),
    }
}

enum Interrupt {
    Fault(Fault),
    Error(EvalError),
}

impl From<Fault> for Interrupt {
    fn from(f: Fault) -> Self {
        Interrupt::Fault(f)
    }
}

type Res<T> = Result<T, Interrupt>;

struct Evaluator<'a> {
    bindings: &'a Valuation,
    program: Option<&'a AnnotatedProgram>,
    budget: Budget,
    bound: Vec<(&'a str, i64)>,
    steps: u64,
    warnings: Vec<Fault>,
}

impl<'a> Evaluator<'a> {
    fn new(env: &Env<'a>) -> Self {
        Evaluator {
            bindings: env.bindings,
            program: env.program,
            budget: env.budget,
            bound: Vec::new(),
            steps: 0,
            warnings: Vec::new(),
        }
    }

    fn warn(&mut self, masked: &TriBool) {
        if let Some(f) = masked.fault() {
            if self.warnings.len() < MAX_WARNINGS && !self.warnings.contains(f) {
                self.warnings.push(f.clone());
            }
        }
    }

    fn combine_and(&mut self, a: TriBool, b: TriBool) -> TriBool {
        if b.is_false() {
            self.warn(&a);
        }
        a.and(b)
    }

    fn tick(&mut self, span: Span) -> Result<(), Fault> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(Fault::new(
                FaultKind::StepBudget,
                span,
                format!("more than {} steps", self.budget.max_steps),
            ));
        }
        Ok(())
    }

    fn tri(&mut self, e: &'a Expr) -> Result<TriBool, EvalError> {
        match &e.kind {
            ExprKind::Bool(b) => Ok((*b).into()),
            ExprKind::Unary(UnOp::Not, operand) => Ok(self.tri(operand)?.not()),
            ExprKind::Binary(BinOp::And, lhs, rhs) => {
                let a = self.tri(lhs)?;
                if a.is_false() {
                    return Ok(a);
                }
                let b = self.tri(rhs)?;
                Ok(self.combine_and(a, b))
            }
            ExprKind::Binary(BinOp::Or, lhs, rhs) => {
                let a = self.tri(lhs)?;
                if a.is_true() {
                    return Ok(a);
                }
                let b = self.tri(rhs)?;
                if b.is_true() {
                    self.warn(&a);
                }
                Ok(a.or(b))
            }
            ExprKind::Binary(BinOp::Implies, lhs, rhs) => {
                let a = self.tri(lhs)?;
                if a.is_false() {
                    return Ok(TriBool::True);
                }
                let b = self.tri(rhs)?;
                if b.is_true() {
                    self.warn(&a);
                }
                Ok(a.implies(b))
            }
            ExprKind::Quant {
                q,
                var,
                lo,
                hi,
                body,
            } => {
                let range = self.int(lo).and_then(|lo| Ok((lo, self.int(hi)?)));
                let (lo, hi) = match range {
                    Ok(r) => r,
                    Err(Interrupt::Fault(f)) => return Ok(TriBool::Undefined(f)),
                    Err(Interrupt::Error(err)) => return Err(err),
                };
                let neutral = *q == Quantifier::Forall;
                for k in lo..=hi {
                    if let Err(f) = self.tick(e.span) {
                        return Ok(TriBool::Undefined(f));
                    }
                    self.bound.push((var.as_str(), k));
                    let r = self.tri(body);
                    self.bound.pop();
                    let r = r?;
                    if r.as_bool() != Some(neutral) {
                        return Ok(r);
                    }
                }
                Ok(neutral.into())
            }
            _ => match self.value(e) {
                Ok(Value::Bool(b)) => Ok(b.into()),
                Ok(other) => Ok(TriBool::Undefined(Fault::new(
                    FaultKind::TypeMismatch,
                    e.span,
                    format!("expected bool, found {}", other.ty()),
                ))),
                Err(Interrupt::Fault(f)) => Ok(TriBool::Undefined(f)),
                Err(Interrupt::Error(err)) => Err(err),
            },
        }
    }

    fn int(&mut self, e: &'a Expr) -> Res<i64> {
        match self.value(e)? {
            Value::Int(n) => Ok(n),
            other => Err(mismatch(e.span, format!("expected int, found {}", other.ty()))),
        }
    }

    fn array(&mut self, e: &'a Expr) -> Res<Cow<'a, [i64]>> {
        if let ExprKind::Var(name) = &e.kind {
            if !self.bound.iter().any(|(b, _)| *b == name.as_str()) {
                return match self.bindings.get(name) {
                    Some(Value::Arr(items)) => Ok(Cow::Borrowed(items.as_slice())),
                    Some(other) => Err(mismatch(e.span, format!("`{name}` is {}, not int[]", other.ty()))),
                    None => Err(unbound(name, e.span)),
                };
            }
        }
        match self.value(e)? {
            Value::Arr(items) => Ok(Cow::Owned(items)),
            other => Err(mismatch(e.span, format!("expected int[], found {}", other.ty()))),
        }
    }

    fn value(&mut self, e: &'a Expr) -> Res<Value> {
        match &e.kind {
            ExprKind::Int(n) => Ok(Value::Int(*n)),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Var(name) => {
                if let Some((_, k)) = self.bound.iter().rev().find(|(b, _)| *b == name.as_str()) {
                    return Ok(Value::Int(*k));
                }
                self.bindings.get(name).cloned().ok_or_else(|| unbound(name, e.span))
            }
            ExprKind::Index(base, idx) => {
                let i = self.int(idx)?;
                let arr = self.array(base)?;
                usize::try_from(i)
                    .ok()
                    .and_then(|i| arr.get(i))
                    .map(|n| Value::Int(*n))
                    .ok_or_else(|| index_fault(i, arr.len(), idx.span).into())
            }
            ExprKind::Slice(base, lo, hi) => {
                let lo = self.int(lo)?;
                let hi = self.int(hi)?;
                let arr = self.array(base)?;
                if lo > hi {
                    return Ok(Value::Arr(Vec::new()));
                }
                if lo < 0 || hi >= arr.len() as i64 {
                    return Err(Fault::new(
                        FaultKind::SliceBounds,
                        e.span,
                        format!("slice [{lo}:{hi}] of array of size {}", arr.len()),
                    )
                    .into());
                }
                Ok(Value::Arr(arr[lo as usize..=hi as usize].to_vec()))
            }
            ExprKind::Size(base) => Ok(Value::Int(self.array(base)?.len() as i64)),
            ExprKind::Unary(UnOp::Neg, operand) => {
                let n = self.int(operand)?;
                n.checked_neg()
                    .map(Value::Int)
                    .ok_or_else(|| Fault::new(FaultKind::Overflow, e.span, format!("-({n})")).into())
            }
            ExprKind::Binary(op, lhs, rhs) if !op.is_logical() => {
                if matches!(op, BinOp::Eq | BinOp::Ne) {
                    let l = self.value(lhs)?;
                    let r = self.value(rhs)?;
                    if l.ty() != r.ty() {
                        return Err(mismatch(e.span, format!("cannot compare {} with {}", l.ty(), r.ty())));
                    }
                    return Ok(Value::Bool((l == r) == (*op == BinOp::Eq)));
                }
                let a = self.int(lhs)?;
                let b = self.int(rhs)?;
                if op.is_comparison() {
                    Ok(Value::Bool(compare(*op, a, b)))
                } else {
                    Ok(Value::Int(arith(*op, a, b, e.span)?))
                }
            }
            ExprKind::Call(name, args) => self.call(name, args, e.span),
            ExprKind::Unary(UnOp::Not, _) | ExprKind::Binary(..) | ExprKind::Quant { .. } => {
                match self.tri(e).map_err(Interrupt::Error)? {
                    TriBool::True => Ok(Value::Bool(true)),
                    TriBool::False => Ok(Value::Bool(false)),
                    TriBool::Undefined(f) => Err(f.into()),
                }
            }
        }
    }

    fn call(&mut self, name: &str, args: &'a [Expr], span: Span) -> Res<Value> {
        let mut values = Vec::with_capacity(args.len());
        for a in args {
            values.push(self.value(a)?);
        }
        if is_builtin(name) {
            return call_builtin(name, &values).map_err(|m| mismatch(span, m));
        }
        let no_body = || Fault::new(FaultKind::NoImplementation, span, format!("`{name}` cannot be called here"));
        let program = self.program.ok_or_else(no_body)?;
        let f = program.function(name).ok_or_else(no_body)?;
        if f.params.len() != values.len() || f.params.iter().zip(&values).any(|(p, v)| p.ty != v.ty()) {
            return Err(mismatch(span, format!("arguments do not match `{name}`")));
        }
        match call_from_predicate(program, f, &values, self.budget, &mut self.steps, span)? {
            Some(v) => Ok(v),
            None => Err(mismatch(span, format!("`{name}` returns no value"))),
        }
    }
}

fn mismatch(span: Span, msg: impl Into<String>) -> Interrupt {
    Interrupt::Fault(Fault::new(FaultKind::TypeMismatch, span, msg))
}

fn unbound(name: &str, span: Span) -> Interrupt {
    Interrupt::Error(EvalError::UnboundVariable {
        name: name.to_string(),
        span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_expr, parse_program};
    use crate::value::valuation;

    fn eval(src: &str, env: &Valuation) -> TriBool {
        eval_expr(&parse_expr(src).unwrap(), &Env::new(env, None)).unwrap()
    }

    #[test]
    fn pair_one_precondition() {
        let env = valuation([("l", 0), ("r", 2)]);
        assert_eq!(eval("l <= r", &env), TriBool::True);
    }

    #[test]
    fn pair_seven_quantifier_is_undefined() {
        let env = valuation([
            ("a", Value::Arr(vec![5, 2, 7, 3, 6, 8])),
            ("l", (-1).into()),
            ("r", 10.into()),
            ("e", 7.into()),
        ]);
        let v = eval("forall int k:[l .. r] (e != a[k])", &env);
        assert_eq!(v.fault().map(|f| f.kind), Some(FaultKind::IndexOutOfBounds), "{v}");
    }

    #[test]
    fn empty_ranges() {
        let env = Valuation::new();
        assert_eq!(eval("forall int k:[0 .. -1] (false)", &env), TriBool::True);
        assert_eq!(eval("exists int k:[0 .. -1] (true)", &env), TriBool::False);
    }

    #[test]
    fn guarded_index_is_masked() {
        let env = valuation([("a", Value::Arr(vec![1, 2, 3])), ("rv", (-1).into()), ("e", 4.into())]);
        assert_eq!(eval("rv != -1 => a[rv] = e", &env), TriBool::True);
        assert!(eval("a[rv] = e", &env).is_undefined());
        let clauses = vec![parse_expr("a[rv] = e").unwrap(), parse_expr("rv > 0").unwrap()];
        let ev = eval_clauses(&clauses, &Env::new(&env, None)).unwrap();
        assert_eq!(ev.value, TriBool::False);
        assert_eq!(ev.warnings.len(), 1);
    }

    #[test]
    fn final_post_on_pair_two() {
        let env = valuation([
            ("a", Value::Arr(vec![1, 2, 3, 4, 5])),
            ("l", 0.into()),
            ("r", 4.into()),
            ("e", 2.into()),
            ("rv", 1.into()),
        ]);
        assert_eq!(
            eval(
                "((rv != -1) => l <= rv <= r && a[rv] = e) && ((rv = -1) => forall int k:[l .. r] (e != a[k]))",
                &env
            ),
            TriBool::True
        );
    }

    #[test]
    fn slices_are_inclusive() {
        let env = valuation([("a", Value::Arr(vec![1, 2, 3, 1, 2]))]);
        assert_eq!(eval("a[0:1] = a[3:4]", &env), TriBool::True);
        assert_eq!(eval("a[3:2].size = 0", &env), TriBool::True);
        assert!(eval("a[3:5] = a[0:2]", &env).is_undefined());
    }

    #[test]
    fn unbound_is_an_error() {
        let err = eval_expr(&parse_expr("z > 0").unwrap(), &Env::new(&Valuation::new(), None)).unwrap_err();
        assert!(matches!(err, EvalError::UnboundVariable { ref name, .. } if name == "z"));
    }

    #[test]
    fn calls_into_bodies_and_missing_bodies() {
        let p = parse_program(
            "bool pos(int x) { return x > 0; } bool nobody(int x); int f(int x) { @pre s pos(x); return x; }",
        )
        .unwrap();
        let env = valuation([("x", 3)]);
        let e = Env::new(&env, Some(&p));
        assert_eq!(eval_expr(&parse_expr("pos(x) && !pos(-x)").unwrap(), &e).unwrap(), TriBool::True);
        let v = eval_expr(&parse_expr("nobody(x)").unwrap(), &e).unwrap();
        assert_eq!(v.fault().unwrap().kind, FaultKind::NoImplementation);
    }

    #[test]
    fn type_mismatch_is_undefined() {
        let env = valuation([("a", Value::Arr(vec![1])), ("x", 1.into())]);
        assert_eq!(eval("a = x", &env).fault().unwrap().kind, FaultKind::TypeMismatch);
        assert_eq!(eval("scalpha(a)", &env).fault().unwrap().kind, FaultKind::TypeMismatch);
    }
}

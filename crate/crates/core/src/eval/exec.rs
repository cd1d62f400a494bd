//! Big-step interpreter for implementation bodies.
//!
//! Scalars are passed by value and arrays by reference: each array lives in
//! a heap slot and variables hold its handle, so a callee's element writes
//! are visible to the caller.

use std::collections::HashMap;

use serde::Serialize;

use super::builtins::{call_builtin, is_builtin};
use super::{Budget, BudgetKind, Fault, FaultKind};
use crate::lang::{AnnotatedProgram, BinOp, Expr, ExprKind, FunctionDef, Span, Stmt, StmtKind, Type, UnOp};
use crate::value::{Valuation, Value};

/// Result of running a function to completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum ExecOutcome {
    /// `rv` is `None` for void functions. `refs` holds the final contents of
    /// every array parameter the call modified.
    Returned { rv: Option<Value>, refs: Valuation },
    Fault { fault: Fault },
    BudgetExceeded { kind: BudgetKind, fault: Fault },
}

impl ExecOutcome {
    /// The output valuation: `rv` (if any) plus modified array parameters.
    pub fn output(&self) -> Option<Valuation> {
        match self {
            ExecOutcome::Returned { rv, refs } => {
                let mut out = refs.clone();
                if let Some(v) = rv {
                    out.insert(crate::lang::RETURN_VALUE.to_string(), v.clone());
                }
                Some(out)
            }
            _ => None,
        }
    }
}

/// Runs `name` on `args`, which must bind every parameter.
pub fn exec_function(program: &AnnotatedProgram, name: &str, args: &Valuation, budget: Budget) -> ExecOutcome {
    let Some(f) = program.function(name) else {
        return ExecOutcome::Fault {
            fault: Fault::new(FaultKind::NoImplementation, Span::default(), format!("no function `{name}`")),
        };
    };
    let mut interp = Interp::new(program, budget, 0);
    let mut slots = Vec::with_capacity(f.params.len());
    for p in &f.params {
        let Some(v) = args.get(&p.name) else {
            return ExecOutcome::Fault {
                fault: Fault::new(FaultKind::UnboundVariable, f.span, format!("argument `{}` missing", p.name)),
            };
        };
        if v.ty() != p.ty {
            return ExecOutcome::Fault {
                fault: Fault::new(
                    FaultKind::TypeMismatch,
                    f.span,
                    format!("argument `{}` is {}, declared {}", p.name, v.ty(), p.ty),
                ),
            };
        }
        slots.push(interp.alloc(v.clone()));
    }
    match interp.call(f, slots.clone(), f.span) {
        Ok(rv) => {
            let mut refs = Valuation::new();
            for (p, slot) in f.params.iter().zip(&slots) {
                if let Slot::Arr(h) = slot {
                    let after = &interp.heap[*h];
                    if args.get(&p.name) != Some(&Value::Arr(after.clone())) {
                        refs.insert(p.name.clone(), Value::Arr(after.clone()));
                    }
                }
            }
            ExecOutcome::Returned {
                rv: rv.map(|s| interp.to_value(s)),
                refs,
            }
        }
        Err(Stop::Fault(fault)) => ExecOutcome::Fault { fault },
        Err(Stop::Budget(kind, fault)) => ExecOutcome::BudgetExceeded { kind, fault },
    }
}

/// Calls a function from inside a predicate. Arrays are copied in; the step
/// counter is shared with the caller so nested evaluation stays bounded.
pub(crate) fn call_from_predicate<'a>(
    program: &'a AnnotatedProgram,
    f: &'a FunctionDef,
    args: &[Value],
    budget: Budget,
    steps: &mut u64,
    span: Span,
) -> Result<Option<Value>, Fault> {
    let mut interp = Interp::new(program, budget, *steps);
    let slots: Vec<Slot> = args.iter().map(|v| interp.alloc(v.clone())).collect();
    let result = interp.call(f, slots, span);
    *steps = interp.steps;
    match result {
        Ok(rv) => Ok(rv.map(|s| interp.to_value(s))),
        Err(Stop::Fault(f)) | Err(Stop::Budget(_, f)) => Err(f),
    }
}

/// Integer arithmetic shared with the predicate evaluator. Overflow and
/// division by zero are faults; `/` truncates and `%` follows the dividend.
pub(crate) fn arith(op: BinOp, a: i64, b: i64, span: Span) -> Result<i64, Fault> {
    let overflow = || Fault::new(FaultKind::Overflow, span, format!("{a} {} {b}", op.symbol()));
    match op {
        BinOp::Add => a.checked_add(b).ok_or_else(overflow),
        BinOp::Sub => a.checked_sub(b).ok_or_else(overflow),
        BinOp::Mul => a.checked_mul(b).ok_or_else(overflow),
        BinOp::Div | BinOp::Mod if b == 0 => Err(Fault::new(
            FaultKind::DivisionByZero,
            span,
            format!("{a} {} 0", op.symbol()),
        )),
        BinOp::Div => a.checked_div(b).ok_or_else(overflow),
        BinOp::Mod => a.checked_rem(b).ok_or_else(overflow),
        _ => unreachable!("not an arithmetic operator"),
    }
}

pub(crate) fn compare(op: BinOp, a: i64, b: i64) -> bool {
    match op {
        BinOp::Lt => a < b,
        BinOp::Le => a <= b,
        BinOp::Gt => a > b,
        BinOp::Ge => a >= b,
        BinOp::Eq => a == b,
        BinOp::Ne => a != b,
        _ => unreachable!("not a comparison"),
    }
}

pub(crate) fn index_fault(i: i64, len: usize, span: Span) -> Fault {
    Fault::new(
        FaultKind::IndexOutOfBounds,
        span,
        format!("index {i} outside array of size {len}"),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Int(i64),
    Bool(bool),
    Arr(usize),
}

enum Stop {
    Fault(Fault),
    Budget(BudgetKind, Fault),
}

impl From<Fault> for Stop {
    fn from(f: Fault) -> Self {
        Stop::Fault(f)
    }
}

enum Flow {
    Next,
    Break,
    Return(Option<Slot>),
}

type Scopes = Vec<HashMap<String, Slot>>;

struct Interp<'p> {
    program: &'p AnnotatedProgram,
    heap: Vec<Vec<i64>>,
    steps: u64,
    depth: u32,
    budget: Budget,
}

const RED_ZONE: usize = 128 * 1024;
const STACK_GROWTH: usize = 4 * 1024 * 1024;

impl<'p> Interp<'p> {
    fn new(program: &'p AnnotatedProgram, budget: Budget, steps: u64) -> Self {
        Interp {
            program,
            heap: Vec::new(),
            steps,
            depth: 0,
            budget,
        }
    }

    fn alloc(&mut self, v: Value) -> Slot {
        match v {
            Value::Int(n) => Slot::Int(n),
            Value::Bool(b) => Slot::Bool(b),
            Value::Arr(items) => {
                self.heap.push(items);
                Slot::Arr(self.heap.len() - 1)
            }
        }
    }

    fn to_value(&self, s: Slot) -> Value {
        match s {
            Slot::Int(n) => Value::Int(n),
            Slot::Bool(b) => Value::Bool(b),
            Slot::Arr(h) => Value::Arr(self.heap[h].clone()),
        }
    }

    fn tick(&mut self, span: Span) -> Result<(), Stop> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(Stop::Budget(
                BudgetKind::Steps,
                Fault::new(
                    FaultKind::StepBudget,
                    span,
                    format!("more than {} steps", self.budget.max_steps),
                ),
            ));
        }
        Ok(())
    }

    fn call(&mut self, f: &'p FunctionDef, args: Vec<Slot>, span: Span) -> Result<Option<Slot>, Stop> {
        if f.body.is_empty() {
            return Err(Stop::Fault(Fault::new(
                FaultKind::NoImplementation,
                span,
                format!("`{}` has no body", f.name),
            )));
        }
        if self.depth >= self.budget.max_depth {
            return Err(Stop::Budget(
                BudgetKind::RecursionDepth,
                Fault::new(
                    FaultKind::RecursionDepth,
                    span,
                    format!("call depth above {}", self.budget.max_depth),
                ),
            ));
        }
        self.tick(span)?;
        let frame: HashMap<String, Slot> = f.params.iter().map(|p| p.name.clone()).zip(args).collect();
        let mut scopes: Scopes = vec![frame];
        self.depth += 1;
        let flow = stacker::maybe_grow(RED_ZONE, STACK_GROWTH, || self.exec_block(&f.body, &mut scopes));
        self.depth -= 1;
        match flow? {
            Flow::Return(v) => Ok(v),
            _ if f.ret == Type::Void => Ok(None),
            _ => Err(Stop::Fault(Fault::new(
                FaultKind::MissingReturn,
                f.span,
                format!("`{}` ended without returning", f.name),
            ))),
        }
    }

    fn exec_block(&mut self, stmts: &'p [Stmt], scopes: &mut Scopes) -> Result<Flow, Stop> {
        scopes.push(HashMap::new());
        let mut result = Ok(Flow::Next);
        for s in stmts {
            match self.exec_stmt(s, scopes) {
                Ok(Flow::Next) => {}
                other => {
                    result = other;
                    break;
                }
            }
        }
        scopes.pop();
        result
    }

    fn exec_stmt(&mut self, s: &'p Stmt, scopes: &mut Scopes) -> Result<Flow, Stop> {
        self.tick(s.span)?;
        match &s.kind {
            StmtKind::Decl { name, init, .. } => {
                let v = self.eval(init, scopes)?;
                scopes.last_mut().expect("block scope").insert(name.clone(), v);
            }
            StmtKind::Assign { target, index, value } => {
                let v = self.eval(value, scopes)?;
                match index {
                    None => {
                        let slot = lookup_mut(scopes, target).ok_or_else(|| unbound(target, s.span))?;
                        *slot = v;
                    }
                    Some(idx) => {
                        let i = self.eval_int(idx, scopes)?;
                        let h = match lookup(scopes, target) {
                            Some(Slot::Arr(h)) => h,
                            Some(_) => return Err(mismatch(s.span, "indexed assignment to a non-array").into()),
                            None => return Err(unbound(target, s.span).into()),
                        };
                        let Slot::Int(n) = v else {
                            return Err(mismatch(s.span, "array element must be int").into());
                        };
                        let arr = &mut self.heap[h];
                        let len = arr.len();
                        match usize::try_from(i).ok().and_then(|i| arr.get_mut(i)) {
                            Some(cell) => *cell = n,
                            None => return Err(index_fault(i, len, idx.span).into()),
                        }
                    }
                }
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                if self.eval_bool(cond, scopes)? {
                    return self.exec_block(then_branch, scopes);
                } else if let Some(e) = else_branch {
                    return self.exec_block(e, scopes);
                }
            }
            StmtKind::While { cond, body } => loop {
                if !self.eval_bool(cond, scopes)? {
                    break;
                }
                match self.exec_block(body, scopes)? {
                    Flow::Next => self.tick(s.span)?,
                    Flow::Break => break,
                    ret @ Flow::Return(_) => return Ok(ret),
                }
            },
            StmtKind::Break => return Ok(Flow::Break),
            StmtKind::Return(e) => {
                let v = match e {
                    Some(e) => Some(self.eval(e, scopes)?),
                    None => None,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Expr(e) => {
                if let ExprKind::Call(name, args) = &e.kind {
                    self.eval_call(name, args, e.span, scopes)?;
                } else {
                    self.eval(e, scopes)?;
                }
            }
        }
        Ok(Flow::Next)
    }

    fn eval_int(&mut self, e: &'p Expr, scopes: &mut Scopes) -> Result<i64, Stop> {
        match self.eval(e, scopes)? {
            Slot::Int(n) => Ok(n),
            _ => Err(mismatch(e.span, "expected int").into()),
        }
    }

    fn eval_bool(&mut self, e: &'p Expr, scopes: &mut Scopes) -> Result<bool, Stop> {
        match self.eval(e, scopes)? {
            Slot::Bool(b) => Ok(b),
            _ => Err(mismatch(e.span, "expected bool").into()),
        }
    }

    fn eval_array(&mut self, e: &'p Expr, scopes: &mut Scopes) -> Result<usize, Stop> {
        match self.eval(e, scopes)? {
            Slot::Arr(h) => Ok(h),
            _ => Err(mismatch(e.span, "expected int[]").into()),
        }
    }

    fn eval(&mut self, e: &'p Expr, scopes: &mut Scopes) -> Result<Slot, Stop> {
        match &e.kind {
            ExprKind::Int(n) => Ok(Slot::Int(*n)),
            ExprKind::Bool(b) => Ok(Slot::Bool(*b)),
            ExprKind::Var(name) => lookup(scopes, name).ok_or_else(|| unbound(name, e.span).into()),
            ExprKind::Index(base, idx) => {
                let h = self.eval_array(base, scopes)?;
                let i = self.eval_int(idx, scopes)?;
                let arr = &self.heap[h];
                usize::try_from(i)
                    .ok()
                    .and_then(|i| arr.get(i))
                    .map(|n| Slot::Int(*n))
                    .ok_or_else(|| index_fault(i, arr.len(), idx.span).into())
            }
            ExprKind::Size(base) => {
                let h = self.eval_array(base, scopes)?;
                Ok(Slot::Int(self.heap[h].len() as i64))
            }
            ExprKind::Unary(UnOp::Neg, operand) => {
                let n = self.eval_int(operand, scopes)?;
                n.checked_neg()
                    .map(Slot::Int)
                    .ok_or_else(|| Fault::new(FaultKind::Overflow, e.span, format!("-({n})")).into())
            }
            ExprKind::Unary(UnOp::Not, operand) => Ok(Slot::Bool(!self.eval_bool(operand, scopes)?)),
            ExprKind::Binary(op, lhs, rhs) => match op {
                BinOp::And => Ok(Slot::Bool(self.eval_bool(lhs, scopes)? && self.eval_bool(rhs, scopes)?)),
                BinOp::Or => Ok(Slot::Bool(self.eval_bool(lhs, scopes)? || self.eval_bool(rhs, scopes)?)),
                BinOp::Implies => Ok(Slot::Bool(!self.eval_bool(lhs, scopes)? || self.eval_bool(rhs, scopes)?)),
                BinOp::Eq | BinOp::Ne => {
                    let l = self.eval(lhs, scopes)?;
                    let r = self.eval(rhs, scopes)?;
                    let eq = match (l, r) {
                        (Slot::Int(a), Slot::Int(b)) => a == b,
                        (Slot::Bool(a), Slot::Bool(b)) => a == b,
                        (Slot::Arr(a), Slot::Arr(b)) => self.heap[a] == self.heap[b],
                        _ => return Err(mismatch(e.span, "comparison of different types").into()),
                    };
                    Ok(Slot::Bool(eq == (*op == BinOp::Eq)))
                }
                op if op.is_comparison() => {
                    let a = self.eval_int(lhs, scopes)?;
                    let b = self.eval_int(rhs, scopes)?;
                    Ok(Slot::Bool(compare(*op, a, b)))
                }
                op => {
                    let a = self.eval_int(lhs, scopes)?;
                    let b = self.eval_int(rhs, scopes)?;
                    Ok(Slot::Int(arith(*op, a, b, e.span)?))
                }
            },
            ExprKind::Call(name, args) => self
                .eval_call(name, args, e.span, scopes)?
                .ok_or_else(|| mismatch(e.span, format!("`{name}` returns no value")).into()),
            ExprKind::Slice(..) | ExprKind::Quant { .. } => {
                Err(mismatch(e.span, "slices and quantifiers are not executable").into())
            }
        }
    }

    fn eval_call(
        &mut self,
        name: &str,
        args: &'p [Expr],
        span: Span,
        scopes: &mut Scopes,
    ) -> Result<Option<Slot>, Stop> {
        let mut slots = Vec::with_capacity(args.len());
        for a in args {
            slots.push(self.eval(a, scopes)?);
        }
        if is_builtin(name) {
            let values: Vec<Value> = slots.into_iter().map(|s| self.to_value(s)).collect();
            let v = call_builtin(name, &values).map_err(|m| mismatch(span, m))?;
            return Ok(Some(self.alloc(v)));
        }
        let program = self.program;
        let f = program
            .function(name)
            .ok_or_else(|| Fault::new(FaultKind::NoImplementation, span, format!("no function `{name}`")))?;
        if f.params.len() != slots.len() {
            return Err(mismatch(span, format!("`{name}` called with {} argument(s)", slots.len())).into());
        }
        self.call(f, slots, span)
    }
}

fn lookup(scopes: &Scopes, name: &str) -> Option<Slot> {
    scopes.iter().rev().find_map(|s| s.get(name).copied())
}

fn lookup_mut<'s>(scopes: &'s mut Scopes, name: &str) -> Option<&'s mut Slot> {
    scopes.iter_mut().rev().find_map(|s| s.get_mut(name))
}

fn unbound(name: &str, span: Span) -> Fault {
    Fault::new(FaultKind::UnboundVariable, span, format!("`{name}` is not bound"))
}

fn mismatch(span: Span, msg: impl Into<String>) -> Fault {
    Fault::new(FaultKind::TypeMismatch, span, msg)
}

//! Static checks over a parsed program: scoping, types, control flow,
//! behavior shapes, and coverage of inputs and outputs by the specification.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::token::Span;
use crate::eval::builtins::{builtin_signature, is_builtin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }

    pub fn warning(span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {level}: {}", self.line, self.col, self.message)
    }
}

/// Returns every problem found; an empty list means the program is clean.
pub fn validate(program: &AnnotatedProgram) -> Vec<Diagnostic> {
    let mut v = Validator {
        program,
        diags: Vec::new(),
    };
    v.run();
    v.diags
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

struct Validator<'p> {
    program: &'p AnnotatedProgram,
    diags: Vec<Diagnostic>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    Code,
    Predicate,
}

struct Scope {
    frames: Vec<HashMap<String, Type>>,
}

impl Scope {
    fn new(params: &[Param]) -> Self {
        Scope {
            frames: vec![params.iter().map(|p| (p.name.clone(), p.ty)).collect()],
        }
    }

    fn lookup(&self, name: &str) -> Option<Type> {
        self.frames.iter().rev().find_map(|f| f.get(name).copied())
    }

    fn push(&mut self) {
        self.frames.push(HashMap::new());
    }

    fn pop(&mut self) {
        self.frames.pop();
    }

    fn declare(&mut self, name: &str, ty: Type) -> bool {
        self.frames
            .last_mut()
            .expect("scope has a frame")
            .insert(name.to_string(), ty)
            .is_none()
    }
}

impl<'p> Validator<'p> {
    fn error(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(span, msg));
    }

    fn warning(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::warning(span, msg));
    }

    fn run(&mut self) {
        if self.program.function(&self.program.entry).is_none() {
            self.error(
                Span::default(),
                format!("entry function `{}` is not defined", self.program.entry),
            );
        }
        let mut seen = HashSet::new();
        for f in &self.program.functions {
            if !seen.insert(f.name.as_str()) {
                self.error(f.span, format!("function `{}` is defined twice", f.name));
            }
            if is_builtin(&f.name) {
                self.error(f.span, format!("`{}` shadows a built-in", f.name));
            }
        }
        for f in &self.program.functions {
            self.check_function(f);
        }
    }

    fn check_function(&mut self, f: &FunctionDef) {
        let mut names = HashSet::new();
        for p in &f.params {
            if !names.insert(p.name.as_str()) {
                self.error(
                    f.span,
                    format!("parameter `{}` of `{}` is declared twice", p.name, f.name),
                );
            }
            if p.name == RETURN_VALUE {
                self.error(f.span, format!("`{RETURN_VALUE}` is reserved for the return value"));
            }
        }

        let mut scope = Scope::new(&f.params);
        scope.push();
        for s in &f.body {
            self.check_stmt(f, s, &mut scope, false);
        }
        if !f.body.is_empty() && f.ret != Type::Void && !always_returns(&f.body) {
            self.error(
                f.span,
                format!("not every path through `{}` ends in a return", f.name),
            );
        }

        if let Some(pre) = &f.pre {
            let scope = Scope::new(&f.params);
            self.check_predicate(pre, scope);
        }
        if let Some(post) = &f.post {
            let mut scope = Scope::new(&f.params);
            if f.ret != Type::Void {
                scope.declare(RETURN_VALUE, f.ret);
            }
            self.check_predicate(post, scope);
        }
        if f.pre.is_some() || f.post.is_some() {
            self.check_coverage(f);
        }
        for b in f.behaviors() {
            self.check_behavior(f, b);
        }
    }

    fn check_predicate(&mut self, pred: &NamedPredicate, mut scope: Scope) {
        for clause in &pred.clauses {
            if let Some(t) = self.infer(clause, &mut scope, Context::Predicate) {
                if t != Type::Bool {
                    self.error(
                        clause.span,
                        format!("clause of `{}` has type {t}, expected bool", pred.name),
                    );
                }
            }
        }
    }

    fn check_coverage(&mut self, f: &FunctionDef) {
        let mut free = BTreeSet::new();
        for pred in f.pre.iter().chain(f.post.iter()) {
            for c in &pred.clauses {
                free_vars(c, &mut Vec::new(), &mut free);
            }
        }
        for p in &f.params {
            if !free.contains(&p.name) {
                self.warning(
                    f.span,
                    format!("input variable `{}` not free in specification", p.name),
                );
            }
        }
        if f.ret != Type::Void && !free.contains(RETURN_VALUE) {
            self.warning(
                f.span,
                format!("output variable `{RETURN_VALUE}` not free in specification"),
            );
        }
    }

    fn check_behavior(&mut self, f: &FunctionDef, b: &Behavior) {
        for p in &f.params {
            match b.input.get(&p.name) {
                None => self.error(
                    b.span,
                    format!("behavior does not bind input `{}`", p.name),
                ),
                Some(v) if v.ty() != p.ty => self.error(
                    b.span,
                    format!("input `{}` is {}, declared {}", p.name, v.ty(), p.ty),
                ),
                _ => {}
            }
        }
        for name in b.input.keys() {
            if f.param(name).is_none() {
                self.error(b.span, format!("`{name}` is not a parameter of `{}`", f.name));
            }
        }
        for (name, v) in &b.output {
            let declared = if name == RETURN_VALUE {
                Some(f.ret)
            } else {
                f.param(name)
                    .map(|p| p.ty)
                    .filter(|t| *t == Type::IntArray)
            };
            match declared {
                None | Some(Type::Void) => self.error(
                    b.span,
                    format!("`{name}` is not an output of `{}`", f.name),
                ),
                Some(t) if t != v.ty() => self.error(
                    b.span,
                    format!("output `{name}` is {}, declared {t}", v.ty()),
                ),
                _ => {}
            }
        }
        if f.is_spec_only() && f.ret != Type::Void && !b.output.contains_key(RETURN_VALUE) {
            self.error(
                b.span,
                format!("`{}` has no body, so its behaviors must give `{RETURN_VALUE}`", f.name),
            );
        }
    }

    fn check_block(&mut self, f: &FunctionDef, stmts: &[Stmt], scope: &mut Scope, in_loop: bool) {
        scope.push();
        for s in stmts {
            self.check_stmt(f, s, scope, in_loop);
        }
        scope.pop();
    }

    fn check_stmt(&mut self, f: &FunctionDef, s: &Stmt, scope: &mut Scope, in_loop: bool) {
        match &s.kind {
            StmtKind::Decl { ty, name, init } => {
                if let Some(t) = self.infer(init, scope, Context::Code) {
                    if t != *ty {
                        self.error(s.span, format!("`{name}` is {ty} but initialized with {t}"));
                    }
                }
                if !scope.declare(name, *ty) {
                    self.error(s.span, format!("`{name}` is already declared in this block"));
                }
            }
            StmtKind::Assign {
                target,
                index,
                value,
            } => {
                let Some(target_ty) = scope.lookup(target) else {
                    self.error(s.span, format!("unknown identifier `{target}`"));
                    return;
                };
                let vt = self.infer(value, scope, Context::Code);
                match index {
                    Some(i) => {
                        if target_ty != Type::IntArray {
                            self.error(s.span, format!("`{target}` is not an array"));
                        }
                        self.expect_type(i, scope, Context::Code, Type::Int);
                        if let Some(t) = vt {
                            if t != Type::Int {
                                self.error(s.span, format!("array element assigned {t}"));
                            }
                        }
                    }
                    None => {
                        if let Some(t) = vt {
                            if t != target_ty {
                                self.error(
                                    s.span,
                                    format!("`{target}` is {target_ty} but assigned {t}"),
                                );
                            }
                        }
                    }
                }
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.expect_type(cond, scope, Context::Code, Type::Bool);
                self.check_block(f, then_branch, scope, in_loop);
                if let Some(e) = else_branch {
                    self.check_block(f, e, scope, in_loop);
                }
            }
            StmtKind::While { cond, body } => {
                self.expect_type(cond, scope, Context::Code, Type::Bool);
                self.check_block(f, body, scope, true);
            }
            StmtKind::Break => {
                if !in_loop {
                    self.error(s.span, "`break` outside of a loop");
                }
            }
            StmtKind::Return(value) => match (value, f.ret) {
                (None, Type::Void) => {}
                (None, t) => self.error(s.span, format!("`{}` must return {t}", f.name)),
                (Some(_), Type::Void) => {
                    self.error(s.span, format!("`{}` returns void", f.name))
                }
                (Some(e), t) => self.expect_type(e, scope, Context::Code, t),
            },
            StmtKind::Expr(e) => {
                if !matches!(e.kind, ExprKind::Call(_, _)) {
                    self.error(s.span, "only calls may be used as statements");
                }
                self.infer_call_allowing_void(e, scope);
            }
        }
    }

    fn infer_call_allowing_void(&mut self, e: &Expr, scope: &mut Scope) {
        if let ExprKind::Call(name, args) = &e.kind {
            if let Some(f) = self.program.function(name) {
                if f.ret == Type::Void {
                    self.check_call_args(e.span, name, &f.params.iter().map(|p| p.ty).collect::<Vec<_>>(), args, scope, Context::Code);
                    return;
                }
            }
        }
        self.infer(e, scope, Context::Code);
    }

    fn expect_type(&mut self, e: &Expr, scope: &mut Scope, ctx: Context, want: Type) {
        if let Some(t) = self.infer(e, scope, ctx) {
            if t != want {
                self.error(e.span, format!("expected {want}, found {t}"));
            }
        }
    }

    fn check_call_args(
        &mut self,
        span: Span,
        name: &str,
        params: &[Type],
        args: &[Expr],
        scope: &mut Scope,
        ctx: Context,
    ) {
        if params.len() != args.len() {
            self.error(
                span,
                format!(
                    "`{name}` takes {} argument(s), {} given",
                    params.len(),
                    args.len()
                ),
            );
        }
        for (a, want) in args.iter().zip(params) {
            self.expect_type(a, scope, ctx, *want);
        }
    }

    /// Infers the type of `e`; `None` once an error has been reported for it.
    fn infer(&mut self, e: &Expr, scope: &mut Scope, ctx: Context) -> Option<Type> {
        match &e.kind {
            ExprKind::Int(_) => Some(Type::Int),
            ExprKind::Bool(_) => Some(Type::Bool),
            ExprKind::Var(name) => match scope.lookup(name) {
                Some(t) => Some(t),
                None => {
                    self.error(e.span, format!("unknown identifier `{name}`"));
                    None
                }
            },
            ExprKind::Index(base, idx) => {
                let bt = self.infer(base, scope, ctx);
                self.expect_type(idx, scope, ctx, Type::Int);
                match bt {
                    Some(Type::IntArray) => Some(Type::Int),
                    Some(t) => {
                        self.error(e.span, format!("cannot index a value of type {t}"));
                        None
                    }
                    None => None,
                }
            }
            ExprKind::Slice(base, lo, hi) => {
                if ctx == Context::Code {
                    self.error(e.span, "slices are only allowed in predicates");
                }
                let bt = self.infer(base, scope, ctx);
                self.expect_type(lo, scope, ctx, Type::Int);
                self.expect_type(hi, scope, ctx, Type::Int);
                match bt {
                    Some(Type::IntArray) => Some(Type::IntArray),
                    Some(t) => {
                        self.error(e.span, format!("cannot slice a value of type {t}"));
                        None
                    }
                    None => None,
                }
            }
            ExprKind::Size(base) => match self.infer(base, scope, ctx) {
                Some(Type::IntArray) => Some(Type::Int),
                Some(t) => {
                    self.error(e.span, format!("`.size` of a value of type {t}"));
                    None
                }
                None => None,
            },
            ExprKind::Unary(op, operand) => {
                let want = match op {
                    UnOp::Neg => Type::Int,
                    UnOp::Not => Type::Bool,
                };
                self.expect_type(operand, scope, ctx, want);
                Some(want)
            }
            ExprKind::Binary(op, lhs, rhs) => {
                if op.is_logical() {
                    self.expect_type(lhs, scope, ctx, Type::Bool);
                    self.expect_type(rhs, scope, ctx, Type::Bool);
                    Some(Type::Bool)
                } else if matches!(op, BinOp::Eq | BinOp::Ne) {
                    let lt = self.infer(lhs, scope, ctx);
                    let rt = self.infer(rhs, scope, ctx);
                    if let (Some(l), Some(r)) = (lt, rt) {
                        if l != r {
                            self.error(e.span, format!("cannot compare {l} with {r}"));
                        }
                    }
                    Some(Type::Bool)
                } else {
                    self.expect_type(lhs, scope, ctx, Type::Int);
                    self.expect_type(rhs, scope, ctx, Type::Int);
                    if op.is_comparison() {
                        Some(Type::Bool)
                    } else {
                        Some(Type::Int)
                    }
                }
            }
            ExprKind::Quant {
                var, lo, hi, body, ..
            } => {
                if ctx == Context::Code {
                    self.error(e.span, "quantifiers are only allowed in predicates");
                }
                self.expect_type(lo, scope, ctx, Type::Int);
                self.expect_type(hi, scope, ctx, Type::Int);
                scope.push();
                scope.declare(var, Type::Int);
                self.expect_type(body, scope, ctx, Type::Bool);
                scope.pop();
                Some(Type::Bool)
            }
            ExprKind::Call(name, args) => {
                if let Some((params, ret)) = builtin_signature(name) {
                    self.check_call_args(e.span, name, params, args, scope, ctx);
                    return Some(ret);
                }
                let Some(f) = self.program.function(name) else {
                    self.error(e.span, format!("unknown function `{name}`"));
                    for a in args {
                        self.infer(a, scope, ctx);
                    }
                    return None;
                };
                let params: Vec<Type> = f.params.iter().map(|p| p.ty).collect();
                let ret = f.ret;
                self.check_call_args(e.span, name, &params, args, scope, ctx);
                if ret == Type::Void {
                    self.error(e.span, format!("`{name}` returns no value"));
                    return None;
                }
                Some(ret)
            }
        }
    }
}

/// True when every path through `stmts` executes a `return`.
fn always_returns(stmts: &[Stmt]) -> bool {
    stmts.iter().any(|s| match &s.kind {
        StmtKind::Return(_) => true,
        StmtKind::If {
            then_branch,
            else_branch: Some(else_branch),
            ..
        } => always_returns(then_branch) && always_returns(else_branch),
        _ => false,
    })
}

/// Collects variables occurring free in `e`.
pub fn free_vars(e: &Expr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Bool(_) => {}
        ExprKind::Var(name) => {
            if !bound.iter().any(|b| b == name) {
                out.insert(name.clone());
            }
        }
        ExprKind::Index(a, b) => {
            free_vars(a, bound, out);
            free_vars(b, bound, out);
        }
        ExprKind::Slice(a, b, c) => {
            free_vars(a, bound, out);
            free_vars(b, bound, out);
            free_vars(c, bound, out);
        }
        ExprKind::Size(a) | ExprKind::Unary(_, a) => free_vars(a, bound, out),
        ExprKind::Binary(_, a, b) => {
            free_vars(a, bound, out);
            free_vars(b, bound, out);
        }
        ExprKind::Quant {
            var, lo, hi, body, ..
        } => {
            free_vars(lo, bound, out);
            free_vars(hi, bound, out);
            bound.push(var.clone());
            free_vars(body, bound, out);
            bound.pop();
        }
        ExprKind::Call(_, args) => {
            for a in args {
                free_vars(a, bound, out);
            }
        }
    }
}

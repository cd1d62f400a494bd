//! Canonical source rendering. `parse(pretty_print(p))` is structurally equal
//! to `p` for every parsed program.

use std::fmt::Write;

use super::ast::*;
use crate::value::{format_valuation, Valuation};

const INDENT: &str = "    ";

pub fn pretty_print(program: &AnnotatedProgram) -> String {
    let mut out = String::new();
    for (i, f) in program.functions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_function(&mut out, f);
    }
    out
}

fn print_function(out: &mut String, f: &FunctionDef) {
    let params: Vec<String> = f
        .params
        .iter()
        .map(|p| format!("{} {}", p.ty, p.name))
        .collect();
    let _ = write!(out, "{} {}({})", f.ret, f.name, params.join(", "));
    if f.body.is_empty() && !f.is_annotated() {
        out.push_str(";\n");
        return;
    }
    out.push_str(" {\n");
    if let Some(pre) = &f.pre {
        print_predicate(out, "@pre", pre, 1);
    }
    print_stmts(out, &f.body, 1);
    if let Some(post) = &f.post {
        print_predicate(out, "@post", post, 1);
    }
    let order = f.param_names();
    for block in &f.behavior_blocks {
        let _ = writeln!(out, "{INDENT}@behavior {} {{", block.name);
        for b in &block.behaviors {
            let _ = writeln!(out, "{INDENT}{INDENT}{}", print_behavior(b, &order));
        }
        let _ = writeln!(out, "{INDENT}}}");
    }
    out.push_str("}\n");
}

fn print_predicate(out: &mut String, keyword: &str, pred: &NamedPredicate, depth: usize) {
    let pad = INDENT.repeat(depth);
    let _ = writeln!(out, "{pad}{keyword} {} {{", pred.name);
    for clause in &pred.clauses {
        let _ = writeln!(out, "{pad}{INDENT}{};", print_expr(clause));
    }
    let _ = writeln!(out, "{pad}}}");
}

/// Renders the clauses of a predicate one per line, `;`-terminated. This is
/// the text form accepted by `pre` and `post` edits.
pub fn print_clauses(pred: &NamedPredicate) -> String {
    pred.clauses
        .iter()
        .map(|c| format!("{};", print_expr(c)))
        .collect::<Vec<_>>()
        .join("\n")
}

/// `good { input={...} output={...} }`, inputs in parameter order.
pub fn print_behavior(b: &Behavior, param_order: &[&str]) -> String {
    format!(
        "{} {{ input={} output={} }}",
        b.kind,
        print_valmap(&b.input, param_order),
        print_valmap(&b.output, &[RETURN_VALUE])
    )
}

fn print_valmap(vals: &Valuation, order: &[&str]) -> String {
    // `{}` is accepted back as an empty map
    if vals.is_empty() {
        return "{}".into();
    }
    format_valuation(vals, order)
}

pub fn print_stmts_to_string(stmts: &[Stmt]) -> String {
    let mut out = String::new();
    print_stmts(&mut out, stmts, 0);
    out
}

fn print_stmts(out: &mut String, stmts: &[Stmt], depth: usize) {
    for s in stmts {
        print_stmt(out, s, depth);
    }
}

fn print_block(out: &mut String, stmts: &[Stmt], depth: usize) {
    out.push_str("{\n");
    print_stmts(out, stmts, depth + 1);
    out.push_str(&INDENT.repeat(depth));
    out.push('}');
}

fn print_stmt(out: &mut String, s: &Stmt, depth: usize) {
    let pad = INDENT.repeat(depth);
    out.push_str(&pad);
    match &s.kind {
        StmtKind::Decl { ty, name, init } => {
            let _ = writeln!(out, "{ty} {name} = {};", print_expr(init));
        }
        StmtKind::Assign {
            target,
            index,
            value,
        } => {
            match index {
                Some(i) => {
                    let _ = write!(out, "{target}[{}]", print_expr(i));
                }
                None => out.push_str(target),
            }
            let _ = writeln!(out, " = {};", print_expr(value));
        }
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let _ = write!(out, "if ({}) ", print_expr(cond));
            print_block(out, then_branch, depth);
            if let Some(e) = else_branch {
                out.push_str(" else ");
                print_block(out, e, depth);
            }
            out.push('\n');
        }
        StmtKind::While { cond, body } => {
            let _ = write!(out, "while ({}) ", print_expr(cond));
            print_block(out, body, depth);
            out.push('\n');
        }
        StmtKind::Break => out.push_str("break;\n"),
        StmtKind::Return(None) => out.push_str("return;\n"),
        StmtKind::Return(Some(e)) => {
            let _ = writeln!(out, "return {};", print_expr(e));
        }
        StmtKind::Expr(e) => {
            let _ = writeln!(out, "{};", print_expr(e));
        }
    }
}

const UNARY_PREC: u8 = 7;
const ATOM_PREC: u8 = 8;

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(op, _, _) => op.precedence(),
        ExprKind::Unary(_, _) => UNARY_PREC,
        _ => ATOM_PREC,
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    if precedence(e) < min_prec {
        out.push('(');
        write_expr(out, e, 0);
        out.push(')');
        return;
    }
    match &e.kind {
        ExprKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Index(base, idx) => {
            write_expr(out, base, ATOM_PREC);
            out.push('[');
            write_expr(out, idx, 0);
            out.push(']');
        }
        ExprKind::Slice(base, lo, hi) => {
            write_expr(out, base, ATOM_PREC);
            out.push('[');
            write_expr(out, lo, 0);
            out.push(':');
            write_expr(out, hi, 0);
            out.push(']');
        }
        ExprKind::Size(base) => {
            write_expr(out, base, ATOM_PREC);
            out.push_str(".size");
        }
        ExprKind::Unary(op, operand) => {
            let mut inner = String::new();
            write_expr(&mut inner, operand, UNARY_PREC);
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            // `--x` would lex as a decrement
            if inner.starts_with('-') {
                let _ = write!(out, "({inner})");
            } else {
                out.push_str(&inner);
            }
        }
        ExprKind::Binary(op, lhs, rhs) => {
            let p = op.precedence();
            let (lmin, rmin) = if *op == BinOp::Implies {
                (p + 1, p)
            } else if op.is_comparison() {
                (p + 1, p + 1)
            } else {
                (p, p + 1)
            };
            write_expr(out, lhs, lmin);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, rhs, rmin);
        }
        ExprKind::Quant {
            q,
            var,
            lo,
            hi,
            body,
        } => {
            out.push_str(match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            });
            let _ = write!(out, " int {var}:[");
            write_expr(out, lo, 0);
            out.push_str(" .. ");
            write_expr(out, hi, 0);
            out.push_str("] (");
            write_expr(out, body, 0);
            out.push(')');
        }
        ExprKind::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
    }
}

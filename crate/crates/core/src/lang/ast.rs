//! Syntax tree for annotated programs.
//!
//! One expression type serves both implementation code and predicates.
//! Quantifiers and slices are only legal in predicates; [`validate`] rejects
//! them in code.
//!
//! [`validate`]: super::validate::validate

use std::fmt;

use serde::{Deserialize, Serialize};

use super::token::Span;
use crate::value::Valuation;

/// The name predicates use for a function's return value.
pub const RETURN_VALUE: &str = "rv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Type {
    Int,
    Bool,
    IntArray,
    Void,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Int => "int",
            Type::Bool => "bool",
            Type::IntArray => "int[]",
            Type::Void => "void",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedProgram {
    pub functions: Vec<FunctionDef>,
    /// Name of the function under analysis.
    pub entry: String,
}

impl AnnotatedProgram {
    /// Builds a program, choosing as entry the first function that carries an
    /// annotation block, or the first function when none does.
    pub fn new(functions: Vec<FunctionDef>) -> Self {
        let entry = functions
            .iter()
            .find(|f| f.is_annotated())
            .or(functions.first())
            .map(|f| f.name.clone())
            .unwrap_or_default();
        AnnotatedProgram { functions, entry }
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn function_mut(&mut self, name: &str) -> Option<&mut FunctionDef> {
        self.functions.iter_mut().find(|f| f.name == name)
    }

    /// The entry function. Panics only if the program was built by hand with
    /// a dangling entry name; parsed programs always have one.
    pub fn entry_function(&self) -> &FunctionDef {
        self.function(&self.entry)
            .expect("entry names an existing function")
    }

    pub fn entry_function_mut(&mut self) -> &mut FunctionDef {
        let entry = self.entry.clone();
        self.function_mut(&entry)
            .expect("entry names an existing function")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: Type,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<Param>,
    pub ret: Type,
    /// Empty for an interface or a spec-only function.
    pub body: Vec<Stmt>,
    pub pre: Option<NamedPredicate>,
    pub post: Option<NamedPredicate>,
    pub behavior_blocks: Vec<BehaviorBlock>,
    pub span: Span,
}

impl FunctionDef {
    pub fn is_annotated(&self) -> bool {
        self.pre.is_some() || self.post.is_some() || !self.behavior_blocks.is_empty()
    }

    pub fn is_spec_only(&self) -> bool {
        self.body.is_empty()
    }

    /// All behaviors in source order, across blocks.
    pub fn behaviors(&self) -> impl Iterator<Item = &Behavior> {
        self.behavior_blocks.iter().flat_map(|b| b.behaviors.iter())
    }

    pub fn behavior(&self, index: usize) -> Option<&Behavior> {
        self.behaviors().nth(index)
    }

    pub fn behavior_count(&self) -> usize {
        self.behavior_blocks.iter().map(|b| b.behaviors.len()).sum()
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }

    /// The spec name to use for a new annotation block.
    pub fn spec_name(&self) -> String {
        self.pre
            .as_ref()
            .map(|p| p.name.clone())
            .or_else(|| self.post.as_ref().map(|p| p.name.clone()))
            .or_else(|| self.behavior_blocks.first().map(|b| b.name.clone()))
            .unwrap_or_else(|| self.name.clone())
    }
}

/// `@pre name {...}` or `@post name {...}`. Clauses are conjoined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPredicate {
    pub name: String,
    pub clauses: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorBlock {
    pub name: String,
    pub behaviors: Vec<Behavior>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BehaviorKind {
    Good,
    Bad,
    DontCare,
}

impl fmt::Display for BehaviorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BehaviorKind::Good => "good",
            BehaviorKind::Bad => "bad",
            BehaviorKind::DontCare => "dontCare",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub kind: BehaviorKind,
    pub input: Valuation,
    pub output: Valuation,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Decl {
        ty: Type,
        name: String,
        init: Expr,
    },
    Assign {
        target: String,
        index: Option<Expr>,
        value: Expr,
    },
    If {
        cond: Expr,
        then_branch: Vec<Stmt>,
        else_branch: Option<Vec<Stmt>>,
    },
    While {
        cond: Expr,
        body: Vec<Stmt>,
    },
    Break,
    Return(Option<Expr>),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Implies,
}

impl BinOp {
    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge
        )
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or | BinOp::Implies)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Implies => "=>",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Implies => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Bool(bool),
    Var(String),
    Index(Box<Expr>, Box<Expr>),
    /// `a[lo:hi]`, inclusive on both ends.
    Slice(Box<Expr>, Box<Expr>, Box<Expr>),
    /// `a.size`
    Size(Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Single-variable bounded quantifier over the inclusive range
    /// `[lo .. hi]`. Multi-variable binders are desugared into nests.
    Quant {
        q: Quantifier,
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
        body: Box<Expr>,
    },
    Call(String, Vec<Expr>),
}

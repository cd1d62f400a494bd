//! Recursive descent parser for annotated programs.
//!
//! Expression grammar, loosest first:
//!
//! ```text
//! implies := or ("=>" implies)?
//! or      := and ("||" and)*
//! and     := cmp ("&&" cmp)*
//! cmp     := add (cmpop add)*        // chains desugar to conjunctions
//! add     := mul (("+" | "-") mul)*
//! mul     := unary (("*" | "/" | "%") unary)*
//! unary   := ("!" | "-") unary | postfix
//! postfix := primary ("[" expr (":" expr)? "]" | "." "size")*
//! primary := int | bool | ident | call | "(" expr ")" | quantifier
//! ```

use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, tokenize_with_mode, LexError, LexMode};
use super::token::{Span, Token, TokenKind};
use crate::value::{Valuation, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

/// Either stage of turning text into an AST can fail.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("lex error at {0}")]
    Lex(#[from] LexError),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> Span {
        match self {
            SyntaxError::Lex(e) => e.span,
            SyntaxError::Parse(e) => e.span,
        }
    }

    pub fn message(&self) -> String {
        match self {
            SyntaxError::Lex(e) => e.message.clone(),
            SyntaxError::Parse(e) => format!("expected {}, found {}", e.expected, e.found),
        }
    }
}

pub type ParseResult<T> = Result<T, ParseError>;

/// Parses a full token stream into a program.
pub fn parse(tokens: &[Token]) -> ParseResult<AnnotatedProgram> {
    Parser::new(tokens).parse_program()
}

/// Lexes and parses a source file.
pub fn parse_program(source: &str) -> Result<AnnotatedProgram, SyntaxError> {
    let tokens = tokenize(source)?;
    Ok(parse(&tokens)?)
}

/// Parses a single expression, e.g. a domain filter.
pub fn parse_expr(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut p = Parser::new(&tokens);
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses the text of a `pre` or `post` edit: either a full `@pre name {...}`
/// block (the name is returned) or bare clauses separated by optional `;`.
pub fn parse_clauses(source: &str) -> Result<(Option<String>, Vec<Expr>), SyntaxError> {
    let tokens = tokenize(source)?;
    let mut p = Parser::new(&tokens);
    let result = match p.peek() {
        TokenKind::AtPre | TokenKind::AtPost => {
            p.advance();
            let pred = p.predicate_block()?;
            (Some(pred.name), pred.clauses)
        }
        _ => {
            let mut clauses = Vec::new();
            while !p.at(&TokenKind::Eof) {
                clauses.push(p.expr()?);
                p.eat(&TokenKind::Semi);
            }
            (None, clauses)
        }
    };
    p.expect_eof()?;
    Ok(result)
}

/// Parses the text of a `body` edit: a statement list.
pub fn parse_statements(source: &str) -> Result<Vec<Stmt>, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut p = Parser::new(&tokens);
    let mut stmts = Vec::new();
    while !p.at(&TokenKind::Eof) {
        stmts.push(p.stmt()?);
    }
    Ok(stmts)
}

/// Parses the text of a `behaviors-append` edit: bare behavior entries or a
/// whole `@behavior name {...}` block.
pub fn parse_behaviors(source: &str) -> Result<(Option<String>, Vec<Behavior>), SyntaxError> {
    let block = source.trim_start().starts_with("@behavior");
    let mode = if block {
        LexMode::Program
    } else {
        LexMode::Behaviors
    };
    let tokens = tokenize_with_mode(source, mode)?;
    let mut p = Parser::new(&tokens);
    let result = if block {
        p.advance();
        let b = p.behavior_block()?;
        (Some(b.name), b.behaviors)
    } else {
        let mut out = Vec::new();
        while !p.at(&TokenKind::Eof) {
            out.push(p.behavior()?);
        }
        (None, out)
    };
    p.expect_eof()?;
    Ok(result)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token]) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn current(&self) -> &Token {
        let last = self.tokens.len().saturating_sub(1);
        &self.tokens[self.pos.min(last)]
    }

    fn peek(&self) -> &TokenKind {
        &self.current().kind
    }

    fn span(&self) -> Span {
        self.current().span
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == kind
    }

    fn advance(&mut self) -> &Token {
        let tok = &self.tokens[self.pos.min(self.tokens.len() - 1)];
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: impl Into<String>) -> ParseResult<T> {
        Err(ParseError {
            span: self.span(),
            expected: expected.into(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, kind: TokenKind) -> ParseResult<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.error(kind.to_string())
        }
    }

    fn expect_eof(&self) -> ParseResult<()> {
        if self.at(&TokenKind::Eof) {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn ident(&mut self) -> ParseResult<String> {
        if let TokenKind::Ident(name) = self.peek() {
            let name = name.clone();
            self.advance();
            Ok(name)
        } else {
            self.error("identifier")
        }
    }

    fn parse_program(&mut self) -> ParseResult<AnnotatedProgram> {
        let mut functions = Vec::new();
        while !self.at(&TokenKind::Eof) {
            functions.push(self.function()?);
        }
        if functions.is_empty() {
            return self.error("function definition");
        }
        Ok(AnnotatedProgram::new(functions))
    }

    fn is_type_start(&self) -> bool {
        matches!(
            self.peek(),
            TokenKind::KwInt | TokenKind::KwBool | TokenKind::KwVoid
        )
    }

    fn ty(&mut self) -> ParseResult<Type> {
        let base = match self.peek() {
            TokenKind::KwInt => Type::Int,
            TokenKind::KwBool => Type::Bool,
            TokenKind::KwVoid => Type::Void,
            _ => return self.error("type"),
        };
        self.advance();
        if base == Type::Int && self.at(&TokenKind::LBracket) {
            self.advance();
            self.expect(TokenKind::RBracket)?;
            return Ok(Type::IntArray);
        }
        Ok(base)
    }

    fn function(&mut self) -> ParseResult<FunctionDef> {
        let span = self.span();
        if !self.is_type_start() {
            return self.error("function definition");
        }
        let ret = self.ty()?;
        let name = self.ident()?;
        self.expect(TokenKind::LParen)?;
        let mut params = Vec::new();
        if !self.at(&TokenKind::RParen) {
            loop {
                let ty = self.ty()?;
                if ty == Type::Void {
                    return Err(ParseError {
                        span: self.span(),
                        expected: "parameter type int, bool or int[]".into(),
                        found: "`void`".into(),
                    });
                }
                let pname = self.ident()?;
                params.push(Param { name: pname, ty });
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;

        let mut f = FunctionDef {
            name,
            params,
            ret,
            body: Vec::new(),
            pre: None,
            post: None,
            behavior_blocks: Vec::new(),
            span,
        };
        if self.eat(&TokenKind::Semi) {
            return Ok(f);
        }
        self.expect(TokenKind::LBrace)?;
        while !self.at(&TokenKind::RBrace) {
            match self.peek() {
                TokenKind::AtPre => {
                    if f.pre.is_some() {
                        return self.error("at most one @pre block");
                    }
                    self.advance();
                    f.pre = Some(self.predicate_block()?);
                }
                TokenKind::AtPost => {
                    if f.post.is_some() {
                        return self.error("at most one @post block");
                    }
                    self.advance();
                    f.post = Some(self.predicate_block()?);
                }
                TokenKind::AtBehavior => {
                    self.advance();
                    f.behavior_blocks.push(self.behavior_block()?);
                }
                TokenKind::Eof => return self.error("`}`"),
                _ => f.body.push(self.stmt()?),
            }
        }
        self.expect(TokenKind::RBrace)?;
        Ok(f)
    }

    /// After `@pre` / `@post`: `name ( expr ";"? | "{" (expr ";"?)+ "}" )`.
    fn predicate_block(&mut self) -> ParseResult<NamedPredicate> {
        let name = self.ident()?;
        let mut clauses = Vec::new();
        if self.eat(&TokenKind::LBrace) {
            while !self.at(&TokenKind::RBrace) {
                clauses.push(self.expr()?);
                self.eat(&TokenKind::Semi);
            }
            if clauses.is_empty() {
                return self.error("predicate clause");
            }
            self.expect(TokenKind::RBrace)?;
        } else {
            clauses.push(self.expr()?);
            self.eat(&TokenKind::Semi);
        }
        Ok(NamedPredicate { name, clauses })
    }

    fn behavior_block(&mut self) -> ParseResult<BehaviorBlock> {
        let name = self.ident()?;
        self.expect(TokenKind::LBrace)?;
        let mut behaviors = Vec::new();
        while !self.at(&TokenKind::RBrace) {
            behaviors.push(self.behavior()?);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(BehaviorBlock { name, behaviors })
    }

    fn behavior(&mut self) -> ParseResult<Behavior> {
        let span = self.span();
        let kind = match self.peek() {
            TokenKind::Good => BehaviorKind::Good,
            TokenKind::Bad => BehaviorKind::Bad,
            TokenKind::DontCare => BehaviorKind::DontCare,
            _ => return self.error("`good`, `bad` or `dontCare`"),
        };
        self.advance();
        self.expect(TokenKind::LBrace)?;
        self.keyword_ident("input")?;
        self.expect(TokenKind::Assign)?;
        let input = self.val_map()?;
        self.eat(&TokenKind::Semi);
        self.eat(&TokenKind::Comma);
        self.keyword_ident("output")?;
        self.expect(TokenKind::Assign)?;
        let output = self.val_map()?;
        self.eat(&TokenKind::Semi);
        self.expect(TokenKind::RBrace)?;
        self.eat(&TokenKind::Semi);
        Ok(Behavior {
            kind,
            input,
            output,
            span,
        })
    }

    fn keyword_ident(&mut self, word: &str) -> ParseResult<()> {
        match self.peek() {
            TokenKind::Ident(name) if name == word => {
                self.advance();
                Ok(())
            }
            _ => self.error(format!("`{word}`")),
        }
    }

    fn val_map(&mut self) -> ParseResult<Valuation> {
        let mut map = Valuation::new();
        if let TokenKind::ArrayLit(items) = self.peek() {
            // `{}` lexes as an empty array literal
            if items.is_empty() {
                self.advance();
                return Ok(map);
            }
        }
        self.expect(TokenKind::LBrace)?;
        loop {
            let span = self.span();
            let name = self.ident()?;
            self.expect(TokenKind::Assign)?;
            let value = self.value()?;
            if map.insert(name.clone(), value).is_some() {
                return Err(ParseError {
                    span,
                    expected: "distinct variable names".into(),
                    found: format!("second binding of `{name}`"),
                });
            }
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RBrace)?;
        Ok(map)
    }

    fn value(&mut self) -> ParseResult<Value> {
        let v = match self.peek().clone() {
            TokenKind::Int(n) => Value::Int(n),
            TokenKind::Minus => {
                self.advance();
                match self.peek() {
                    TokenKind::Int(n) => Value::Int(-n),
                    _ => return self.error("integer literal"),
                }
            }
            TokenKind::True => Value::Bool(true),
            TokenKind::False => Value::Bool(false),
            TokenKind::ArrayLit(items) => Value::Arr(items),
            _ => return self.error("value"),
        };
        self.advance();
        Ok(v)
    }

    fn block_or_stmt(&mut self) -> ParseResult<Vec<Stmt>> {
        if self.eat(&TokenKind::LBrace) {
            let mut stmts = Vec::new();
            while !self.at(&TokenKind::RBrace) {
                if self.at(&TokenKind::Eof) {
                    return self.error("`}`");
                }
                stmts.push(self.stmt()?);
            }
            self.expect(TokenKind::RBrace)?;
            Ok(stmts)
        } else {
            Ok(vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> ParseResult<Stmt> {
        let span = self.span();
        let kind = match self.peek() {
            TokenKind::KwInt | TokenKind::KwBool => {
                let ty = self.ty()?;
                let name = self.ident()?;
                self.expect(TokenKind::Assign)?;
                let init = self.expr()?;
                self.expect(TokenKind::Semi)?;
                StmtKind::Decl { ty, name, init }
            }
            TokenKind::If => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.expr()?;
                self.expect(TokenKind::RParen)?;
                let then_branch = self.block_or_stmt()?;
                let else_branch = if self.eat(&TokenKind::Else) {
                    Some(self.block_or_stmt()?)
                } else {
                    None
                };
                StmtKind::If {
                    cond,
                    then_branch,
                    else_branch,
                }
            }
            TokenKind::While => {
                self.advance();
                self.expect(TokenKind::LParen)?;
                let cond = self.expr()?;
                self.expect(TokenKind::RParen)?;
                let body = self.block_or_stmt()?;
                StmtKind::While { cond, body }
            }
            TokenKind::Break => {
                self.advance();
                self.expect(TokenKind::Semi)?;
                StmtKind::Break
            }
            TokenKind::Return => {
                self.advance();
                let value = if self.at(&TokenKind::Semi) {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(TokenKind::Semi)?;
                StmtKind::Return(value)
            }
            TokenKind::Ident(_) => self.assignment_or_expr()?,
            _ => return self.error("statement"),
        };
        Ok(Stmt { kind, span })
    }

    /// `x = e;`, `x[i] = e;`, `x++;`, `x--;` or an expression statement.
    fn assignment_or_expr(&mut self) -> ParseResult<StmtKind> {
        let save = self.pos;
        let target_span = self.span();
        let target = self.ident()?;
        let index = if self.eat(&TokenKind::LBracket) {
            let i = self.expr()?;
            if !self.eat(&TokenKind::RBracket) {
                self.pos = save;
                return self.expr_stmt();
            }
            Some(i)
        } else {
            None
        };
        let step = match self.peek() {
            TokenKind::Assign => {
                self.advance();
                let value = self.expr()?;
                self.expect(TokenKind::Semi)?;
                return Ok(StmtKind::Assign {
                    target,
                    index,
                    value,
                });
            }
            TokenKind::PlusPlus => BinOp::Add,
            TokenKind::MinusMinus => BinOp::Sub,
            _ => {
                self.pos = save;
                return self.expr_stmt();
            }
        };
        self.advance();
        self.expect(TokenKind::Semi)?;
        let current = match &index {
            Some(i) => Expr::new(
                ExprKind::Index(
                    Box::new(Expr::new(ExprKind::Var(target.clone()), target_span)),
                    Box::new(i.clone()),
                ),
                target_span,
            ),
            None => Expr::new(ExprKind::Var(target.clone()), target_span),
        };
        let value = Expr::new(
            ExprKind::Binary(
                step,
                Box::new(current),
                Box::new(Expr::new(ExprKind::Int(1), target_span)),
            ),
            target_span,
        );
        Ok(StmtKind::Assign {
            target,
            index,
            value,
        })
    }

    fn expr_stmt(&mut self) -> ParseResult<StmtKind> {
        let e = self.expr()?;
        self.expect(TokenKind::Semi)?;
        Ok(StmtKind::Expr(e))
    }

    fn expr(&mut self) -> ParseResult<Expr> {
        self.implies()
    }

    fn implies(&mut self) -> ParseResult<Expr> {
        let lhs = self.or()?;
        if self.at(&TokenKind::Implies) {
            let span = self.span();
            self.advance();
            let rhs = self.implies()?;
            return Ok(binary(BinOp::Implies, lhs, rhs, span));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.and()?;
        while self.at(&TokenKind::Or) {
            let span = self.span();
            self.advance();
            let rhs = self.and()?;
            lhs = binary(BinOp::Or, lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.comparison()?;
        while self.at(&TokenKind::And) {
            let span = self.span();
            self.advance();
            let rhs = self.comparison()?;
            lhs = binary(BinOp::And, lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn comparison_op(&self) -> Option<BinOp> {
        Some(match self.peek() {
            TokenKind::Assign | TokenKind::EqEq => BinOp::Eq,
            TokenKind::Neq => BinOp::Ne,
            TokenKind::Lt => BinOp::Lt,
            TokenKind::Le => BinOp::Le,
            TokenKind::Gt => BinOp::Gt,
            TokenKind::Ge => BinOp::Ge,
            _ => return None,
        })
    }

    /// `a < b <= c` becomes `a < b && b <= c`.
    fn comparison(&mut self) -> ParseResult<Expr> {
        let first = self.additive()?;
        let mut operands = vec![first];
        let mut ops = Vec::new();
        while let Some(op) = self.comparison_op() {
            let span = self.span();
            self.advance();
            ops.push((op, span));
            operands.push(self.additive()?);
        }
        if ops.is_empty() {
            return Ok(operands.pop().expect("one operand"));
        }
        let mut result: Option<Expr> = None;
        for (i, (op, span)) in ops.into_iter().enumerate() {
            let cmp = binary(op, operands[i].clone(), operands[i + 1].clone(), span);
            result = Some(match result {
                None => cmp,
                Some(acc) => binary(BinOp::And, acc, cmp, span),
            });
        }
        Ok(result.expect("at least one comparison"))
    }

    fn additive(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.span();
            self.advance();
            let rhs = self.multiplicative()?;
            lhs = binary(op, lhs, rhs, span);
        }
    }

    fn multiplicative(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                TokenKind::Percent => BinOp::Mod,
                _ => return Ok(lhs),
            };
            let span = self.span();
            self.advance();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs, span);
        }
    }

    fn unary(&mut self) -> ParseResult<Expr> {
        let span = self.span();
        let op = match self.peek() {
            TokenKind::Not => UnOp::Not,
            TokenKind::Minus => UnOp::Neg,
            _ => return self.postfix(),
        };
        self.advance();
        let operand = self.unary()?;
        Ok(Expr::new(ExprKind::Unary(op, Box::new(operand)), span))
    }

    fn postfix(&mut self) -> ParseResult<Expr> {
        let mut e = self.primary()?;
        loop {
            let span = self.span();
            if self.eat(&TokenKind::LBracket) {
                let lo = self.expr()?;
                if self.eat(&TokenKind::Colon) {
                    let hi = self.expr()?;
                    self.expect(TokenKind::RBracket)?;
                    e = Expr::new(ExprKind::Slice(Box::new(e), Box::new(lo), Box::new(hi)), span);
                } else {
                    self.expect(TokenKind::RBracket)?;
                    e = Expr::new(ExprKind::Index(Box::new(e), Box::new(lo)), span);
                }
            } else if self.at(&TokenKind::Dot) {
                self.advance();
                match self.peek() {
                    TokenKind::Ident(field) if field == "size" => {
                        self.advance();
                        e = Expr::new(ExprKind::Size(Box::new(e)), span);
                    }
                    _ => return self.error("`size`"),
                }
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> ParseResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            TokenKind::Int(n) => {
                self.advance();
                ExprKind::Int(n)
            }
            TokenKind::True => {
                self.advance();
                ExprKind::Bool(true)
            }
            TokenKind::False => {
                self.advance();
                ExprKind::Bool(false)
            }
            TokenKind::Ident(name) => {
                self.advance();
                if self.eat(&TokenKind::LParen) {
                    let mut args = Vec::new();
                    if !self.at(&TokenKind::RParen) {
                        loop {
                            args.push(self.expr()?);
                            if !self.eat(&TokenKind::Comma) {
                                break;
                            }
                        }
                    }
                    self.expect(TokenKind::RParen)?;
                    ExprKind::Call(name, args)
                } else {
                    ExprKind::Var(name)
                }
            }
            TokenKind::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(e);
            }
            TokenKind::Forall | TokenKind::Exists => return self.quantifier(),
            _ => return self.error("expression"),
        };
        Ok(Expr::new(kind, span))
    }

    /// `forall int k:[lo .. hi] (body)` or
    /// `exists (int x:[..], int y:[..],) { body }`.
    fn quantifier(&mut self) -> ParseResult<Expr> {
        let span = self.span();
        let q = if self.at(&TokenKind::Forall) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        self.advance();
        let mut binders = Vec::new();
        if self.eat(&TokenKind::LParen) {
            loop {
                binders.push(self.binder()?);
                if !self.eat(&TokenKind::Comma) || self.at(&TokenKind::RParen) {
                    break;
                }
            }
            self.expect(TokenKind::RParen)?;
        } else {
            binders.push(self.binder()?);
        }
        let body = if self.eat(&TokenKind::LParen) {
            let b = self.expr()?;
            self.expect(TokenKind::RParen)?;
            b
        } else if self.eat(&TokenKind::LBrace) {
            let b = self.expr()?;
            self.expect(TokenKind::RBrace)?;
            b
        } else {
            return self.error("quantifier body in `(...)` or `{...}`");
        };
        let mut result = body;
        for (var, lo, hi, bspan) in binders.into_iter().rev() {
            result = Expr::new(
                ExprKind::Quant {
                    q,
                    var,
                    lo: Box::new(lo),
                    hi: Box::new(hi),
                    body: Box::new(result),
                },
                bspan,
            );
        }
        result.span = span;
        Ok(result)
    }

    fn binder(&mut self) -> ParseResult<(String, Expr, Expr, Span)> {
        let span = self.span();
        self.eat(&TokenKind::KwInt);
        let var = self.ident()?;
        self.expect(TokenKind::Colon)?;
        self.expect(TokenKind::LBracket)?;
        let lo = self.expr()?;
        self.expect(TokenKind::DotDot)?;
        let hi = self.expr()?;
        self.expect(TokenKind::RBracket)?;
        Ok((var, lo, hi, span))
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr, span: Span) -> Expr {
    Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span)
}

//! Tokens produced by the lexer.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A 1-based source position.
///
/// Spans never participate in structural equality: two ASTs that differ only
/// in where their nodes came from compare equal.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Int(i64),
    Ident(String),
    /// `{1,2,3}` or `"aaN"` inside a behavior block.
    ArrayLit(Vec<i64>),

    // keywords
    KwInt,
    KwBool,
    KwVoid,
    If,
    Else,
    While,
    Break,
    Return,
    True,
    False,
    Forall,
    Exists,
    Good,
    Bad,
    DontCare,

    // annotations
    AtPre,
    AtPost,
    AtBehavior,

    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    DotDot,

    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    PlusPlus,
    MinusMinus,
    /// `=`: assignment in statements, equality in expressions.
    Assign,
    EqEq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Implies,

    Eof,
}

impl TokenKind {
    pub fn keyword(word: &str) -> Option<TokenKind> {
        Some(match word {
            "int" => TokenKind::KwInt,
            "bool" | "boolean" => TokenKind::KwBool,
            "void" => TokenKind::KwVoid,
            "if" => TokenKind::If,
            "else" => TokenKind::Else,
            "while" => TokenKind::While,
            "break" => TokenKind::Break,
            "return" => TokenKind::Return,
            "true" => TokenKind::True,
            "false" => TokenKind::False,
            "forall" => TokenKind::Forall,
            "exists" => TokenKind::Exists,
            "good" => TokenKind::Good,
            "bad" => TokenKind::Bad,
            "dontCare" => TokenKind::DontCare,
            _ => return None,
        })
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Int(n) => return write!(f, "integer `{n}`"),
            TokenKind::Ident(name) => return write!(f, "identifier `{name}`"),
            TokenKind::ArrayLit(_) => "array literal",
            TokenKind::KwInt => "`int`",
            TokenKind::KwBool => "`bool`",
            TokenKind::KwVoid => "`void`",
            TokenKind::If => "`if`",
            TokenKind::Else => "`else`",
            TokenKind::While => "`while`",
            TokenKind::Break => "`break`",
            TokenKind::Return => "`return`",
            TokenKind::True => "`true`",
            TokenKind::False => "`false`",
            TokenKind::Forall => "`forall`",
            TokenKind::Exists => "`exists`",
            TokenKind::Good => "`good`",
            TokenKind::Bad => "`bad`",
            TokenKind::DontCare => "`dontCare`",
            TokenKind::AtPre => "`@pre`",
            TokenKind::AtPost => "`@post`",
            TokenKind::AtBehavior => "`@behavior`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Comma => "`,`",
            TokenKind::Semi => "`;`",
            TokenKind::Colon => "`:`",
            TokenKind::Dot => "`.`",
            TokenKind::DotDot => "`..`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Percent => "`%`",
            TokenKind::PlusPlus => "`++`",
            TokenKind::MinusMinus => "`--`",
            TokenKind::Assign => "`=`",
            TokenKind::EqEq => "`==`",
            TokenKind::Neq => "`!=`",
            TokenKind::Lt => "`<`",
            TokenKind::Le => "`<=`",
            TokenKind::Gt => "`>`",
            TokenKind::Ge => "`>=`",
            TokenKind::And => "`&&`",
            TokenKind::Or => "`||`",
            TokenKind::Not => "`!`",
            TokenKind::Implies => "`=>`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

//! Hand-written lexer for `.sc` sources.
//!
//! The lexer is context sensitive in one respect: inside `@behavior` blocks a
//! brace group of integers (`{1,2,3}`) and a double-quoted string (`"aaN"`)
//! both become [`TokenKind::ArrayLit`]. In string literals the letter `N`
//! stands for the newline character (code 10); every other character maps to
//! its own code point.

use thiserror::Error;

use super::token::{Span, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

/// Where lexing starts. `Behaviors` lexes a bare list of behavior entries, as
/// accepted by the `behaviors-append` edit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexMode {
    Program,
    Behaviors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BehaviorCtx {
    Outside,
    /// Saw `@behavior`, waiting for its opening brace.
    Pending,
    Inside(usize),
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    tokenize_with_mode(source, LexMode::Program)
}

pub fn tokenize_with_mode(source: &str, mode: LexMode) -> Result<Vec<Token>, LexError> {
    Lexer::new(source, mode).run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    ctx: BehaviorCtx,
    fragment_behaviors: bool,
    tokens: Vec<Token>,
}

impl Lexer {
    fn new(source: &str, mode: LexMode) -> Self {
        Lexer {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            ctx: BehaviorCtx::Outside,
            fragment_behaviors: mode == LexMode::Behaviors,
            tokens: Vec::new(),
        }
    }

    fn in_behavior(&self) -> bool {
        self.fragment_behaviors || matches!(self.ctx, BehaviorCtx::Inside(_))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.col)
    }

    fn error(&self, span: Span, message: impl Into<String>) -> LexError {
        LexError {
            span,
            message: message.into(),
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize, span: Span) {
        let lexeme: String = self.chars[start..self.pos].iter().collect();
        self.tokens.push(Token { kind, lexeme, span });
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        loop {
            self.skip_trivia()?;
            let span = self.span();
            let start = self.pos;
            let Some(c) = self.peek() else {
                self.tokens.push(Token {
                    kind: TokenKind::Eof,
                    lexeme: String::new(),
                    span,
                });
                return Ok(self.tokens);
            };

            if c.is_ascii_digit() {
                let n = self.lex_int(span)?;
                self.push(TokenKind::Int(n), start, span);
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.bump();
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                let kind = TokenKind::keyword(&word).unwrap_or(TokenKind::Ident(word));
                self.push(kind, start, span);
                continue;
            }
            if c == '"' {
                if !self.in_behavior() {
                    return Err(self.error(span, "string literal outside a behavior block"));
                }
                let codes = self.lex_string(span)?;
                self.push(TokenKind::ArrayLit(codes), start, span);
                continue;
            }
            if c == '{' && self.in_behavior() {
                if let Some(values) = self.try_array_literal(span)? {
                    self.push(TokenKind::ArrayLit(values), start, span);
                    continue;
                }
            }
            if c == '@' {
                self.bump();
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.bump();
                }
                let word: String = self.chars[start + 1..self.pos].iter().collect();
                let kind = match word.as_str() {
                    "pre" => TokenKind::AtPre,
                    "post" => TokenKind::AtPost,
                    "behavior" => {
                        self.ctx = BehaviorCtx::Pending;
                        TokenKind::AtBehavior
                    }
                    _ => return Err(self.error(span, format!("unknown annotation `@{word}`"))),
                };
                self.push(kind, start, span);
                continue;
            }

            self.bump();
            let next = self.peek();
            let kind = match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '{' => {
                    self.ctx = match self.ctx {
                        BehaviorCtx::Pending => BehaviorCtx::Inside(1),
                        BehaviorCtx::Inside(d) => BehaviorCtx::Inside(d + 1),
                        BehaviorCtx::Outside => BehaviorCtx::Outside,
                    };
                    TokenKind::LBrace
                }
                '}' => {
                    if let BehaviorCtx::Inside(d) = self.ctx {
                        self.ctx = if d <= 1 {
                            BehaviorCtx::Outside
                        } else {
                            BehaviorCtx::Inside(d - 1)
                        };
                    }
                    TokenKind::RBrace
                }
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ',' => TokenKind::Comma,
                ';' => TokenKind::Semi,
                ':' => TokenKind::Colon,
                '.' if next == Some('.') => {
                    self.bump();
                    TokenKind::DotDot
                }
                '.' => TokenKind::Dot,
                '+' if next == Some('+') => {
                    self.bump();
                    TokenKind::PlusPlus
                }
                '+' => TokenKind::Plus,
                '-' if next == Some('-') => {
                    self.bump();
                    TokenKind::MinusMinus
                }
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '%' => TokenKind::Percent,
                '=' if next == Some('=') => {
                    self.bump();
                    TokenKind::EqEq
                }
                '=' if next == Some('>') => {
                    self.bump();
                    TokenKind::Implies
                }
                '=' => TokenKind::Assign,
                '!' if next == Some('=') => {
                    self.bump();
                    TokenKind::Neq
                }
                '!' => TokenKind::Not,
                '<' if next == Some('=') => {
                    self.bump();
                    TokenKind::Le
                }
                '<' => TokenKind::Lt,
                '>' if next == Some('=') => {
                    self.bump();
                    TokenKind::Ge
                }
                '>' => TokenKind::Gt,
                '&' if next == Some('&') => {
                    self.bump();
                    TokenKind::And
                }
                '|' if next == Some('|') => {
                    self.bump();
                    TokenKind::Or
                }
                '≤' => TokenKind::Le,
                '≥' => TokenKind::Ge,
                '≠' => TokenKind::Neq,
                '⇒' | '→' => TokenKind::Implies,
                '∧' => TokenKind::And,
                '∨' => TokenKind::Or,
                '¬' => TokenKind::Not,
                '∀' => TokenKind::Forall,
                '∃' => TokenKind::Exists,
                other => {
                    return Err(self.error(span, format!("illegal character `{other}`")));
                }
            };
            self.push(kind, start, span);
        }
    }

    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Some(c), _) if c.is_whitespace() => {
                    self.bump();
                }
                (Some('/'), Some('/')) => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                (Some('/'), Some('*')) => {
                    let span = self.span();
                    self.bump();
                    self.bump();
                    loop {
                        match (self.peek(), self.peek_at(1)) {
                            (Some('*'), Some('/')) => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            (Some(_), _) => {
                                self.bump();
                            }
                            (None, _) => return Err(self.error(span, "unterminated comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn lex_int(&mut self, span: Span) -> Result<i64, LexError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<i64>()
            .map_err(|_| self.error(span, format!("integer literal `{digits}` out of range")))
    }

    fn lex_string(&mut self, span: Span) -> Result<Vec<i64>, LexError> {
        self.bump();
        let mut codes = Vec::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(codes),
                Some('N') => codes.push(10),
                Some('\n') | None => return Err(self.error(span, "unterminated string literal")),
                Some(c) => codes.push(c as i64),
            }
        }
    }

    /// Looks ahead from `{` for `{ -?int (, -?int)* }` or `{}`. Consumes the
    /// literal only when the whole pattern matches.
    fn try_array_literal(&mut self, span: Span) -> Result<Option<Vec<i64>>, LexError> {
        let mut i = self.pos + 1;
        let skip_ws = |i: &mut usize, chars: &[char]| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let mut values = Vec::new();
        skip_ws(&mut i, &self.chars);
        if self.chars.get(i) != Some(&'}') {
            loop {
                skip_ws(&mut i, &self.chars);
                let negative = self.chars.get(i) == Some(&'-');
                if negative {
                    i += 1;
                }
                let start = i;
                while i < self.chars.len() && self.chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Ok(None);
                }
                let digits: String = self.chars[start..i].iter().collect();
                let magnitude: i64 = digits.parse().map_err(|_| {
                    self.error(span, format!("integer literal `{digits}` out of range"))
                })?;
                values.push(if negative { -magnitude } else { magnitude });
                skip_ws(&mut i, &self.chars);
                match self.chars.get(i) {
                    Some(',') => i += 1,
                    Some('}') => break,
                    _ => return Ok(None),
                }
            }
        }
        // `i` sits on the closing brace.
        while self.pos <= i {
            self.bump();
        }
        Ok(Some(values))
    }
}

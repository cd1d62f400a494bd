//! The annotated mini-language: tokens, syntax tree, parser, validator,
//! pretty-printer and source edits.

pub mod ast;
pub mod edit;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod token;
pub mod validate;

pub use ast::*;
pub use edit::{apply_edit, Edit, EditKind};
pub use lexer::{tokenize, LexError};
pub use parser::{parse, parse_expr, parse_program, ParseError, SyntaxError};
pub use pretty::pretty_print;
pub use token::{Span, Token, TokenKind};
pub use validate::{validate, Diagnostic, Severity};

/// Parses and validates `source`. On success, returns the program together
/// with any warnings; otherwise every diagnostic, errors first.
pub fn load_program(source: &str) -> Result<(AnnotatedProgram, Vec<Diagnostic>), Vec<Diagnostic>> {
    let program = parse_program(source).map_err(|e| vec![syntax_diagnostic(&e)])?;
    let mut diags = validate(&program);
    if validate::has_errors(&diags) {
        diags.sort_by_key(|d| d.severity);
        return Err(diags);
    }
    Ok((program, diags))
}

pub fn syntax_diagnostic(e: &SyntaxError) -> Diagnostic {
    Diagnostic::error(e.span(), e.message())
}

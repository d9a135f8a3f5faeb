//! Surface language: tokens, a recursive-descent parser and a printer whose
//! output parses back to the same tree.

mod lexer;
mod parser;
mod print;
mod syntax;

pub use lexer::{tokenize, LexError, SpannedToken, Token};
pub use parser::{parse_expr, parse_module, ParseError};
pub use print::{print_expr, print_module};
pub use syntax::{Decl, Expr, ExprKind, LamBinder, Module, Name};

use thiserror::Error;

use crate::span::SourceSpan;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            SyntaxError::Lex(e) => &e.span,
            SyntaxError::Parse(e) => &e.span,
        }
    }
}

/// Tokenizes and parses a whole `.tt0` file.
pub fn parse_source(file: &str, source: &str) -> Result<Module, SyntaxError> {
    let tokens = tokenize(file, source)?;
    Ok(parse_module(&tokens)?)
}

/// Tokenizes and parses a standalone expression.
pub fn parse_expr_source(file: &str, source: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(file, source)?;
    Ok(parse_expr(&tokens)?)
}

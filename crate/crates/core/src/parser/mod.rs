//! Concrete syntax for signatures, structures, formulas, theories, types and
//! registries, and the canonical printer that inverts it.
//!
//! Formula grammar, loosest to tightest:
//!
//! ```text
//! formula := cmp ('->' formula)?
//! cmp     := disj (('>=' | '<=') ratexpr)?
//! disj    := conj ('\/' conj)*
//! conj    := plus ('/\' plus)*
//! plus    := unary ('(+)' unary)*
//! unary   := '~' unary | binder | atom
//! binder  := ('sup' | 'inf') VAR '.' formula
//!          | ('Vee' | 'Wedge') IDX '.' formula
//!          | ('Vee' | 'Wedge') '[' formula (',' formula)* ']'
//! atom    := '(' formula ')' | 'd' '(' term ',' term ')' | PRED '(' term, ... ')' | ratexpr
//! ratexpr := 0 | 1 | p/q | a/(idx+b) | 1 - a/(idx+b) | 'rat' '[' idx ']'
//! term    := VAR | CONST | FAMILY '[' idx ']' | FUNC '(' term, ... ')'
//! idx     := n | [k '*'] IDX ['+' n]
//! ```
//!
//! Identifiers are resolved against a [`Signature`]: declared constants,
//! functions, predicates and families take their declared role, anything
//! else in term position is a variable.

mod docs;
mod formula;
pub mod lexer;
mod printer;

use std::fmt;

use thiserror::Error;

use crate::rational::RationalError;
use crate::syntax::SyntaxError;

pub use docs::{
    parse_pool, parse_registry, parse_signature, parse_structure, parse_theory, parse_type, parse_type_document,
    RegistryDoc, TypeDocument,
};
pub use formula::parse_formula;
pub use printer::{
    print_formula, print_index, print_pool, print_rat, print_registry, print_signature, print_structure, print_term,
    print_theory, print_type,
};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("lexical error: {0}")]
    Lexical(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(pos: Pos, kind: ParseErrorKind) -> Self {
        ParseError { line: pos.line, column: pos.column, kind }
    }

    pub(crate) fn lexical(pos: Pos, msg: impl Into<String>) -> Self {
        Self::new(pos, ParseErrorKind::Lexical(msg.into()))
    }

    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        Self::new(pos, ParseErrorKind::Syntax(msg.into()))
    }

    pub(crate) fn invalid(pos: Pos, msg: impl fmt::Display) -> Self {
        Self::new(pos, ParseErrorKind::Invalid(msg.to_string()))
    }

    pub(crate) fn from_syntax(pos: Pos, e: SyntaxError) -> Self {
        let kind = match e {
            SyntaxError::UnknownSymbol(s) => ParseErrorKind::UnknownSymbol(s),
            SyntaxError::Arity { symbol, expected, found } => ParseErrorKind::Arity { symbol, expected, found },
            other => ParseErrorKind::Invalid(other.to_string()),
        };
        Self::new(pos, kind)
    }

    pub fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }
}

/// Position just past the last character of `text`.
pub(crate) fn end_pos(text: &str) -> Pos {
    let line = text.matches('\n').count() + 1;
    let last = text.rsplit('\n').next().unwrap_or("");
    Pos { line, column: last.chars().count() + 1 }
}

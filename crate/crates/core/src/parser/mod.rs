//! ASCII concrete syntax for terms, types, contexts, formulas and the
//! metalanguage, together with the matching pretty-printers.
//!
//! Terms:
//!
//! ```text
//! term  := "\" IDENT (":" type)? "." term
//!        | "let" "o" binders "=" args "in" term
//!        | app
//! app   := atomt+
//! atomt := IDENT | "pure" atomt | "p1" atomt | "p2" atomt
//!        | "<" term "," term ">" | "(" term ")"
//! binders := "_" | IDENT ("," IDENT)*
//! args    := "_" | term ("," term)*
//! ```
//!
//! Types: `->` is right-associative, `*` binds tighter and `O` tightest.
//! Formulas use `false`, `true`, `~`, `&`, `|`, `->`, `O`, `forall x.` and
//! `exists x.`; predicate atoms are written `P(x, y)`.
//! `#` starts a comment that runs to the end of the line.

mod formula;
mod lexer;
mod ml;
mod print;
mod term;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use formula::parse_formula;
pub use ml::{parse_ml_term, parse_ml_type};
pub use print::{print_formula, print_ml_term, print_ml_type, print_term, print_type};
pub use term::{parse_context, parse_term, parse_term_with_spans, parse_type};

/// A region of the input: byte offsets plus the 1-based line and column of
/// the start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize, line: usize, column: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan {
            start,
            end,
            line,
            column,
        }
    }

    /// From the start of `self` to the end of `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            end: other.end.max(self.end),
            ..self
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    match expected.len() {
        0 => String::new(),
        1 => format!(", expected {}", expected[0]),
        _ => format!(", expected one of {}", expected.join(", ")),
    }
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan, expected: Vec<String>) -> Self {
        ParseError {
            message: message.into(),
            span,
            expected,
        }
    }
}

/// Source spans of a parsed term, shaped like the term itself: children
/// follow the same order as [`crate::syntax::Term::children`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanTree {
    pub span: SourceSpan,
    pub children: Vec<SpanTree>,
}

impl SpanTree {
    pub fn leaf(span: SourceSpan) -> Self {
        SpanTree {
            span,
            children: Vec::new(),
        }
    }

    /// Span of the subterm at `path`, or of the deepest ancestor that has
    /// one.
    pub fn get(&self, path: &[usize]) -> SourceSpan {
        let mut cur = self;
        for &i in path {
            match cur.children.get(i) {
                Some(c) => cur = c,
                None => break,
            }
        }
        cur.span
    }
}

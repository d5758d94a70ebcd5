//! Concrete syntax: formula text, Kripke structure files, and rendering back
//! to text.
//!
//! Formula grammar, loosest to tightest binding:
//!
//! ```text
//! f  := f <-> f | f -> f | f '|' f | f & f
//!     | f U f | f S f | f R f | f T f        (right associative)
//!     | ! f | X f | Y f | Z f | F f | G f
//!     | ( f ) | true | false | prop | sum rel sum
//! sum  := [-] summand { (+|-) summand }
//! summand := int | int * att | att
//! att  := var | X att | Y att | X^n att | Y^n att
//! rel  := < | <= | = | != | >= | >
//! ```

mod kripke;
mod lexer;
mod parser;
mod render;

use std::fmt;

pub use kripke::parse_kripke;
pub use parser::parse_formula;
pub use render::render_formula;

/// Byte range plus 1-based line/column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn at(src: &str, begin: usize, end: usize) -> Self {
        let before = &src[..begin];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = src[line_start..begin].chars().count() + 1;
        SourceSpan {
            begin,
            end,
            line,
            column,
        }
    }

    /// Moves a span computed inside `src[offset..]` to absolute coordinates
    /// in `src`.
    pub(crate) fn rebase(self, src: &str, offset: usize) -> Self {
        SourceSpan::at(src, self.begin + offset, self.end + offset)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

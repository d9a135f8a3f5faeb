use std::fmt;
use std::rc::Rc;

use serde::Serialize;

/// A region of a source file, 1-based and inclusive of both ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub file: Rc<str>,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: Rc<str>, start: (u32, u32), end: (u32, u32)) -> SourceSpan {
        SourceSpan {
            file,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Placeholder span used for synthesized syntax and for span-insensitive comparison.
    pub fn dummy() -> SourceSpan {
        SourceSpan::new(Rc::from(""), (1, 1), (1, 1))
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

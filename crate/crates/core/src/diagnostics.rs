use std::fmt;

use serde::Serialize;

use crate::span::SourceSpan;

/// A user-facing error with a location and an optional context dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub span: SourceSpan,
    /// Short machine-readable category, e.g. `mode` or `type-mismatch`.
    pub kind: &'static str,
    pub message: String,
    pub notes: Vec<String>,
}

impl Diagnostic {
    pub fn new(span: SourceSpan, kind: &'static str, message: impl Into<String>) -> Diagnostic {
        Diagnostic { span, kind, message: message.into(), notes: Vec::new() }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Diagnostic {
        self.notes = notes;
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error: {}", self.span, self.message)?;
        for note in &self.notes {
            write!(f, "\n    {note}")?;
        }
        Ok(())
    }
}

use thiserror::Error;

use crate::diagnostics::Diagnostic;
use crate::kernel::{KernelError, MetaId, Name};
use crate::mode::Mode;
use crate::span::SourceSpan;
use crate::surface::SyntaxError;
use crate::unify::UnifyError;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ElabErrorKind {
    #[error("{0}")]
    Syntax(SyntaxError),
    #[error("unbound name `{0}`")]
    Unbound(Name),
    #[error("`{0}` is already defined")]
    Duplicate(Name),
    #[error("`{0}` could not be elaborated")]
    Poisoned(Name),
    #[error("erased variable `{0}` used at runtime")]
    Mode(Name),
    #[error("{0} used at runtime")]
    ErasedConstruct(&'static str),
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    Mismatch { expected: String, found: String, cause: UnifyError },
    #[error("{0}")]
    Unify(UnifyError),
    #[error("expected a function, found a term of type `{0}`")]
    NotAFunction(String),
    #[error("expected a pair, found a term of type `{0}`")]
    NotAPair(String),
    #[error("expected an explicit argument, found an implicit one")]
    IcitMismatch,
    #[error("binder is annotated with mode {found} but the expected type has mode {expected}")]
    BinderMode { expected: Mode, found: Mode },
    #[error("unsolved metavariable {meta} : {ty}")]
    Unsolved { meta: MetaId, ty: String, context: Vec<String> },
    #[error("internal error: kernel rejected `{name}`: {error}")]
    Kernel { name: Name, error: KernelError },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {kind}")]
pub struct ElabError {
    pub span: SourceSpan,
    pub kind: ElabErrorKind,
}

impl ElabError {
    pub fn new(span: SourceSpan, kind: ElabErrorKind) -> ElabError {
        ElabError { span, kind }
    }

    /// Whether the error is a violation of the mode discipline, including
    /// one discovered while solving a metavariable.
    pub fn is_mode_error(&self) -> bool {
        match &self.kind {
            ElabErrorKind::Mode(_) | ElabErrorKind::ErasedConstruct(_) => true,
            ElabErrorKind::Mismatch { cause, .. } | ElabErrorKind::Unify(cause) => cause.is_mode_error(),
            _ => false,
        }
    }

    pub fn category(&self) -> &'static str {
        if self.is_mode_error() {
            return "mode";
        }
        match &self.kind {
            ElabErrorKind::Syntax(_) => "syntax",
            ElabErrorKind::Unbound(_) | ElabErrorKind::Duplicate(_) | ElabErrorKind::Poisoned(_) => "scope",
            ElabErrorKind::Mismatch { .. } | ElabErrorKind::IcitMismatch | ElabErrorKind::BinderMode { .. } => {
                "type-mismatch"
            }
            ElabErrorKind::NotAFunction(_) | ElabErrorKind::NotAPair(_) => "type-mismatch",
            ElabErrorKind::Unify(_) => "unification",
            ElabErrorKind::Unsolved { .. } => "unsolved-meta",
            ElabErrorKind::Kernel { .. } => "internal",
            ElabErrorKind::Mode(_) | ElabErrorKind::ErasedConstruct(_) => "mode",
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        let mut notes = Vec::new();
        match &self.kind {
            ElabErrorKind::Mismatch { cause, .. } => {
                if !matches!(cause, UnifyError::Mismatch { .. }) {
                    notes.push(format!("because: {cause}"));
                }
            }
            ElabErrorKind::Unsolved { context, .. } => {
                if !context.is_empty() {
                    notes.push("in context:".to_string());
                    notes.extend(context.iter().map(|c| format!("  {c}")));
                }
            }
            _ => {}
        }
        Diagnostic::new(self.span.clone(), self.category(), self.kind.to_string()).with_notes(notes)
    }
}

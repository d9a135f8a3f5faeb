use std::rc::Rc;

use crate::mode::{Icit, Mode};
use crate::span::SourceSpan;

pub type Name = Rc<str>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub span: SourceSpan,
    pub kind: ExprKind,
}

/// A lambda binder. `mode` is present exactly when the binder carries a type
/// annotation: `\(x : A)` is ω, `\(x :0 A)` is 0, bare `\x` leaves it open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LamBinder {
    pub name: Name,
    pub icit: Icit,
    pub mode: Option<Mode>,
    pub ann: Option<Box<Expr>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Var(Name),
    Lam(LamBinder, Box<Expr>),
    App(Box<Expr>, Box<Expr>, Icit),
    Pi(Name, Mode, Icit, Box<Expr>, Box<Expr>),
    Sigma(Name, Mode, Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    Let(Name, Box<Expr>, Box<Expr>, Box<Expr>),
    Univ,
    NatTy,
    NumLit(u64),
    Zero,
    Succ(Box<Expr>),
    NatElim(Box<Expr>, Box<Expr>, Box<Expr>, Box<Expr>),
    BoolTy,
    True,
    False,
    BoolElim(Box<Expr>, Box<Expr>, Box<Expr>, Box<Expr>),
    Hole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: Name,
    pub name_span: SourceSpan,
    pub ty: Expr,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    pub decls: Vec<Decl>,
    pub main: Option<Expr>,
}

impl Expr {
    pub fn new(span: SourceSpan, kind: ExprKind) -> Expr {
        Expr { span, kind }
    }

    /// `succ (succ ... zero)` with `n` successors, every node carrying this literal's span.
    pub fn expand_numeral(n: u64, span: &SourceSpan) -> Expr {
        let mut e = Expr::new(span.clone(), ExprKind::Zero);
        for _ in 0..n {
            e = Expr::new(span.clone(), ExprKind::Succ(Box::new(e)));
        }
        e
    }

    /// Copy of the expression with every span replaced by [`SourceSpan::dummy`].
    pub fn without_spans(&self) -> Expr {
        let b = |e: &Expr| Box::new(e.without_spans());
        let kind = match &self.kind {
            ExprKind::Var(x) => ExprKind::Var(x.clone()),
            ExprKind::Lam(binder, body) => ExprKind::Lam(
                LamBinder {
                    name: binder.name.clone(),
                    icit: binder.icit,
                    mode: binder.mode,
                    ann: binder.ann.as_deref().map(b),
                },
                b(body),
            ),
            ExprKind::App(f, a, i) => ExprKind::App(b(f), b(a), *i),
            ExprKind::Pi(x, m, i, a, r) => ExprKind::Pi(x.clone(), *m, *i, b(a), b(r)),
            ExprKind::Sigma(x, m, a, r) => ExprKind::Sigma(x.clone(), *m, b(a), b(r)),
            ExprKind::Pair(x, y) => ExprKind::Pair(b(x), b(y)),
            ExprKind::Fst(p) => ExprKind::Fst(b(p)),
            ExprKind::Snd(p) => ExprKind::Snd(b(p)),
            ExprKind::Let(x, t, d, body) => ExprKind::Let(x.clone(), b(t), b(d), b(body)),
            ExprKind::Succ(n) => ExprKind::Succ(b(n)),
            ExprKind::NatElim(p, z, s, n) => ExprKind::NatElim(b(p), b(z), b(s), b(n)),
            ExprKind::BoolElim(p, t, f, c) => ExprKind::BoolElim(b(p), b(t), b(f), b(c)),
            ExprKind::Univ => ExprKind::Univ,
            ExprKind::NatTy => ExprKind::NatTy,
            ExprKind::NumLit(n) => ExprKind::NumLit(*n),
            ExprKind::Zero => ExprKind::Zero,
            ExprKind::BoolTy => ExprKind::BoolTy,
            ExprKind::True => ExprKind::True,
            ExprKind::False => ExprKind::False,
            ExprKind::Hole => ExprKind::Hole,
        };
        Expr::new(SourceSpan::dummy(), kind)
    }
}

impl Module {
    pub fn without_spans(&self) -> Module {
        Module {
            decls: self
                .decls
                .iter()
                .map(|d| Decl {
                    name: d.name.clone(),
                    name_span: SourceSpan::dummy(),
                    ty: d.ty.without_spans(),
                    body: d.body.without_spans(),
                })
                .collect(),
            main: self.main.as_ref().map(Expr::without_spans),
        }
    }
}

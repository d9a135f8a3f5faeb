//! Bidirectional elaboration of surface expressions.

use std::rc::Rc;

use super::error::{ElabError, ElabErrorKind};
use crate::kernel::{
    apply, force, fst, motive_type, nat_step_type, print_term, Context, Ix, MetaStore, Name, Term, Value,
};
use crate::mode::{Icit, Mode};
use crate::span::SourceSpan;
use crate::surface::{Expr, ExprKind, LamBinder};
use crate::unify::{fresh_meta, unify, UnifyError};

type Result<T> = std::result::Result<T, ElabError>;

/// Mutable state threaded through the elaboration of one module.
pub struct Elaborator<'a> {
    pub metas: &'a mut MetaStore,
    /// Top-level names whose declarations failed before a type was known.
    pub poisoned: &'a [Name],
}

fn err(span: &SourceSpan, kind: ElabErrorKind) -> ElabError {
    ElabError::new(span.clone(), kind)
}

/// Whether `ty`, after its leading Πs, is the universe.
pub fn returns_universe(metas: &MetaStore, depth: usize, ty: &Value) -> bool {
    let mut ty = force(metas, ty.clone());
    let mut depth = depth;
    loop {
        match ty {
            Value::Univ => return true,
            Value::Pi(_, _, _, _, cod) => {
                ty = force(metas, cod.apply(metas, Value::var(crate::kernel::Lvl(depth))));
                depth += 1;
            }
            _ => return false,
        }
    }
}

/// The context in which an argument of mode `mode` is elaborated.
fn at_mode(ctx: &Context, mode: Mode) -> Context {
    match mode {
        Mode::Zero => ctx.erase(),
        Mode::Omega => ctx.clone(),
    }
}

impl Elaborator<'_> {
    fn show(&self, ctx: &Context, v: &Value) -> String {
        print_term(&ctx.names(), &ctx.quote(self.metas, v))
    }

    fn unify_at(&mut self, ctx: &Context, span: &SourceSpan, expected: &Value, found: &Value) -> Result<()> {
        match unify(self.metas, &ctx.names(), expected, found) {
            Ok(()) => Ok(()),
            Err(cause @ UnifyError::Mismatch { .. }) => Err(err(
                span,
                ElabErrorKind::Mismatch {
                    expected: self.show(ctx, expected),
                    found: self.show(ctx, found),
                    cause,
                },
            )),
            Err(cause) => Err(err(span, ElabErrorKind::Unify(cause))),
        }
    }

    fn fresh(&mut self, ctx: &Context, ty: &Value, span: &SourceSpan) -> Term {
        fresh_meta(self.metas, ctx, ty, Some(span.clone()))
    }

    /// Elaborates a type: checked against `U` under the erasure marker.
    pub fn check_type(&mut self, ctx: &Context, e: &Expr) -> Result<Term> {
        self.check(&ctx.erase(), e, &Value::Univ)
    }

    /// `check` with the erasure marker set.
    pub fn check_erased(&mut self, ctx: &Context, e: &Expr, expected: &Value) -> Result<Term> {
        self.check(&ctx.erase(), e, expected)
    }

    pub fn check(&mut self, ctx: &Context, e: &Expr, expected: &Value) -> Result<Term> {
        let expected = force(self.metas, expected.clone());
        match (&e.kind, &expected) {
            (ExprKind::Lam(b, body), Value::Pi(_, icit, mode, dom, cod)) if b.icit == *icit => {
                if let Some(m) = b.mode {
                    if m != *mode {
                        return Err(err(&e.span, ElabErrorKind::BinderMode { expected: *mode, found: m }));
                    }
                }
                if let Some(ann) = &b.ann {
                    let a = self.check_type(ctx, ann)?;
                    let a_v = ctx.eval(self.metas, &a);
                    self.unify_at(ctx, &ann.span, dom, &a_v)?;
                }
                let inner = ctx.bind(b.name.clone(), *mode, (**dom).clone());
                let cod = cod.apply(self.metas, crate::kernel::Value::var(ctx.depth()));
                let body = self.check(&inner, body, &cod)?;
                Ok(Term::Lam(b.name.clone(), *icit, *mode, Rc::new(body)))
            }
            (_, Value::Pi(x, Icit::Impl, mode, dom, cod)) => {
                let inner = ctx.bind_hidden(x.clone(), *mode, (**dom).clone());
                let cod = cod.apply(self.metas, Value::var(ctx.depth()));
                let body = self.check(&inner, e, &cod)?;
                Ok(Term::Lam(x.clone(), Icit::Impl, *mode, Rc::new(body)))
            }
            (ExprKind::Pair(a, b), Value::Sigma(_, mode, fa, fb)) => {
                let a_t = self.check(&at_mode(ctx, *mode), a, fa)?;
                let b_ty = fb.apply(self.metas, ctx.eval(self.metas, &a_t));
                let b_t = self.check(ctx, b, &b_ty)?;
                Ok(Term::Pair(*mode, Rc::new(a_t), Rc::new(b_t)))
            }
            (ExprKind::Let(x, ty, d, body), _) => {
                let (inner, ty_t, d_t, mode) = self.elab_let(ctx, x, ty, d)?;
                let body = self.check(&inner, body, &expected)?;
                Ok(Term::Let(x.clone(), mode, Rc::new(ty_t), Rc::new(d_t), Rc::new(body)))
            }
            (ExprKind::Hole, _) => Ok(self.fresh(ctx, &expected, &e.span)),
            _ => {
                let (t, ty) = self.infer(ctx, e)?;
                let (t, ty) = self.insert(ctx, &e.span, t, ty);
                self.unify_at(ctx, &e.span, &expected, &ty)?;
                Ok(t)
            }
        }
    }

    fn elab_let(
        &mut self,
        ctx: &Context,
        x: &Name,
        ty: &Expr,
        d: &Expr,
    ) -> Result<(Context, Term, Term, Mode)> {
        let ty_t = self.check_type(ctx, ty)?;
        let ty_v = ctx.eval(self.metas, &ty_t);
        let mode = if returns_universe(self.metas, ctx.entries.len(), &ty_v) { Mode::Zero } else { Mode::Omega };
        let d_t = self.check(&at_mode(ctx, mode), d, &ty_v)?;
        let d_v = ctx.eval(self.metas, &d_t);
        let inner = ctx.define(x.clone(), mode, ty_v, d_t.clone(), d_v);
        Ok((inner, ty_t, d_t, mode))
    }

    /// Applies `t` to fresh metas for each leading implicit Π of `ty`.
    pub fn insert(&mut self, ctx: &Context, span: &SourceSpan, t: Term, ty: Value) -> (Term, Value) {
        let mut t = t;
        let mut ty = force(self.metas, ty);
        while let Value::Pi(_, Icit::Impl, mode, dom, cod) = &ty {
            let m = self.fresh(&at_mode(ctx, *mode), dom, span);
            let m_v = ctx.eval(self.metas, &m);
            t = Term::App(Icit::Impl, *mode, Rc::new(t), Rc::new(m));
            ty = force(self.metas, cod.apply(self.metas, m_v));
        }
        (t, ty)
    }

    fn require_erased(&self, ctx: &Context, span: &SourceSpan, what: &'static str) -> Result<()> {
        if ctx.erased {
            Ok(())
        } else {
            Err(err(span, ElabErrorKind::ErasedConstruct(what)))
        }
    }

    pub fn infer(&mut self, ctx: &Context, e: &Expr) -> Result<(Term, Value)> {
        match &e.kind {
            ExprKind::Var(x) => {
                let Some((Ix(ix), entry)) = ctx.lookup_name(x) else {
                    if self.poisoned.contains(x) {
                        return Err(err(&e.span, ElabErrorKind::Poisoned(x.clone())));
                    }
                    return Err(err(&e.span, ElabErrorKind::Unbound(x.clone())));
                };
                if entry.mode == Mode::Zero && !ctx.erased {
                    return Err(err(&e.span, ElabErrorKind::Mode(x.clone())));
                }
                Ok((Term::var(ix), entry.ty.clone()))
            }
            ExprKind::App(f, a, icit) => {
                let (f_t, f_ty) = self.infer(ctx, f)?;
                let (f_t, f_ty) = match icit {
                    Icit::Expl => self.insert(ctx, &f.span, f_t, f_ty),
                    Icit::Impl => (f_t, force(self.metas, f_ty)),
                };
                match f_ty {
                    Value::Pi(_, pi_icit, mode, dom, cod) => {
                        if pi_icit != *icit {
                            return Err(err(&a.span, ElabErrorKind::IcitMismatch));
                        }
                        let a_t = self.check(&at_mode(ctx, mode), a, &dom)?;
                        let a_v = ctx.eval(self.metas, &a_t);
                        let ty = cod.apply(self.metas, a_v);
                        Ok((Term::App(*icit, mode, Rc::new(f_t), Rc::new(a_t)), ty))
                    }
                    other => Err(err(&f.span, ElabErrorKind::NotAFunction(self.show(ctx, &other)))),
                }
            }
            ExprKind::Lam(b, body) => self.infer_lam(ctx, &e.span, b, body),
            ExprKind::Pi(x, mode, icit, a, b) => {
                self.require_erased(ctx, &e.span, "a type")?;
                let a_t = self.check_type(ctx, a)?;
                let a_v = ctx.eval(self.metas, &a_t);
                let b_t = self.check_type(&ctx.bind(x.clone(), *mode, a_v), b)?;
                Ok((Term::Pi(x.clone(), *icit, *mode, Rc::new(a_t), Rc::new(b_t)), Value::Univ))
            }
            ExprKind::Sigma(x, mode, a, b) => {
                self.require_erased(ctx, &e.span, "a type")?;
                let a_t = self.check_type(ctx, a)?;
                let a_v = ctx.eval(self.metas, &a_t);
                let b_t = self.check_type(&ctx.bind(x.clone(), *mode, a_v), b)?;
                Ok((Term::Sigma(x.clone(), *mode, Rc::new(a_t), Rc::new(b_t)), Value::Univ))
            }
            ExprKind::Pair(a, b) => {
                let (a_t, a_ty) = self.infer(ctx, a)?;
                let (b_t, b_ty) = self.infer(ctx, b)?;
                let a_ty_t = ctx.quote(self.metas, &a_ty);
                let b_ty_t = crate::kernel::quote(self.metas, ctx.depth().next(), &b_ty);
                let sigma = Term::Sigma(Rc::from("_"), Mode::Omega, Rc::new(a_ty_t), Rc::new(b_ty_t));
                let ty = ctx.eval(self.metas, &sigma);
                Ok((Term::Pair(Mode::Omega, Rc::new(a_t), Rc::new(b_t)), ty))
            }
            ExprKind::Fst(p) | ExprKind::Snd(p) => {
                let (p_t, p_ty) = self.infer(ctx, p)?;
                match force(self.metas, p_ty) {
                    Value::Sigma(_, mode, a, b) => {
                        if matches!(e.kind, ExprKind::Fst(_)) {
                            if mode == Mode::Zero {
                                self.require_erased(ctx, &e.span, "the first projection of an erased pair")?;
                            }
                            Ok((Term::Fst(mode, Rc::new(p_t)), (*a).clone()))
                        } else {
                            let first = fst(self.metas, ctx.eval(self.metas, &p_t), mode);
                            let ty = b.apply(self.metas, first);
                            Ok((Term::Snd(mode, Rc::new(p_t)), ty))
                        }
                    }
                    other => Err(err(&p.span, ElabErrorKind::NotAPair(self.show(ctx, &other)))),
                }
            }
            ExprKind::Let(x, ty, d, body) => {
                let (inner, ty_t, d_t, mode) = self.elab_let(ctx, x, ty, d)?;
                let (body_t, body_ty) = self.infer(&inner, body)?;
                Ok((Term::Let(x.clone(), mode, Rc::new(ty_t), Rc::new(d_t), Rc::new(body_t)), body_ty))
            }
            ExprKind::Univ => {
                self.require_erased(ctx, &e.span, "the universe")?;
                Ok((Term::Univ, Value::Univ))
            }
            ExprKind::NatTy => {
                self.require_erased(ctx, &e.span, "a type")?;
                Ok((Term::NatTy, Value::Univ))
            }
            ExprKind::BoolTy => {
                self.require_erased(ctx, &e.span, "a type")?;
                Ok((Term::BoolTy, Value::Univ))
            }
            ExprKind::NumLit(n) => Ok((Term::numeral(*n), Value::NatTy)),
            ExprKind::Zero => Ok((Term::Zero, Value::NatTy)),
            ExprKind::Succ(n) => {
                let n_t = self.check(ctx, n, &Value::NatTy)?;
                Ok((Term::Succ(Rc::new(n_t)), Value::NatTy))
            }
            ExprKind::True => Ok((Term::True, Value::BoolTy)),
            ExprKind::False => Ok((Term::False, Value::BoolTy)),
            ExprKind::NatElim(p, z, s, n) => {
                let p_t = self.check_erased(ctx, p, &motive_type(Value::NatTy))?;
                let p_v = ctx.eval(self.metas, &p_t);
                let z_ty = apply(self.metas, p_v.clone(), Icit::Expl, Mode::Omega, Value::Zero);
                let z_t = self.check(ctx, z, &z_ty)?;
                let s_t = self.check(ctx, s, &nat_step_type(self.metas, p_v.clone()))?;
                let n_t = self.check(ctx, n, &Value::NatTy)?;
                let n_v = ctx.eval(self.metas, &n_t);
                let ty = apply(self.metas, p_v, Icit::Expl, Mode::Omega, n_v);
                Ok((Term::nat_elim(p_t, z_t, s_t, n_t), ty))
            }
            ExprKind::BoolElim(p, t, f, b) => {
                let p_t = self.check_erased(ctx, p, &motive_type(Value::BoolTy))?;
                let p_v = ctx.eval(self.metas, &p_t);
                let t_ty = apply(self.metas, p_v.clone(), Icit::Expl, Mode::Omega, Value::True);
                let f_ty = apply(self.metas, p_v.clone(), Icit::Expl, Mode::Omega, Value::False);
                let t_t = self.check(ctx, t, &t_ty)?;
                let f_t = self.check(ctx, f, &f_ty)?;
                let b_t = self.check(ctx, b, &Value::BoolTy)?;
                let b_v = ctx.eval(self.metas, &b_t);
                let ty = apply(self.metas, p_v, Icit::Expl, Mode::Omega, b_v);
                Ok((Term::bool_elim(p_t, t_t, f_t, b_t), ty))
            }
            ExprKind::Hole => {
                let ty_t = self.fresh(&ctx.erase(), &Value::Univ, &e.span);
                let ty = ctx.eval(self.metas, &ty_t);
                let t = self.fresh(ctx, &ty, &e.span);
                Ok((t, ty))
            }
        }
    }

    fn infer_lam(&mut self, ctx: &Context, span: &SourceSpan, b: &LamBinder, body: &Expr) -> Result<(Term, Value)> {
        let mode = b.mode.unwrap_or(Mode::Omega);
        let dom = match &b.ann {
            Some(ann) => self.check_type(ctx, ann)?,
            None => self.fresh(&ctx.erase(), &Value::Univ, span),
        };
        let dom_v = ctx.eval(self.metas, &dom);
        let inner = ctx.bind(b.name.clone(), mode, dom_v);
        let (body_t, body_ty) = self.infer(&inner, body)?;
        let (body_t, body_ty) = self.insert(&inner, &body.span, body_t, body_ty);
        let cod = inner.quote(self.metas, &body_ty);
        let pi = Term::Pi(b.name.clone(), b.icit, mode, Rc::new(dom), Rc::new(cod));
        let ty = ctx.eval(self.metas, &pi);
        Ok((Term::Lam(b.name.clone(), b.icit, mode, Rc::new(body_t)), ty))
    }
}

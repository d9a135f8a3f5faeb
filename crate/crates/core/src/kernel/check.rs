//! The kernel: an independent checker for elaborated core terms.
//!
//! The context flag `erased` stands for the erasure marker. Variables of
//! mode 0 are usable only under it; types, motives, mode-0 arguments and the
//! first components of mode-0 pairs are checked with it switched on.

use std::rc::Rc;

use thiserror::Error;

use super::context::Context;
use super::conv::conv;
use super::metas::MetaStore;
use super::nbe::{apply, eval, force, fst};
use super::print::print_term;
use super::term::{Ix, MaskEntry, MetaId, Name, Term};
use super::value::{Closure, Env, Value};
use crate::mode::{Icit, Mode};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    TypeMismatch { expected: String, found: String },
    #[error("erased variable `{name}` used at runtime")]
    Mode { name: Name },
    #[error("{what} used at runtime")]
    ErasedConstruct { what: &'static str },
    #[error("variable index {ix} out of scope (depth {depth})")]
    Scope { ix: usize, depth: usize },
    #[error("expected a function, found a term of type `{ty}`")]
    NotAFunction { ty: String },
    #[error("expected a pair, found a term of type `{ty}`")]
    NotAPair { ty: String },
    #[error("mode mismatch: {what} is annotated {found} but its type former has mode {expected}")]
    ModeMismatch { what: &'static str, expected: Mode, found: Mode },
    #[error("implicitness mismatch in {what}")]
    IcitMismatch { what: &'static str },
    #[error("cannot infer the type of {what}")]
    CannotInfer { what: &'static str },
    #[error("metavariable {meta} applied to a context of the wrong shape")]
    BadMeta { meta: MetaId },
}

type Result<T> = std::result::Result<T, KernelError>;

fn mismatch(metas: &MetaStore, ctx: &Context, expected: &Value, found: &Value) -> KernelError {
    let names = ctx.names();
    KernelError::TypeMismatch {
        expected: print_term(&names, &ctx.quote(metas, expected)),
        found: print_term(&names, &ctx.quote(metas, found)),
    }
}

fn show(metas: &MetaStore, ctx: &Context, v: &Value) -> String {
    print_term(&ctx.names(), &ctx.quote(metas, v))
}

fn require_erased(ctx: &Context, what: &'static str) -> Result<()> {
    if ctx.erased {
        Ok(())
    } else {
        Err(KernelError::ErasedConstruct { what })
    }
}

/// The context in which an argument of the given mode is checked.
fn at_mode(ctx: &Context, mode: Mode) -> Context {
    match mode {
        Mode::Zero => ctx.erase(),
        Mode::Omega => ctx.clone(),
    }
}

/// Checks `t` against the type value `expected`.
pub fn check(metas: &MetaStore, ctx: &Context, t: &Term, expected: &Value) -> Result<()> {
    match (t, force(metas, expected.clone())) {
        (Term::Lam(x, i, m, body), Value::Pi(_, i2, m2, a, b)) => {
            if *i != i2 {
                return Err(KernelError::IcitMismatch { what: "lambda" });
            }
            if *m != m2 {
                return Err(KernelError::ModeMismatch { what: "lambda", expected: m2, found: *m });
            }
            let inner = ctx.bind(x.clone(), *m, (*a).clone());
            let cod = b.apply(metas, Value::var(ctx.depth()));
            check(metas, &inner, body, &cod)
        }
        (Term::Pair(m, a, b), Value::Sigma(_, m2, fa, fb)) => {
            if *m != m2 {
                return Err(KernelError::ModeMismatch { what: "pair", expected: m2, found: *m });
            }
            check(metas, &at_mode(ctx, *m), a, &fa)?;
            let b_ty = fb.apply(metas, ctx.eval(metas, a));
            check(metas, ctx, b, &b_ty)
        }
        (Term::Let(x, m, ty, d, body), expected) => {
            let (inner, _) = check_let(metas, ctx, x, *m, ty, d)?;
            check(metas, &inner, body, &expected)
        }
        (Term::Lam(..), other) => Err(KernelError::TypeMismatch {
            expected: show(metas, ctx, &other),
            found: "a function".into(),
        }),
        (Term::Pair(..), other) => Err(KernelError::TypeMismatch {
            expected: show(metas, ctx, &other),
            found: "a pair".into(),
        }),
        (_, expected) => {
            let found = infer(metas, ctx, t)?;
            if conv(metas, ctx.depth(), &found, &expected) {
                Ok(())
            } else {
                Err(mismatch(metas, ctx, &expected, &found))
            }
        }
    }
}

fn check_let(
    metas: &MetaStore,
    ctx: &Context,
    x: &Name,
    m: Mode,
    ty: &Term,
    d: &Term,
) -> Result<(Context, Value)> {
    check(metas, &ctx.erase(), ty, &Value::Univ)?;
    let ty_v = ctx.eval(metas, ty);
    check(metas, &at_mode(ctx, m), d, &ty_v)?;
    let d_v = ctx.eval(metas, d);
    Ok((ctx.define(x.clone(), m, ty_v.clone(), d.clone(), d_v), ty_v))
}

/// Checks that `t` is a type.
pub fn check_type(metas: &MetaStore, ctx: &Context, t: &Term) -> Result<()> {
    check(metas, &ctx.erase(), t, &Value::Univ)
}

/// Infers the type of `t`.
pub fn infer(metas: &MetaStore, ctx: &Context, t: &Term) -> Result<Value> {
    match t {
        Term::Var(Ix(ix)) => {
            let entry = ctx.lookup(Ix(*ix)).ok_or(KernelError::Scope { ix: *ix, depth: ctx.entries.len() })?;
            if entry.mode == Mode::Zero && !ctx.erased {
                return Err(KernelError::Mode { name: entry.name.clone() });
            }
            Ok(entry.ty.clone())
        }
        Term::Univ => {
            require_erased(ctx, "the universe")?;
            Ok(Value::Univ)
        }
        Term::NatTy | Term::BoolTy => {
            require_erased(ctx, "a type")?;
            Ok(Value::Univ)
        }
        Term::Pi(x, _, m, a, b) | Term::Sigma(x, m, a, b) => {
            require_erased(ctx, "a type")?;
            check(metas, ctx, a, &Value::Univ)?;
            let a_v = ctx.eval(metas, a);
            check(metas, &ctx.bind(x.clone(), *m, a_v), b, &Value::Univ)?;
            Ok(Value::Univ)
        }
        Term::App(i, m, f, a) if matches!(**f, Term::Lam(..)) => {
            let Term::Lam(x, i2, m2, body) = &**f else { unreachable!() };
            if i != i2 {
                return Err(KernelError::IcitMismatch { what: "application" });
            }
            if m != m2 {
                return Err(KernelError::ModeMismatch { what: "application", expected: *m2, found: *m });
            }
            let dom = infer(metas, &at_mode(ctx, *m), a)?;
            let inner = ctx.bind(x.clone(), *m, dom);
            let cod = inner.quote(metas, &infer(metas, &inner, body)?);
            Ok(eval(metas, &ctx.env.extend(ctx.eval(metas, a)), &cod))
        }
        Term::App(i, m, f, a) => {
            let f_ty = infer(metas, ctx, f)?;
            match force(metas, f_ty) {
                Value::Pi(_, i2, m2, dom, cod) => {
                    if *i != i2 {
                        return Err(KernelError::IcitMismatch { what: "application" });
                    }
                    if *m != m2 {
                        return Err(KernelError::ModeMismatch { what: "application", expected: m2, found: *m });
                    }
                    check(metas, &at_mode(ctx, *m), a, &dom)?;
                    Ok(cod.apply(metas, ctx.eval(metas, a)))
                }
                other => Err(KernelError::NotAFunction { ty: show(metas, ctx, &other) }),
            }
        }
        Term::Fst(m, p) | Term::Snd(m, p) => {
            let p_ty = infer(metas, ctx, p)?;
            match force(metas, p_ty) {
                Value::Sigma(_, m2, a, b) => {
                    if *m != m2 {
                        return Err(KernelError::ModeMismatch { what: "projection", expected: m2, found: *m });
                    }
                    if matches!(t, Term::Fst(..)) {
                        if *m == Mode::Zero {
                            require_erased(ctx, "the first projection of an erased pair")?;
                        }
                        Ok((*a).clone())
                    } else {
                        let first = fst(metas, ctx.eval(metas, p), *m);
                        Ok(b.apply(metas, first))
                    }
                }
                other => Err(KernelError::NotAPair { ty: show(metas, ctx, &other) }),
            }
        }
        Term::Zero => Ok(Value::NatTy),
        Term::Succ(n) => {
            check(metas, ctx, n, &Value::NatTy)?;
            Ok(Value::NatTy)
        }
        Term::True | Term::False => Ok(Value::BoolTy),
        Term::NatElim(p, z, s, n) => {
            check(metas, &ctx.erase(), p, &motive_type(Value::NatTy))?;
            let p_v = ctx.eval(metas, p);
            check(metas, ctx, z, &apply(metas, p_v.clone(), Icit::Expl, Mode::Omega, Value::Zero))?;
            check(metas, ctx, s, &nat_step_type(metas, p_v.clone()))?;
            check(metas, ctx, n, &Value::NatTy)?;
            Ok(apply(metas, p_v, Icit::Expl, Mode::Omega, ctx.eval(metas, n)))
        }
        Term::BoolElim(p, tc, fc, b) => {
            check(metas, &ctx.erase(), p, &motive_type(Value::BoolTy))?;
            let p_v = ctx.eval(metas, p);
            check(metas, ctx, tc, &apply(metas, p_v.clone(), Icit::Expl, Mode::Omega, Value::True))?;
            check(metas, ctx, fc, &apply(metas, p_v.clone(), Icit::Expl, Mode::Omega, Value::False))?;
            check(metas, ctx, b, &Value::BoolTy)?;
            Ok(apply(metas, p_v, Icit::Expl, Mode::Omega, ctx.eval(metas, b)))
        }
        Term::Let(x, m, ty, d, body) => {
            let (inner, _) = check_let(metas, ctx, x, *m, ty, d)?;
            // the let-bound variable evaluates to its definition, so the body's
            // type never mentions it
            infer(metas, &inner, body)
        }
        Term::Meta(m) => {
            let entry = metas.get(*m);
            if entry.erased && !ctx.erased {
                return Err(KernelError::ErasedConstruct { what: "an erased metavariable" });
            }
            Ok(eval(metas, &Env::new(), &entry.closed_ty))
        }
        Term::InsertedMeta(m, mask) => {
            let entry = metas.get(*m);
            if entry.erased && !ctx.erased {
                return Err(KernelError::ErasedConstruct { what: "an erased metavariable" });
            }
            if mask.len() != ctx.entries.len() {
                return Err(KernelError::BadMeta { meta: *m });
            }
            let mut ty = eval(metas, &Env::new(), &entry.closed_ty);
            let values = ctx.env.to_vec();
            for (lvl, slot) in mask.iter().enumerate() {
                if let MaskEntry::Bound(mode) = slot {
                    let ctx_mode = ctx.entries[lvl].mode;
                    if ctx_mode != *mode {
                        return Err(KernelError::BadMeta { meta: *m });
                    }
                    match force(metas, ty) {
                        Value::Pi(_, _, pm, _, cod) if pm == *mode => {
                            ty = cod.apply(metas, values[lvl].clone());
                        }
                        _ => return Err(KernelError::BadMeta { meta: *m }),
                    }
                }
            }
            Ok(ty)
        }
        Term::Lam(..) => Err(KernelError::CannotInfer { what: "an unannotated lambda" }),
        Term::Pair(..) => Err(KernelError::CannotInfer { what: "a pair" }),
    }
}

/// `Nat → U` or `Bool → U`, the type of eliminator motives.
pub fn motive_type(scrutinee: Value) -> Value {
    let body = Rc::new(Term::Univ);
    Value::Pi(Rc::from("_"), Icit::Expl, Mode::Omega, Rc::new(scrutinee), Closure::new(Env::new(), body))
}

/// `(k : Nat) → P k → P (succ k)` for a motive value `P`.
pub fn nat_step_type(metas: &MetaStore, motive: Value) -> Value {
    let term = Term::pi(
        "k",
        Icit::Expl,
        Mode::Omega,
        Term::NatTy,
        Term::arrow(
            Mode::Omega,
            Term::app(Mode::Omega, Term::var(1), Term::var(0)),
            Term::app(Mode::Omega, Term::var(2), Term::succ(Term::var(1))),
        ),
    );
    eval(metas, &Env::new().extend(motive), &term)
}

/// A subterm that mentions a mode-0 variable outside any erased position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeLeak {
    pub name: Name,
}

/// Structural audit: walks `t` tracking whether each position is erased,
/// using only the annotations on the term, and reports the first mode-0
/// variable found in a runtime position. `modes` lists the modes of the
/// enclosing context in level order.
pub fn audit_modes(names: &[Name], modes: &[Mode], erased: bool, t: &Term) -> std::result::Result<(), ModeLeak> {
    let mut scope: Vec<(Name, Mode)> = names.iter().cloned().zip(modes.iter().copied()).collect();
    audit(&mut scope, erased, t)
}

fn audit(scope: &mut Vec<(Name, Mode)>, erased: bool, t: &Term) -> std::result::Result<(), ModeLeak> {
    let under = |scope: &mut Vec<(Name, Mode)>, x: &Name, m: Mode, erased: bool, body: &Term| {
        scope.push((x.clone(), m));
        let r = audit(scope, erased, body);
        scope.pop();
        r
    };
    let at = |m: Mode| erased || m == Mode::Zero;
    match t {
        Term::Var(Ix(ix)) => {
            let (name, mode) = &scope[scope.len() - 1 - ix];
            if *mode == Mode::Zero && !erased {
                Err(ModeLeak { name: name.clone() })
            } else {
                Ok(())
            }
        }
        Term::Lam(x, _, m, b) => under(scope, x, *m, erased, b),
        Term::App(_, m, f, a) => {
            audit(scope, erased, f)?;
            audit(scope, at(*m), a)
        }
        Term::Pi(x, _, m, a, b) | Term::Sigma(x, m, a, b) => {
            audit(scope, true, a)?;
            under(scope, x, *m, true, b)
        }
        Term::Pair(m, a, b) => {
            audit(scope, at(*m), a)?;
            audit(scope, erased, b)
        }
        Term::Fst(m, p) => audit(scope, at(*m), p),
        Term::Snd(_, p) | Term::Succ(p) => audit(scope, erased, p),
        Term::NatElim(p, z, s, n) | Term::BoolElim(p, z, s, n) => {
            audit(scope, true, p)?;
            audit(scope, erased, z)?;
            audit(scope, erased, s)?;
            audit(scope, erased, n)
        }
        Term::Let(x, m, ty, d, b) => {
            audit(scope, true, ty)?;
            audit(scope, at(*m), d)?;
            under(scope, x, *m, erased, b)
        }
        Term::InsertedMeta(_, mask) => {
            let len = scope.len();
            for (lvl, slot) in mask.iter().enumerate() {
                if let MaskEntry::Bound(Mode::Omega) = slot {
                    audit(scope, erased, &Term::var(len - 1 - lvl))?;
                }
            }
            Ok(())
        }
        Term::Univ
        | Term::NatTy
        | Term::BoolTy
        | Term::Zero
        | Term::True
        | Term::False
        | Term::Meta(_) => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat_ctx(mode: Mode) -> Context {
        Context::new().bind(Rc::from("x"), mode, Value::NatTy)
    }

    #[test]
    fn erased_variable_rejected_at_runtime() {
        let m = MetaStore::new();
        let err = infer(&m, &nat_ctx(Mode::Zero), &Term::var(0)).unwrap_err();
        assert_eq!(err, KernelError::Mode { name: Rc::from("x") });
    }

    #[test]
    fn erased_variable_accepted_under_marker() {
        let m = MetaStore::new();
        let ty = infer(&m, &nat_ctx(Mode::Zero).erase(), &Term::var(0)).unwrap();
        assert!(matches!(ty, Value::NatTy));
    }

    #[test]
    fn erased_lambda_checks_against_erased_pi() {
        let m = MetaStore::new();
        let pi = eval(&m, &Env::new(), &Term::arrow(Mode::Zero, Term::NatTy, Term::NatTy));
        let lam = Term::lam("x", Icit::Expl, Mode::Zero, Term::Zero);
        check(&m, &Context::new(), &lam, &pi).unwrap();
        let wrong = Term::lam("x", Icit::Expl, Mode::Omega, Term::Zero);
        assert!(matches!(
            check(&m, &Context::new(), &wrong, &pi),
            Err(KernelError::ModeMismatch { .. })
        ));
    }

    #[test]
    fn types_are_erased() {
        let m = MetaStore::new();
        assert!(matches!(
            infer(&m, &Context::new(), &Term::NatTy),
            Err(KernelError::ErasedConstruct { .. })
        ));
        check_type(&m, &Context::new(), &Term::Univ).unwrap();
    }

    #[test]
    fn erased_scrutinee_needs_the_marker() {
        let m = MetaStore::new();
        let motive = Term::lam("_", Icit::Expl, Mode::Omega, Term::NatTy);
        let step = Term::lam("k", Icit::Expl, Mode::Omega, Term::lam("r", Icit::Expl, Mode::Omega, Term::var(0)));
        let t = Term::nat_elim(motive, Term::Zero, step, Term::var(0));
        assert!(matches!(infer(&m, &nat_ctx(Mode::Zero), &t), Err(KernelError::Mode { .. })));
        assert!(infer(&m, &nat_ctx(Mode::Zero).erase(), &t).is_ok());
        assert!(infer(&m, &nat_ctx(Mode::Omega), &t).is_ok());
    }

    #[test]
    fn audit_finds_runtime_leaks() {
        let names = [Rc::from("x")];
        let erased_arg = Term::App(Icit::Expl, Mode::Zero, Rc::new(Term::var(0)), Rc::new(Term::var(0)));
        assert!(audit_modes(&names, &[Mode::Omega], false, &erased_arg).is_ok());
        assert!(audit_modes(&names, &[Mode::Zero], false, &Term::var(0)).is_err());
        assert!(audit_modes(&names, &[Mode::Zero], true, &Term::var(0)).is_ok());
    }
}

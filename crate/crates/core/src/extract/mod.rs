//! Code extraction from runtime core terms to the untyped target.
//!
//! Erased binders, arguments, types and motives disappear; an erased pair is
//! represented by its second component.

mod eval;
mod target;

use std::rc::Rc;

use thiserror::Error;

use crate::elab::Elaboration;
use crate::kernel::{Context, Ix, Name, Term};
use crate::mode::Mode;

pub use eval::{eval_target, eval_target_counted, EvalError};
pub use target::{alpha_eq, as_numeral, numeral, print_target, TargetTerm};

use TargetTerm as T;

/// Only reachable on terms the kernel did not accept.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("internal error: {0} in runtime position")]
    ErasedConstruct(&'static str),
    #[error("internal error: erased variable `{0}` in runtime position")]
    ErasedVariable(Name),
    #[error("internal error: variable index {0} out of scope")]
    Scope(usize),
    #[error("internal error: unsolved metavariable reached extraction")]
    Meta,
    #[error("cannot extract in an erased context")]
    ErasedContext,
    #[error("`{0}` has no definition to extract")]
    Opaque(Name),
    #[error("no such definition `{0}`")]
    Unknown(String),
}

/// Number of runtime entries strictly more recent than entry `ix`.
pub fn runtime_index(ctx: &Context, ix: Ix) -> Result<usize, ExtractError> {
    let binders: Vec<(Name, Mode)> = ctx.entries.iter().map(|e| (e.name.clone(), e.mode)).collect();
    runtime_index_in(&binders, ix.0)
}

fn runtime_index_in(binders: &[(Name, Mode)], ix: usize) -> Result<usize, ExtractError> {
    let len = binders.len();
    if ix >= len {
        return Err(ExtractError::Scope(ix));
    }
    let (name, mode) = &binders[len - 1 - ix];
    if *mode == Mode::Zero {
        return Err(ExtractError::ErasedVariable(name.clone()));
    }
    Ok(binders[len - ix..].iter().filter(|(_, m)| *m == Mode::Omega).count())
}

/// Extracts `t`, which must be kernel-checked and zonked in `ctx`.
pub fn extract(ctx: &Context, t: &Term) -> Result<TargetTerm, ExtractError> {
    if ctx.erased {
        return Err(ExtractError::ErasedContext);
    }
    let mut binders: Vec<(Name, Mode)> = ctx.entries.iter().map(|e| (e.name.clone(), e.mode)).collect();
    go(&mut binders, t)
}

fn under<R>(binders: &mut Vec<(Name, Mode)>, name: &Name, mode: Mode, f: impl FnOnce(&mut Vec<(Name, Mode)>) -> R) -> R {
    binders.push((name.clone(), mode));
    let r = f(binders);
    binders.pop();
    r
}

fn go(binders: &mut Vec<(Name, Mode)>, t: &Term) -> Result<TargetTerm, ExtractError> {
    let rc = |t: TargetTerm| Rc::new(t);
    Ok(match t {
        Term::Var(Ix(i)) => T::Var(runtime_index_in(binders, *i)?),
        Term::Lam(x, _, Mode::Omega, b) => T::Lam(x.clone(), rc(under(binders, x, Mode::Omega, |bs| go(bs, b))?)),
        Term::Lam(x, _, Mode::Zero, b) => under(binders, x, Mode::Zero, |bs| go(bs, b))?,
        Term::App(_, Mode::Omega, f, a) => T::App(rc(go(binders, f)?), rc(go(binders, a)?)),
        Term::App(_, Mode::Zero, f, _) => go(binders, f)?,
        Term::Pair(Mode::Omega, a, b) => T::Pair(rc(go(binders, a)?), rc(go(binders, b)?)),
        Term::Pair(Mode::Zero, _, b) => go(binders, b)?,
        Term::Fst(Mode::Omega, p) => T::Fst(rc(go(binders, p)?)),
        Term::Fst(Mode::Zero, _) => return Err(ExtractError::ErasedConstruct("first projection of an erased pair")),
        Term::Snd(Mode::Omega, p) => T::Snd(rc(go(binders, p)?)),
        Term::Snd(Mode::Zero, p) => go(binders, p)?,
        Term::Zero => T::Zero,
        Term::Succ(_) => {
            let mut layers = 0;
            let mut cur = t;
            while let Term::Succ(p) = cur {
                layers += 1;
                cur = p;
            }
            let mut out = go(binders, cur)?;
            for _ in 0..layers {
                out = T::Succ(rc(out));
            }
            out
        }
        Term::True => T::True,
        Term::False => T::False,
        Term::NatElim(_, z, s, n) => T::NatRec(rc(go(binders, z)?), rc(go(binders, s)?), rc(go(binders, n)?)),
        Term::BoolElim(_, a, b, c) => T::If(rc(go(binders, c)?), rc(go(binders, a)?), rc(go(binders, b)?)),
        Term::Let(x, Mode::Omega, _, d, b) => {
            let d = go(binders, d)?;
            T::Let(x.clone(), rc(d), rc(under(binders, x, Mode::Omega, |bs| go(bs, b))?))
        }
        Term::Let(x, Mode::Zero, _, _, b) => under(binders, x, Mode::Zero, |bs| go(bs, b))?,
        Term::Univ => return Err(ExtractError::ErasedConstruct("universe")),
        Term::NatTy => return Err(ExtractError::ErasedConstruct("type `Nat`")),
        Term::BoolTy => return Err(ExtractError::ErasedConstruct("type `Bool`")),
        Term::Pi(..) => return Err(ExtractError::ErasedConstruct("Π-type")),
        Term::Sigma(..) => return Err(ExtractError::ErasedConstruct("Σ-type")),
        Term::Meta(_) | Term::InsertedMeta(..) => return Err(ExtractError::Meta),
    })
}

/// Extracts `t`, a term at the depth of the declaration at `level`, as a
/// closed program: the runtime declarations it depends on become `let`s,
/// unused ones are left out.
pub fn extract_closed(el: &Elaboration, level: usize, t: &Term) -> Result<TargetTerm, ExtractError> {
    let entries = &el.ctx.entries[..level];
    let binders: Vec<(Name, Mode)> = entries.iter().map(|e| (e.name.clone(), e.mode)).collect();
    let mut out = go(&mut binders.clone(), t)?;
    for (lvl, e) in entries.iter().enumerate().rev() {
        if e.mode == Mode::Zero {
            continue;
        }
        if !target::mentions(&out, 0) {
            out = target::shift(&out, -1, 1);
            continue;
        }
        let def = e.def.as_ref().ok_or_else(|| ExtractError::Opaque(e.name.clone()))?;
        let d = go(&mut binders[..lvl].to_vec(), def)?;
        out = T::Let(e.name.clone(), Rc::new(d), Rc::new(out));
    }
    Ok(out)
}

/// Closed extraction of a named declaration.
pub fn extract_decl(el: &Elaboration, name: &str) -> Result<TargetTerm, ExtractError> {
    let d = el.decl(name).ok_or_else(|| ExtractError::Unknown(name.to_string()))?;
    extract_closed(el, d.level, &d.body)
}

/// Closed extraction of `main`.
pub fn extract_main(el: &Elaboration) -> Result<TargetTerm, ExtractError> {
    let m = el.main.as_ref().ok_or_else(|| ExtractError::Unknown("main".to_string()))?;
    extract_closed(el, el.ctx.entries.len(), &m.term)
}

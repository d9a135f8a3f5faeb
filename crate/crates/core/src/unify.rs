//! Pattern unification with erasure-aware renaming.
//!
//! A metavariable applied to distinct bound variables is solved by abstracting
//! the other side over those variables. Besides the usual occurs and scope
//! checks, renaming rejects solutions that would use a mode-0 variable in a
//! runtime position of a metavariable created outside the erasure marker.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::kernel::{
    apply, check, eval, force, fst, print_term, quote, snd, CapturedEntry, Context, Elim, Env, KernelError,
    Lvl, MetaEntry, MetaId, MetaStore, Name, Solution, Term, Value,
};
use crate::mode::{Icit, Mode};
use crate::span::SourceSpan;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UnifyError {
    #[error("cannot unify `{left}` with `{right}`")]
    Mismatch { left: String, right: String },
    #[error("non-pattern spine: {meta} is not applied to distinct bound variables")]
    NonPattern { meta: MetaId },
    #[error("non-linear spine: {meta} is applied to `{name}` more than once")]
    NonLinear { meta: MetaId, name: Name },
    #[error("occurs check: {meta} would occur in its own solution")]
    Occurs { meta: MetaId },
    #[error("scope error: the solution of {meta} would mention `{name}`, which is not in its scope")]
    Scope { meta: MetaId, name: Name },
    #[error("mode error: erased variable `{name}` would be used at runtime in the solution of {meta}")]
    Mode { meta: MetaId, name: Name },
    #[error("mode error: the solution of {meta} would use {what} at runtime")]
    ErasedConstruct { meta: MetaId, what: &'static str },
    #[error("internal error: solution of {meta} rejected by the kernel: {reason}")]
    Rejected { meta: MetaId, reason: KernelError },
}

impl UnifyError {
    /// Whether the failure is a violation of the mode discipline.
    pub fn is_mode_error(&self) -> bool {
        matches!(self, UnifyError::Mode { .. } | UnifyError::ErasedConstruct { .. })
    }
}

type Result<T> = std::result::Result<T, UnifyError>;

/// Allocates a metavariable of type `ty` in `ctx` and returns it applied to
/// the bound variables of `ctx`.
pub fn fresh_meta(metas: &mut MetaStore, ctx: &Context, ty: &Value, span: Option<SourceSpan>) -> Term {
    let captured: Vec<CapturedEntry> = ctx
        .entries
        .iter()
        .enumerate()
        .map(|(lvl, e)| CapturedEntry {
            name: e.name.clone(),
            mode: e.mode,
            ty: quote(metas, Lvl(lvl), &e.ty),
            def: e.def.clone(),
        })
        .collect();
    let ty_term = ctx.quote(metas, ty);
    let closed_ty = captured.iter().rev().fold(ty_term.clone(), |acc, e| match &e.def {
        Some(d) => Term::Let(e.name.clone(), e.mode, Rc::new(e.ty.clone()), Rc::new(d.clone()), Rc::new(acc)),
        None => Term::Pi(e.name.clone(), Icit::Expl, e.mode, Rc::new(e.ty.clone()), Rc::new(acc)),
    });
    let id = metas.next_id();
    metas.push(MetaEntry {
        id,
        captured,
        erased: ctx.erased,
        ty: ty_term,
        closed_ty,
        solution: None,
        span,
    });
    if ctx.entries.is_empty() {
        Term::Meta(id)
    } else {
        Term::InsertedMeta(id, Rc::from(ctx.mask()))
    }
}

/// Renaming from the context of a unification problem (codomain) to the
/// parameters of a metavariable solution (domain).
#[derive(Clone, Debug)]
pub struct PartialRenaming {
    pub dom: Lvl,
    pub cod: Lvl,
    /// codomain level to (domain level, mode of the parameter)
    pub map: HashMap<Lvl, (Lvl, Mode)>,
    /// Whether the metavariable was created under the erasure marker.
    pub allow_erased: bool,
}

impl PartialRenaming {
    fn lift(&self, mode: Mode) -> PartialRenaming {
        let mut map = self.map.clone();
        map.insert(self.cod, (self.dom, mode));
        PartialRenaming {
            dom: self.dom.next(),
            cod: self.cod.next(),
            map,
            allow_erased: self.allow_erased,
        }
    }
}

/// One parameter of a solution: the lambda it becomes.
#[derive(Clone, Debug)]
struct Param {
    name: Name,
    icit: Icit,
    mode: Mode,
}

fn var_name(names: &[Name], lvl: Lvl) -> Name {
    names.get(lvl.0).cloned().unwrap_or_else(|| Rc::from(format!("#{}", lvl.0)))
}

/// Turns a pattern spine into a renaming.
pub fn invert(
    metas: &MetaStore,
    names: &[Name],
    depth: Lvl,
    meta: MetaId,
    spine: &[Elim],
) -> Result<PartialRenaming> {
    invert_params(metas, names, depth, meta, spine).map(|(r, _)| r)
}

fn invert_params(
    metas: &MetaStore,
    names: &[Name],
    depth: Lvl,
    meta: MetaId,
    spine: &[Elim],
) -> Result<(PartialRenaming, Vec<Param>)> {
    let mut map = HashMap::new();
    let mut params = Vec::new();
    for (i, elim) in spine.iter().enumerate() {
        match elim {
            Elim::App(icit, mode, arg) => match force(metas, arg.clone()) {
                Value::Rigid(x, sp) if sp.is_empty() => {
                    if map.insert(x, (Lvl(i), *mode)).is_some() {
                        return Err(UnifyError::NonLinear { meta, name: var_name(names, x) });
                    }
                    params.push(Param { name: var_name(names, x), icit: *icit, mode: *mode });
                }
                _ => return Err(UnifyError::NonPattern { meta }),
            },
            _ => return Err(UnifyError::NonPattern { meta }),
        }
    }
    let allow_erased = metas.get(meta).erased;
    Ok((
        PartialRenaming { dom: Lvl(spine.len()), cod: depth, map, allow_erased },
        params,
    ))
}

struct Renamer<'a> {
    metas: &'a MetaStore,
    meta: MetaId,
    names: Vec<Name>,
}

impl Renamer<'_> {
    fn erased_construct(&self, erased: bool, what: &'static str) -> Result<()> {
        if erased {
            Ok(())
        } else {
            Err(UnifyError::ErasedConstruct { meta: self.meta, what })
        }
    }

    fn under<T>(&mut self, name: &Name, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.names.push(name.clone());
        let r = f(self);
        self.names.pop();
        r
    }

    fn rename(&mut self, ren: &PartialRenaming, erased: bool, v: &Value) -> Result<Term> {
        let metas = self.metas;
        match force(metas, v.clone()) {
            Value::Rigid(x, sp) => {
                let head = match ren.map.get(&x) {
                    None => {
                        return Err(UnifyError::Scope { meta: self.meta, name: var_name(&self.names, x) });
                    }
                    Some((y, mode)) => {
                        if *mode == Mode::Zero && !erased {
                            return Err(UnifyError::Mode { meta: self.meta, name: var_name(&self.names, x) });
                        }
                        Term::Var(y.to_ix(ren.dom))
                    }
                };
                self.rename_spine(ren, erased, head, &sp)
            }
            Value::Flex(m, sp) => {
                if m == self.meta {
                    return Err(UnifyError::Occurs { meta: self.meta });
                }
                if metas.get(m).erased {
                    self.erased_construct(erased, "an erased metavariable")?;
                }
                self.rename_spine(ren, erased, Term::Meta(m), &sp)
            }
            Value::Lam(x, i, m, body) => {
                let inner = body.apply(metas, Value::var(ren.cod));
                let b = self.under(&x, |r| r.rename(&ren.lift(m), erased, &inner))?;
                Ok(Term::Lam(x, i, m, Rc::new(b)))
            }
            Value::Pi(x, i, m, a, b) => {
                self.erased_construct(erased, "a type")?;
                let a = self.rename(ren, true, &a)?;
                let inner = b.apply(metas, Value::var(ren.cod));
                let b = self.under(&x, |r| r.rename(&ren.lift(m), true, &inner))?;
                Ok(Term::Pi(x, i, m, Rc::new(a), Rc::new(b)))
            }
            Value::Sigma(x, m, a, b) => {
                self.erased_construct(erased, "a type")?;
                let a = self.rename(ren, true, &a)?;
                let inner = b.apply(metas, Value::var(ren.cod));
                let b = self.under(&x, |r| r.rename(&ren.lift(m), true, &inner))?;
                Ok(Term::Sigma(x, m, Rc::new(a), Rc::new(b)))
            }
            Value::Pair(m, a, b) => {
                let a = self.rename(ren, erased || m == Mode::Zero, &a)?;
                let b = self.rename(ren, erased, &b)?;
                Ok(Term::Pair(m, Rc::new(a), Rc::new(b)))
            }
            Value::Univ => {
                self.erased_construct(erased, "the universe")?;
                Ok(Term::Univ)
            }
            Value::NatTy => {
                self.erased_construct(erased, "a type")?;
                Ok(Term::NatTy)
            }
            Value::BoolTy => {
                self.erased_construct(erased, "a type")?;
                Ok(Term::BoolTy)
            }
            Value::Zero => Ok(Term::Zero),
            Value::True => Ok(Term::True),
            Value::False => Ok(Term::False),
            Value::Succ(n) => Ok(Term::Succ(Rc::new(self.rename(ren, erased, &n)?))),
        }
    }

    fn rename_spine(&mut self, ren: &PartialRenaming, erased: bool, head: Term, spine: &[Elim]) -> Result<Term> {
        let mut acc = head;
        for elim in spine {
            acc = match elim {
                Elim::App(i, m, a) => {
                    let a = self.rename(ren, erased || *m == Mode::Zero, a)?;
                    Term::App(*i, *m, Rc::new(acc), Rc::new(a))
                }
                Elim::Fst(m) => {
                    if *m == Mode::Zero {
                        self.erased_construct(erased, "the first projection of an erased pair")?;
                    }
                    Term::Fst(*m, Rc::new(acc))
                }
                Elim::Snd(m) => Term::Snd(*m, Rc::new(acc)),
                Elim::NatElim(p, z, s) => Term::NatElim(
                    Rc::new(self.rename(ren, true, p)?),
                    Rc::new(self.rename(ren, erased, z)?),
                    Rc::new(self.rename(ren, erased, s)?),
                    Rc::new(acc),
                ),
                Elim::BoolElim(p, t, f) => Term::BoolElim(
                    Rc::new(self.rename(ren, true, p)?),
                    Rc::new(self.rename(ren, erased, t)?),
                    Rc::new(self.rename(ren, erased, f)?),
                    Rc::new(acc),
                ),
            };
        }
        Ok(acc)
    }
}

/// Quotes `rhs` through the renaming `ren`, checking occurrences of `meta`,
/// scope, and modes. `names` are the names of the unification context.
pub fn rename(
    metas: &MetaStore,
    names: &[Name],
    meta: MetaId,
    ren: &PartialRenaming,
    rhs: &Value,
) -> Result<Term> {
    let mut r = Renamer { metas, meta, names: names.to_vec() };
    r.rename(ren, ren.allow_erased, rhs)
}

/// Solves `meta spine =?= rhs`, checks the solution with the kernel and
/// commits it.
pub fn solve(
    metas: &mut MetaStore,
    names: &[Name],
    depth: Lvl,
    meta: MetaId,
    spine: &[Elim],
    rhs: &Value,
) -> Result<()> {
    let (ren, params) = invert_params(metas, names, depth, meta, spine)?;
    let body = rename(metas, names, meta, &ren, rhs)?;
    let term = params
        .iter()
        .rev()
        .fold(body, |acc, p| Term::Lam(p.name.clone(), p.icit, p.mode, Rc::new(acc)));
    let entry = metas.get(meta);
    let expected = eval(metas, &Env::new(), &entry.closed_ty);
    let ctx = Context::new().with_erased(entry.erased);
    if let Err(reason) = check(metas, &ctx, &term, &expected) {
        return Err(UnifyError::Rejected { meta, reason });
    }
    let value = eval(metas, &Env::new(), &term);
    metas.commit(meta, Solution { term, value });
    Ok(())
}

/// Unifies two values at context depth `names.len()`.
pub fn unify(metas: &mut MetaStore, names: &[Name], a: &Value, b: &Value) -> Result<()> {
    let depth = Lvl(names.len());
    let a = force(metas, a.clone());
    let b = force(metas, b.clone());
    let under = |names: &[Name], x: &Name| {
        let mut v = names.to_vec();
        v.push(x.clone());
        v
    };
    let mismatch = |metas: &MetaStore| UnifyError::Mismatch {
        left: print_term(names, &quote(metas, depth, &a)),
        right: print_term(names, &quote(metas, depth, &b)),
    };
    match (&a, &b) {
        (Value::Univ, Value::Univ)
        | (Value::NatTy, Value::NatTy)
        | (Value::BoolTy, Value::BoolTy)
        | (Value::Zero, Value::Zero)
        | (Value::True, Value::True)
        | (Value::False, Value::False) => Ok(()),
        (Value::Succ(x), Value::Succ(y)) => unify(metas, names, x, y),
        (Value::Flex(m1, sp1), Value::Flex(m2, sp2)) if m1 == m2 => {
            unify_spine(metas, names, sp1, sp2).map_err(|e| match e {
                UnifyError::Mismatch { .. } => mismatch(metas),
                e => e,
            })
        }
        (Value::Flex(m1, sp1), Value::Flex(m2, sp2)) => match solve(metas, names, depth, *m1, sp1, &b) {
            Ok(()) => Ok(()),
            Err(first) => solve(metas, names, depth, *m2, sp2, &a).map_err(|_| first),
        },
        (Value::Flex(m, sp), _) => solve(metas, names, depth, *m, sp, &b),
        (_, Value::Flex(m, sp)) => solve(metas, names, depth, *m, sp, &a),
        (Value::Lam(x, i1, m1, c1), Value::Lam(_, i2, m2, c2)) => {
            if i1 != i2 || m1 != m2 {
                return Err(mismatch(metas));
            }
            let v = Value::var(depth);
            let (l, r) = (c1.apply(metas, v.clone()), c2.apply(metas, v));
            unify(metas, &under(names, x), &l, &r)
        }
        (Value::Lam(x, i, m, c), other @ Value::Rigid(..)) => {
            let v = Value::var(depth);
            let l = c.apply(metas, v.clone());
            let r = apply(metas, other.clone(), *i, *m, v);
            unify(metas, &under(names, x), &l, &r)
        }
        (other @ Value::Rigid(..), Value::Lam(x, i, m, c)) => {
            let v = Value::var(depth);
            let l = apply(metas, other.clone(), *i, *m, v.clone());
            let r = c.apply(metas, v);
            unify(metas, &under(names, x), &l, &r)
        }
        (Value::Pi(x, i1, m1, a1, b1), Value::Pi(_, i2, m2, a2, b2)) => {
            if i1 != i2 || m1 != m2 {
                return Err(mismatch(metas));
            }
            unify(metas, names, a1, a2)?;
            let v = Value::var(depth);
            let (l, r) = (b1.apply(metas, v.clone()), b2.apply(metas, v));
            unify(metas, &under(names, x), &l, &r)
        }
        (Value::Sigma(x, m1, a1, b1), Value::Sigma(_, m2, a2, b2)) => {
            if m1 != m2 {
                return Err(mismatch(metas));
            }
            unify(metas, names, a1, a2)?;
            let v = Value::var(depth);
            let (l, r) = (b1.apply(metas, v.clone()), b2.apply(metas, v));
            unify(metas, &under(names, x), &l, &r)
        }
        (Value::Pair(m1, a1, b1), Value::Pair(m2, a2, b2)) => {
            if m1 != m2 {
                return Err(mismatch(metas));
            }
            unify(metas, names, a1, a2)?;
            unify(metas, names, b1, b2)
        }
        (Value::Pair(m, x, y), other @ Value::Rigid(..)) => {
            let (fo, so) = (fst(metas, other.clone(), *m), snd(metas, other.clone(), *m));
            unify(metas, names, x, &fo)?;
            unify(metas, names, y, &so)
        }
        (other @ Value::Rigid(..), Value::Pair(m, x, y)) => {
            let (fo, so) = (fst(metas, other.clone(), *m), snd(metas, other.clone(), *m));
            unify(metas, names, &fo, x)?;
            unify(metas, names, &so, y)
        }
        (Value::Rigid(x, sp1), Value::Rigid(y, sp2)) if x == y => {
            unify_spine(metas, names, sp1, sp2).map_err(|e| match e {
                UnifyError::Mismatch { .. } => mismatch(metas),
                e => e,
            })
        }
        _ => Err(mismatch(metas)),
    }
}

fn unify_spine(metas: &mut MetaStore, names: &[Name], sp1: &[Elim], sp2: &[Elim]) -> Result<()> {
    if sp1.len() != sp2.len() {
        return Err(UnifyError::Mismatch { left: String::new(), right: String::new() });
    }
    for (e1, e2) in sp1.iter().zip(sp2.iter()) {
        match (e1, e2) {
            (Elim::App(i1, m1, a1), Elim::App(i2, m2, a2)) if i1 == i2 && m1 == m2 => {
                unify(metas, names, a1, a2)?;
            }
            (Elim::Fst(m1), Elim::Fst(m2)) | (Elim::Snd(m1), Elim::Snd(m2)) if m1 == m2 => {}
            (Elim::NatElim(p1, z1, s1), Elim::NatElim(p2, z2, s2))
            | (Elim::BoolElim(p1, z1, s1), Elim::BoolElim(p2, z2, s2)) => {
                unify(metas, names, p1, p2)?;
                unify(metas, names, z1, z2)?;
                unify(metas, names, s1, s2)?;
            }
            _ => return Err(UnifyError::Mismatch { left: String::new(), right: String::new() }),
        }
    }
    Ok(())
}

//! Two executable translations on judgments, each followed by a recheck:
//! zeroing (every entry becomes erased) and mode stripping (every mode
//! becomes ω, leaving plain dependent type theory).

use std::rc::Rc;

use crate::elab::Elaboration;
use crate::kernel::{check, eval, quote, Context, Entry, Env, KernelError, Lvl, MaskEntry, MetaStore, Name, Term, Value};
use crate::mode::Mode;

/// Sets every entry's mode to 0 and clears the erasure marker.
pub fn zero_ctx(ctx: &Context) -> Context {
    let entries = ctx
        .entries
        .iter()
        .map(|e| Entry { mode: Mode::Zero, ..e.clone() })
        .collect();
    Context { env: ctx.env.clone(), entries, erased: false }
}

/// Given `ctx ⊢ t : ty`, checks `zero_ctx(ctx), # ⊢ t : ty`.
pub fn check_zeroing(metas: &MetaStore, ctx: &Context, t: &Term, ty: &Value) -> Result<(), KernelError> {
    let zeroed = zero_ctx(ctx).erase();
    let ty = eval(metas, &zeroed.env, &quote(metas, ctx.depth(), ty));
    check(metas, &zeroed, t, &ty)
}

/// Replaces every mode annotation by ω.
pub fn strip_modes(t: &Term) -> Term {
    let s = |t: &Rc<Term>| Rc::new(strip_modes(t));
    let w = Mode::Omega;
    match t {
        Term::Var(_)
        | Term::Univ
        | Term::NatTy
        | Term::BoolTy
        | Term::Zero
        | Term::True
        | Term::False
        | Term::Meta(_) => t.clone(),
        Term::Lam(x, i, _, b) => Term::Lam(x.clone(), *i, w, s(b)),
        Term::App(i, _, f, a) => Term::App(*i, w, s(f), s(a)),
        Term::Pi(x, i, _, a, b) => Term::Pi(x.clone(), *i, w, s(a), s(b)),
        Term::Sigma(x, _, a, b) => Term::Sigma(x.clone(), w, s(a), s(b)),
        Term::Pair(_, a, b) => Term::Pair(w, s(a), s(b)),
        Term::Fst(_, p) => Term::Fst(w, s(p)),
        Term::Snd(_, p) => Term::Snd(w, s(p)),
        Term::Succ(n) => Term::Succ(s(n)),
        Term::NatElim(p, z, f, n) => Term::NatElim(s(p), s(z), s(f), s(n)),
        Term::BoolElim(p, a, b, c) => Term::BoolElim(s(p), s(a), s(b), s(c)),
        Term::Let(x, _, ty, d, b) => Term::Let(x.clone(), w, s(ty), s(d), s(b)),
        Term::InsertedMeta(m, mask) => Term::InsertedMeta(
            *m,
            mask.iter()
                .map(|e| match e {
                    MaskEntry::Bound(_) => MaskEntry::Bound(w),
                    MaskEntry::Defined => MaskEntry::Defined,
                })
                .collect(),
        ),
    }
}

/// Strips modes from every entry of `ctx` (types and definitions included)
/// and sets the erasure marker.
pub fn strip_ctx(metas: &MetaStore, ctx: &Context) -> Context {
    let mut env = Env::new();
    let mut entries = Vec::with_capacity(ctx.entries.len());
    for (lvl, e) in ctx.entries.iter().enumerate() {
        let ty = eval(metas, &env, &strip_modes(&quote(metas, Lvl(lvl), &e.ty)));
        let def = e.def.as_ref().map(strip_modes);
        let value = match &def {
            Some(d) => eval(metas, &env, d),
            None => Value::var(Lvl(lvl)),
        };
        env = env.extend(value);
        entries.push(Entry { name: e.name.clone(), mode: Mode::Omega, ty, def, hidden: e.hidden });
    }
    Context { env, entries, erased: true }
}

/// Given `ctx ⊢ t : ty`, checks the stripped judgment.
pub fn recheck_stripped(metas: &MetaStore, ctx: &Context, t: &Term, ty: &Value) -> Result<(), KernelError> {
    let stripped = strip_ctx(metas, ctx);
    let ty = eval(metas, &stripped.env, &strip_modes(&quote(metas, ctx.depth(), ty)));
    check(metas, &stripped, &strip_modes(t), &ty)
}

/// Outcome of both translations on one declaration.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub name: Name,
    pub zeroing: Result<(), KernelError>,
    pub stripping: Result<(), KernelError>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.zeroing.is_ok() && self.stripping.is_ok()
    }
}

/// Runs [`check_zeroing`] and [`recheck_stripped`] on every declaration of
/// an elaboration, and on `main` if present.
pub fn sweep(el: &Elaboration) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    let mut judgments = Vec::new();
    for d in &el.decls {
        judgments.push((d.name.clone(), d.level, d.mode, d.body.clone(), d.ty.clone()));
    }
    if let Some(m) = &el.main {
        judgments.push((Name::from("main"), el.ctx.entries.len(), Mode::Omega, m.term.clone(), m.ty.clone()));
    }
    for (name, level, mode, body, ty) in judgments {
        let ctx = Context::from_entries(&el.metas, el.ctx.entries[..level].to_vec(), false);
        let ctx = if mode == Mode::Zero { ctx.erase() } else { ctx };
        let ty = ctx.eval(&el.metas, &ty);
        rows.push(SweepRow {
            name,
            zeroing: check_zeroing(&el.metas, &ctx, &body, &ty),
            stripping: recheck_stripped(&el.metas, &ctx, &body, &ty),
        });
    }
    rows
}

use std::rc::Rc;

use super::metas::MetaStore;
use super::nbe::{apply, force, quote, rigid_env};
use super::term::{Lvl, MaskEntry, Term};
use super::value::Value;
use crate::mode::Icit;

/// Substitutes every solved metavariable in `t`, which lives at context depth
/// `depth`. Meta applications are β-reduced; everything else is untouched.
pub fn zonk(metas: &MetaStore, depth: usize, t: &Term) -> Term {
    let z = |d: usize, t: &Rc<Term>| Rc::new(zonk(metas, d, t));
    match t {
        Term::Meta(m) => match metas.solution(*m) {
            Some(v) => quote(metas, Lvl(depth), v),
            None => t.clone(),
        },
        Term::InsertedMeta(m, mask) => match metas.solution(*m) {
            Some(v) => {
                let env = rigid_env(depth);
                let args = env.to_vec();
                let applied = mask.iter().zip(args).fold(v.clone(), |acc, (slot, arg)| match slot {
                    MaskEntry::Bound(mode) => apply(metas, acc, Icit::Expl, *mode, arg),
                    MaskEntry::Defined => acc,
                });
                quote(metas, Lvl(depth), &force(metas, applied))
            }
            None => t.clone(),
        },
        Term::Var(_)
        | Term::Univ
        | Term::NatTy
        | Term::BoolTy
        | Term::Zero
        | Term::True
        | Term::False => t.clone(),
        Term::Lam(x, i, m, b) => Term::Lam(x.clone(), *i, *m, z(depth + 1, b)),
        Term::App(i, m, f, a) => Term::App(*i, *m, z(depth, f), z(depth, a)),
        Term::Pi(x, i, m, a, b) => Term::Pi(x.clone(), *i, *m, z(depth, a), z(depth + 1, b)),
        Term::Sigma(x, m, a, b) => Term::Sigma(x.clone(), *m, z(depth, a), z(depth + 1, b)),
        Term::Pair(m, a, b) => Term::Pair(*m, z(depth, a), z(depth, b)),
        Term::Fst(m, p) => Term::Fst(*m, z(depth, p)),
        Term::Snd(m, p) => Term::Snd(*m, z(depth, p)),
        Term::Succ(n) => Term::Succ(z(depth, n)),
        Term::NatElim(p, a, b, n) => Term::NatElim(z(depth, p), z(depth, a), z(depth, b), z(depth, n)),
        Term::BoolElim(p, a, b, n) => Term::BoolElim(z(depth, p), z(depth, a), z(depth, b), z(depth, n)),
        Term::Let(x, m, ty, d, b) => Term::Let(x.clone(), *m, z(depth, ty), z(depth, d), z(depth + 1, b)),
    }
}

/// Ids of the metavariables still occurring in `t`.
pub fn metas_in(t: &Term) -> Vec<super::term::MetaId> {
    let mut out = Vec::new();
    t.visit(&mut |s| match s {
        Term::Meta(m) | Term::InsertedMeta(m, _) if !out.contains(m) => out.push(*m),
        _ => {}
    });
    out
}

/// Whether `v` still reaches an unsolved metavariable after forcing.
pub fn value_is_solved(metas: &MetaStore, depth: Lvl, v: &Value) -> bool {
    metas_in(&quote(metas, depth, v)).is_empty()
}

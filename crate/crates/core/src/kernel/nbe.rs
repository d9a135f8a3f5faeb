//! Evaluation into [`Value`]s and readback into β-normal [`Term`]s.

use std::rc::Rc;

use super::metas::MetaStore;
use super::term::{Lvl, MaskEntry, MetaId, Term};
use super::value::{push_elim, Closure, Elim, Env, Spine, Value};
use crate::mode::{Icit, Mode};

pub fn eval(metas: &MetaStore, env: &Env, t: &Term) -> Value {
    match t {
        Term::Var(ix) => match env.get(ix.0) {
            Some(v) => v.clone(),
            None => panic!("internal error: index {} out of scope (depth {})", ix.0, env.len()),
        },
        Term::Lam(x, i, m, body) => Value::Lam(x.clone(), *i, *m, Closure::new(env.clone(), body.clone())),
        Term::App(i, m, f, a) => {
            let f = eval(metas, env, f);
            let a = eval(metas, env, a);
            apply(metas, f, *i, *m, a)
        }
        Term::Pi(x, i, m, a, b) => Value::Pi(
            x.clone(),
            *i,
            *m,
            Rc::new(eval(metas, env, a)),
            Closure::new(env.clone(), b.clone()),
        ),
        Term::Sigma(x, m, a, b) => Value::Sigma(
            x.clone(),
            *m,
            Rc::new(eval(metas, env, a)),
            Closure::new(env.clone(), b.clone()),
        ),
        Term::Pair(m, a, b) => Value::Pair(*m, Rc::new(eval(metas, env, a)), Rc::new(eval(metas, env, b))),
        Term::Fst(m, p) => fst(metas, eval(metas, env, p), *m),
        Term::Snd(m, p) => snd(metas, eval(metas, env, p), *m),
        Term::Univ => Value::Univ,
        Term::NatTy => Value::NatTy,
        Term::Zero => Value::Zero,
        Term::Succ(_) => {
            let mut count = 0;
            let mut cur = t;
            while let Term::Succ(n) = cur {
                count += 1;
                cur = n;
            }
            let base = eval(metas, env, cur);
            (0..count).fold(base, |acc, _| Value::Succ(Rc::new(acc)))
        }
        Term::NatElim(p, z, s, n) => {
            let p = eval(metas, env, p);
            let z = eval(metas, env, z);
            let s = eval(metas, env, s);
            let n = eval(metas, env, n);
            nat_elim(metas, p, z, s, n)
        }
        Term::BoolTy => Value::BoolTy,
        Term::True => Value::True,
        Term::False => Value::False,
        Term::BoolElim(p, t, f, b) => {
            let p = eval(metas, env, p);
            let t = eval(metas, env, t);
            let f = eval(metas, env, f);
            let b = eval(metas, env, b);
            bool_elim(metas, p, t, f, b)
        }
        Term::Let(_, _, _, def, body) => {
            let def = eval(metas, env, def);
            eval(metas, &env.extend(def), body)
        }
        Term::Meta(m) => meta_value(metas, *m),
        Term::InsertedMeta(m, mask) => {
            let head = meta_value(metas, *m);
            apply_mask(metas, head, env, mask)
        }
    }
}

fn meta_value(metas: &MetaStore, m: MetaId) -> Value {
    match metas.solution(m) {
        Some(v) => v.clone(),
        None => Value::meta(m),
    }
}

/// Applies `head` to the bound entries of `env` selected by `mask` (level order).
fn apply_mask(metas: &MetaStore, head: Value, env: &Env, mask: &[MaskEntry]) -> Value {
    let values = env.to_vec();
    assert_eq!(values.len(), mask.len(), "internal error: meta mask length differs from context depth");
    values
        .into_iter()
        .zip(mask.iter())
        .fold(head, |acc, (v, entry)| match entry {
            MaskEntry::Bound(mode) => apply(metas, acc, Icit::Expl, *mode, v),
            MaskEntry::Defined => acc,
        })
}

impl Closure {
    pub fn apply(&self, metas: &MetaStore, arg: Value) -> Value {
        eval(metas, &self.env.extend(arg), &self.body)
    }
}

pub fn apply(metas: &MetaStore, f: Value, icit: Icit, mode: Mode, arg: Value) -> Value {
    match force(metas, f) {
        Value::Lam(_, _, _, body) => body.apply(metas, arg),
        Value::Rigid(x, sp) => Value::Rigid(x, push_elim(&sp, Elim::App(icit, mode, arg))),
        Value::Flex(m, sp) => Value::Flex(m, push_elim(&sp, Elim::App(icit, mode, arg))),
        other => panic!("internal error: applying a non-function {other:?}"),
    }
}

pub fn fst(metas: &MetaStore, p: Value, mode: Mode) -> Value {
    match force(metas, p) {
        Value::Pair(_, a, _) => (*a).clone(),
        Value::Rigid(x, sp) => Value::Rigid(x, push_elim(&sp, Elim::Fst(mode))),
        Value::Flex(m, sp) => Value::Flex(m, push_elim(&sp, Elim::Fst(mode))),
        other => panic!("internal error: first projection of a non-pair {other:?}"),
    }
}

pub fn snd(metas: &MetaStore, p: Value, mode: Mode) -> Value {
    match force(metas, p) {
        Value::Pair(_, _, b) => (*b).clone(),
        Value::Rigid(x, sp) => Value::Rigid(x, push_elim(&sp, Elim::Snd(mode))),
        Value::Flex(m, sp) => Value::Flex(m, push_elim(&sp, Elim::Snd(mode))),
        other => panic!("internal error: second projection of a non-pair {other:?}"),
    }
}

pub fn nat_elim(metas: &MetaStore, motive: Value, z: Value, s: Value, n: Value) -> Value {
    // collect the successor layers first so long numerals do not recurse
    let mut layers = Vec::new();
    let mut base = force(metas, n);
    while let Value::Succ(pred) = base {
        base = force(metas, (*pred).clone());
        layers.push(base.clone());
    }
    let mut acc = match base {
        Value::Zero => z,
        Value::Rigid(x, sp) => Value::Rigid(x, push_elim(&sp, Elim::NatElim(motive, z, s.clone()))),
        Value::Flex(m, sp) => Value::Flex(m, push_elim(&sp, Elim::NatElim(motive, z, s.clone()))),
        other => panic!("internal error: natElim on a non-natural {other:?}"),
    };
    // layers holds the predecessors from the outermost successor inwards
    for pred in layers.into_iter().rev() {
        let step = apply(metas, s.clone(), Icit::Expl, Mode::Omega, pred);
        acc = apply(metas, step, Icit::Expl, Mode::Omega, acc);
    }
    acc
}

pub fn bool_elim(metas: &MetaStore, motive: Value, t: Value, f: Value, b: Value) -> Value {
    match force(metas, b) {
        Value::True => t,
        Value::False => f,
        Value::Rigid(x, sp) => Value::Rigid(x, push_elim(&sp, Elim::BoolElim(motive, t, f))),
        Value::Flex(m, sp) => Value::Flex(m, push_elim(&sp, Elim::BoolElim(motive, t, f))),
        other => panic!("internal error: boolElim on a non-boolean {other:?}"),
    }
}

pub fn apply_elim(metas: &MetaStore, head: Value, elim: &Elim) -> Value {
    match elim {
        Elim::App(i, m, a) => apply(metas, head, *i, *m, a.clone()),
        Elim::Fst(m) => fst(metas, head, *m),
        Elim::Snd(m) => snd(metas, head, *m),
        Elim::NatElim(p, z, s) => nat_elim(metas, p.clone(), z.clone(), s.clone(), head),
        Elim::BoolElim(p, t, f) => bool_elim(metas, p.clone(), t.clone(), f.clone(), head),
    }
}

pub fn apply_spine(metas: &MetaStore, head: Value, spine: &Spine) -> Value {
    spine.iter().fold(head, |acc, e| apply_elim(metas, acc, e))
}

/// Unfolds solved metavariables at the head of `v`.
pub fn force(metas: &MetaStore, v: Value) -> Value {
    let mut v = v;
    loop {
        match &v {
            Value::Flex(m, sp) => match metas.solution(*m) {
                Some(sol) => v = apply_spine(metas, sol.clone(), sp),
                None => return v,
            },
            _ => return v,
        }
    }
}

/// Reads a value back into a β-normal term at context depth `depth`.
pub fn quote(metas: &MetaStore, depth: Lvl, v: &Value) -> Term {
    match force(metas, v.clone()) {
        Value::Rigid(x, sp) => quote_spine(metas, depth, Term::Var(x.to_ix(depth)), &sp),
        Value::Flex(m, sp) => quote_spine(metas, depth, Term::Meta(m), &sp),
        Value::Lam(x, i, m, body) => {
            let body = body.apply(metas, Value::var(depth));
            Term::Lam(x, i, m, Rc::new(quote(metas, depth.next(), &body)))
        }
        Value::Pi(x, i, m, a, b) => {
            let a = quote(metas, depth, &a);
            let b = b.apply(metas, Value::var(depth));
            Term::Pi(x, i, m, Rc::new(a), Rc::new(quote(metas, depth.next(), &b)))
        }
        Value::Sigma(x, m, a, b) => {
            let a = quote(metas, depth, &a);
            let b = b.apply(metas, Value::var(depth));
            Term::Sigma(x, m, Rc::new(a), Rc::new(quote(metas, depth.next(), &b)))
        }
        Value::Pair(m, a, b) => Term::Pair(m, Rc::new(quote(metas, depth, &a)), Rc::new(quote(metas, depth, &b))),
        Value::Univ => Term::Univ,
        Value::NatTy => Term::NatTy,
        Value::Zero => Term::Zero,
        Value::Succ(n) => {
            let mut count = 1;
            let mut cur = force(metas, (*n).clone());
            while let Value::Succ(inner) = cur {
                count += 1;
                cur = force(metas, (*inner).clone());
            }
            let base = quote(metas, depth, &cur);
            (0..count).fold(base, |acc, _| Term::Succ(Rc::new(acc)))
        }
        Value::BoolTy => Term::BoolTy,
        Value::True => Term::True,
        Value::False => Term::False,
    }
}

fn quote_spine(metas: &MetaStore, depth: Lvl, head: Term, spine: &[Elim]) -> Term {
    spine.iter().fold(head, |acc, elim| match elim {
        Elim::App(i, m, a) => Term::App(*i, *m, Rc::new(acc), Rc::new(quote(metas, depth, a))),
        Elim::Fst(m) => Term::Fst(*m, Rc::new(acc)),
        Elim::Snd(m) => Term::Snd(*m, Rc::new(acc)),
        Elim::NatElim(p, z, s) => Term::NatElim(
            Rc::new(quote(metas, depth, p)),
            Rc::new(quote(metas, depth, z)),
            Rc::new(quote(metas, depth, s)),
            Rc::new(acc),
        ),
        Elim::BoolElim(p, t, f) => Term::BoolElim(
            Rc::new(quote(metas, depth, p)),
            Rc::new(quote(metas, depth, t)),
            Rc::new(quote(metas, depth, f)),
            Rc::new(acc),
        ),
    })
}

/// Normal form of a term in an environment of the given depth.
pub fn normalize(metas: &MetaStore, env: &Env, t: &Term) -> Term {
    quote(metas, Lvl(env.len()), &eval(metas, env, t))
}

/// Environment of `depth` fresh rigid variables.
pub fn rigid_env(depth: usize) -> Env {
    (0..depth).fold(Env::new(), |env, l| env.extend(Value::var(Lvl(l))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(t: &Term) -> Term {
        normalize(&MetaStore::new(), &Env::new(), t)
    }

    #[test]
    fn beta() {
        let id = Term::lam("x", Icit::Expl, Mode::Omega, Term::var(0));
        let t = Term::app(Mode::Omega, id, Term::Zero);
        assert!(matches!(eval(&MetaStore::new(), &Env::new(), &t), Value::Zero));
    }

    #[test]
    fn nat_elim_by_recursion() {
        // natElim _ zero (\_ r. succ r) 2 rebuilds 2
        let step = Term::lam(
            "k",
            Icit::Expl,
            Mode::Omega,
            Term::lam("r", Icit::Expl, Mode::Omega, Term::succ(Term::var(0))),
        );
        let motive = Term::lam("_", Icit::Expl, Mode::Omega, Term::NatTy);
        let t = Term::nat_elim(motive, Term::Zero, step, Term::numeral(2));
        assert_eq!(closed(&t), Term::numeral(2));
    }

    #[test]
    fn constructor_values() {
        assert_eq!(closed(&Term::numeral(2)), Term::numeral(2));
        assert_eq!(quote(&MetaStore::new(), Lvl(0), &Value::Zero), Term::Zero);
    }

    #[test]
    fn quote_identity_lambda() {
        let v = eval(
            &MetaStore::new(),
            &Env::new(),
            &Term::lam("x", Icit::Expl, Mode::Omega, Term::var(0)),
        );
        assert_eq!(
            quote(&MetaStore::new(), Lvl(0), &v),
            Term::lam("x", Icit::Expl, Mode::Omega, Term::var(0))
        );
    }

    #[test]
    fn quote_converts_levels_to_indices() {
        let v = apply(&MetaStore::new(), Value::var(Lvl(0)), Icit::Expl, Mode::Omega, Value::Zero);
        assert_eq!(
            quote(&MetaStore::new(), Lvl(1), &v),
            Term::app(Mode::Omega, Term::var(0), Term::Zero)
        );
    }

    #[test]
    fn stuck_eliminations_extend_the_spine() {
        let metas = MetaStore::new();
        let v = nat_elim(&metas, Value::NatTy, Value::Zero, Value::Zero, Value::var(Lvl(0)));
        match v {
            Value::Rigid(Lvl(0), sp) => assert!(matches!(sp[0], Elim::NatElim(..))),
            other => panic!("{other:?}"),
        }
        let b = bool_elim(&metas, Value::BoolTy, Value::Zero, Value::Zero, Value::True);
        assert!(matches!(b, Value::Zero));
    }

    #[test]
    fn long_numerals_do_not_overflow_the_stack() {
        let step = Term::lam(
            "k",
            Icit::Expl,
            Mode::Omega,
            Term::lam("r", Icit::Expl, Mode::Omega, Term::succ(Term::var(0))),
        );
        let motive = Term::lam("_", Icit::Expl, Mode::Omega, Term::NatTy);
        let t = Term::nat_elim(motive, Term::Zero, step, Term::numeral(5_000));
        let v = eval(&MetaStore::new(), &Env::new(), &t);
        let mut n = 0;
        let mut cur = v;
        while let Value::Succ(p) = cur {
            n += 1;
            cur = (*p).clone();
        }
        assert_eq!(n, 5_000);
    }
}

//! Definitional equality: βη on functions and pairs, structural elsewhere.

use std::rc::Rc;

use super::metas::MetaStore;
use super::nbe::{apply, force, fst, snd};
use super::term::Lvl;
use super::value::{Elim, Value};

/// Whether `a` and `b` are convertible at context depth `depth`. Unsolved
/// metas are only equal to themselves.
pub fn conv(metas: &MetaStore, depth: Lvl, a: &Value, b: &Value) -> bool {
    let a = force(metas, a.clone());
    let b = force(metas, b.clone());
    match (&a, &b) {
        (Value::Univ, Value::Univ)
        | (Value::NatTy, Value::NatTy)
        | (Value::BoolTy, Value::BoolTy)
        | (Value::Zero, Value::Zero)
        | (Value::True, Value::True)
        | (Value::False, Value::False) => true,
        (Value::Succ(x), Value::Succ(y)) => {
            let (mut x, mut y) = (x.clone(), y.clone());
            loop {
                let fx = force(metas, (*x).clone());
                let fy = force(metas, (*y).clone());
                match (&fx, &fy) {
                    (Value::Succ(x2), Value::Succ(y2)) => {
                        x = x2.clone();
                        y = y2.clone();
                    }
                    _ => return conv(metas, depth, &fx, &fy),
                }
            }
        }
        (Value::Pi(_, i1, m1, a1, b1), Value::Pi(_, i2, m2, a2, b2)) => {
            i1 == i2
                && m1 == m2
                && conv(metas, depth, a1, a2)
                && conv(
                    metas,
                    depth.next(),
                    &b1.apply(metas, Value::var(depth)),
                    &b2.apply(metas, Value::var(depth)),
                )
        }
        (Value::Sigma(_, m1, a1, b1), Value::Sigma(_, m2, a2, b2)) => {
            m1 == m2
                && conv(metas, depth, a1, a2)
                && conv(
                    metas,
                    depth.next(),
                    &b1.apply(metas, Value::var(depth)),
                    &b2.apply(metas, Value::var(depth)),
                )
        }
        (Value::Lam(_, i1, m1, b1), Value::Lam(_, i2, m2, b2)) => {
            i1 == i2
                && m1 == m2
                && conv(
                    metas,
                    depth.next(),
                    &b1.apply(metas, Value::var(depth)),
                    &b2.apply(metas, Value::var(depth)),
                )
        }
        (Value::Lam(_, i, m, body), other) | (other, Value::Lam(_, i, m, body)) => {
            if !is_neutral(other) {
                return false;
            }
            let x = Value::var(depth);
            conv(
                metas,
                depth.next(),
                &body.apply(metas, x.clone()),
                &apply(metas, other.clone(), *i, *m, x),
            )
        }
        (Value::Pair(m1, a1, b1), Value::Pair(m2, a2, b2)) => {
            m1 == m2 && conv(metas, depth, a1, a2) && conv(metas, depth, b1, b2)
        }
        (Value::Pair(m, x, y), other) | (other, Value::Pair(m, x, y)) => {
            if !is_neutral(other) {
                return false;
            }
            conv(metas, depth, x, &fst(metas, other.clone(), *m))
                && conv(metas, depth, y, &snd(metas, other.clone(), *m))
        }
        (Value::Rigid(x, sp1), Value::Rigid(y, sp2)) => x == y && conv_spine(metas, depth, sp1, sp2),
        (Value::Flex(x, sp1), Value::Flex(y, sp2)) => x == y && conv_spine(metas, depth, sp1, sp2),
        _ => false,
    }
}

fn is_neutral(v: &Value) -> bool {
    matches!(v, Value::Rigid(..) | Value::Flex(..))
}

pub(crate) fn conv_spine(metas: &MetaStore, depth: Lvl, sp1: &Rc<Vec<Elim>>, sp2: &Rc<Vec<Elim>>) -> bool {
    sp1.len() == sp2.len()
        && sp1.iter().zip(sp2.iter()).all(|(e1, e2)| conv_elim(metas, depth, e1, e2))
}

fn conv_elim(metas: &MetaStore, depth: Lvl, e1: &Elim, e2: &Elim) -> bool {
    match (e1, e2) {
        (Elim::App(i1, m1, a1), Elim::App(i2, m2, a2)) => i1 == i2 && m1 == m2 && conv(metas, depth, a1, a2),
        (Elim::Fst(m1), Elim::Fst(m2)) | (Elim::Snd(m1), Elim::Snd(m2)) => m1 == m2,
        (Elim::NatElim(p1, z1, s1), Elim::NatElim(p2, z2, s2))
        | (Elim::BoolElim(p1, z1, s1), Elim::BoolElim(p2, z2, s2)) => {
            conv(metas, depth, p1, p2) && conv(metas, depth, z1, z2) && conv(metas, depth, s1, s2)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::nbe::eval;
    use crate::kernel::term::Term;
    use crate::kernel::value::Env;
    use crate::mode::{Icit, Mode};

    fn ev(env: &Env, t: &Term) -> Value {
        eval(&MetaStore::new(), env, t)
    }

    #[test]
    fn eta_for_functions() {
        // f ≡ \x. f x under one bound variable f
        let env = Env::new().extend(Value::var(Lvl(0)));
        let eta = ev(
            &env,
            &Term::lam("x", Icit::Expl, Mode::Omega, Term::app(Mode::Omega, Term::var(1), Term::var(0))),
        );
        let f = Value::var(Lvl(0));
        assert!(conv(&MetaStore::new(), Lvl(1), &eta, &f));
        assert!(conv(&MetaStore::new(), Lvl(1), &f, &eta));
    }

    #[test]
    fn eta_for_pairs() {
        let env = Env::new().extend(Value::var(Lvl(0)));
        let p = ev(
            &env,
            &Term::pair(Mode::Omega, Term::Fst(Mode::Omega, Rc::new(Term::var(0))), Term::Snd(Mode::Omega, Rc::new(Term::var(0)))),
        );
        assert!(conv(&MetaStore::new(), Lvl(1), &p, &Value::var(Lvl(0))));
    }

    #[test]
    fn modes_are_significant() {
        let a = ev(&Env::new(), &Term::arrow(Mode::Zero, Term::NatTy, Term::NatTy));
        let b = ev(&Env::new(), &Term::arrow(Mode::Omega, Term::NatTy, Term::NatTy));
        assert!(!conv(&MetaStore::new(), Lvl(0), &a, &b));
        assert!(conv(&MetaStore::new(), Lvl(0), &a, &a));
    }

    #[test]
    fn numerals_compare_by_value() {
        let m = MetaStore::new();
        assert!(conv(&m, Lvl(0), &Value::numeral(3), &Value::numeral(3)));
        assert!(!conv(&m, Lvl(0), &Value::numeral(3), &Value::numeral(4)));
    }
}

use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::kernel::Name;

/// Untyped lambda calculus with primitive pairs, naturals and booleans.
/// Variables are de Bruijn indices; binder names are kept for printing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetTerm {
    Var(usize),
    Lam(Name, Rc<TargetTerm>),
    App(Rc<TargetTerm>, Rc<TargetTerm>),
    Pair(Rc<TargetTerm>, Rc<TargetTerm>),
    Fst(Rc<TargetTerm>),
    Snd(Rc<TargetTerm>),
    Zero,
    Succ(Rc<TargetTerm>),
    /// zero case, successor case, scrutinee
    NatRec(Rc<TargetTerm>, Rc<TargetTerm>, Rc<TargetTerm>),
    True,
    False,
    /// condition, then, else
    If(Rc<TargetTerm>, Rc<TargetTerm>, Rc<TargetTerm>),
    Let(Name, Rc<TargetTerm>, Rc<TargetTerm>),
}

use TargetTerm as T;

impl TargetTerm {
    pub fn lam(name: &str, body: TargetTerm) -> TargetTerm {
        T::Lam(Rc::from(name), Rc::new(body))
    }

    pub fn app(f: TargetTerm, a: TargetTerm) -> TargetTerm {
        T::App(Rc::new(f), Rc::new(a))
    }

    pub fn succ(t: TargetTerm) -> TargetTerm {
        T::Succ(Rc::new(t))
    }
}

/// `succ^k zero`.
pub fn numeral(k: u64) -> TargetTerm {
    (0..k).fold(T::Zero, |acc, _| T::succ(acc))
}

/// Reads back `succ^k zero`.
pub fn as_numeral(t: &TargetTerm) -> Option<u64> {
    let mut n = 0;
    let mut cur = t;
    loop {
        match cur {
            T::Zero => return Some(n),
            T::Succ(p) => {
                n += 1;
                cur = p;
            }
            _ => return None,
        }
    }
}

/// Syntactic equality up to binder names.
pub fn alpha_eq(a: &TargetTerm, b: &TargetTerm) -> bool {
    match (a, b) {
        (T::Var(i), T::Var(j)) => i == j,
        (T::Lam(_, x), T::Lam(_, y)) | (T::Fst(x), T::Fst(y)) | (T::Snd(x), T::Snd(y)) => alpha_eq(x, y),
        (T::Succ(_), T::Succ(_)) => {
            let (mut x, mut y) = (a, b);
            while let (T::Succ(x2), T::Succ(y2)) = (x, y) {
                x = x2;
                y = y2;
            }
            alpha_eq(x, y)
        }
        (T::App(f1, a1), T::App(f2, a2)) | (T::Pair(f1, a1), T::Pair(f2, a2)) => alpha_eq(f1, f2) && alpha_eq(a1, a2),
        (T::Let(_, d1, b1), T::Let(_, d2, b2)) => alpha_eq(d1, d2) && alpha_eq(b1, b2),
        (T::NatRec(a1, b1, c1), T::NatRec(a2, b2, c2)) | (T::If(a1, b1, c1), T::If(a2, b2, c2)) => {
            alpha_eq(a1, a2) && alpha_eq(b1, b2) && alpha_eq(c1, c2)
        }
        (T::Zero, T::Zero) | (T::True, T::True) | (T::False, T::False) => true,
        _ => false,
    }
}

/// Adds `by` to every index at or above `cutoff`.
pub(crate) fn shift(t: &TargetTerm, by: isize, cutoff: usize) -> TargetTerm {
    let s = |t: &Rc<TargetTerm>, c: usize| Rc::new(shift(t, by, c));
    match t {
        T::Var(i) if *i >= cutoff => T::Var((*i as isize + by) as usize),
        T::Var(_) | T::Zero | T::True | T::False => t.clone(),
        T::Lam(x, b) => T::Lam(x.clone(), s(b, cutoff + 1)),
        T::App(f, a) => T::App(s(f, cutoff), s(a, cutoff)),
        T::Pair(a, b) => T::Pair(s(a, cutoff), s(b, cutoff)),
        T::Fst(p) => T::Fst(s(p, cutoff)),
        T::Snd(p) => T::Snd(s(p, cutoff)),
        T::Succ(n) => T::Succ(s(n, cutoff)),
        T::NatRec(z, f, n) => T::NatRec(s(z, cutoff), s(f, cutoff), s(n, cutoff)),
        T::If(c, a, b) => T::If(s(c, cutoff), s(a, cutoff), s(b, cutoff)),
        T::Let(x, d, b) => T::Let(x.clone(), s(d, cutoff), s(b, cutoff + 1)),
    }
}

/// Replaces index `ix` by `arg` (already valid at the binding depth of `ix`)
/// and lowers the indices above it.
fn subst_at(t: &TargetTerm, ix: usize, arg: &TargetTerm) -> TargetTerm {
    let s = |t: &Rc<TargetTerm>, i: usize| Rc::new(subst_at(t, i, arg));
    match t {
        T::Var(i) if *i == ix => shift(arg, ix as isize, 0),
        T::Var(i) if *i > ix => T::Var(i - 1),
        T::Var(_) | T::Zero | T::True | T::False => t.clone(),
        T::Lam(x, b) => T::Lam(x.clone(), s(b, ix + 1)),
        T::App(f, a) => T::App(s(f, ix), s(a, ix)),
        T::Pair(a, b) => T::Pair(s(a, ix), s(b, ix)),
        T::Fst(p) => T::Fst(s(p, ix)),
        T::Snd(p) => T::Snd(s(p, ix)),
        T::Succ(n) => T::Succ(s(n, ix)),
        T::NatRec(z, f, n) => T::NatRec(s(z, ix), s(f, ix), s(n, ix)),
        T::If(c, a, b) => T::If(s(c, ix), s(a, ix), s(b, ix)),
        T::Let(x, d, b) => T::Let(x.clone(), s(d, ix), s(b, ix + 1)),
    }
}

/// `body[0 := arg]` where `body` is under one binder and `arg` is not.
pub(crate) fn instantiate(body: &TargetTerm, arg: &TargetTerm) -> TargetTerm {
    subst_at(body, 0, arg)
}

/// Whether index `ix` occurs free.
pub(crate) fn mentions(t: &TargetTerm, ix: usize) -> bool {
    match t {
        T::Var(i) => *i == ix,
        T::Zero | T::True | T::False => false,
        T::Lam(_, b) => mentions(b, ix + 1),
        T::App(a, b) | T::Pair(a, b) => mentions(a, ix) || mentions(b, ix),
        T::Fst(p) | T::Snd(p) | T::Succ(p) => mentions(p, ix),
        T::NatRec(a, b, c) | T::If(a, b, c) => mentions(a, ix) || mentions(b, ix) || mentions(c, ix),
        T::Let(_, d, b) => mentions(d, ix) || mentions(b, ix + 1),
    }
}

const TERM: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

/// Textual form: `\x. t`, `t u`, `(a, b)`, `natrec z s n`, `let x = t in u`, ...
pub fn print_target(t: &TargetTerm) -> String {
    let mut p = Printer { names: Vec::new(), out: String::new() };
    p.term(t, TERM);
    p.out
}

impl fmt::Display for TargetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_target(self))
    }
}

struct Printer {
    names: Vec<Name>,
    out: String,
}

impl Printer {
    fn fresh(&self, name: &Name) -> Name {
        let mut candidate = if &**name == "_" { "x".to_string() } else { name.to_string() };
        while self.names.iter().any(|n| **n == *candidate) {
            candidate.push('\'');
        }
        Rc::from(candidate)
    }

    fn paren(&mut self, need: bool, f: impl FnOnce(&mut Printer)) {
        if need {
            self.out.push('(');
        }
        f(self);
        if need {
            self.out.push(')');
        }
    }

    fn term(&mut self, t: &TargetTerm, prec: u8) {
        match t {
            T::Var(i) => {
                let len = self.names.len();
                let s = if *i < len { self.names[len - 1 - i].to_string() } else { format!("#{i}") };
                self.out.push_str(&s);
            }
            T::Lam(..) => self.paren(prec > TERM, |p| {
                let mut cur = t;
                let mut pushed = 0;
                p.out.push('\\');
                let mut first = true;
                while let T::Lam(x, b) = cur {
                    let x = p.fresh(x);
                    if !first {
                        p.out.push(' ');
                    }
                    first = false;
                    p.out.push_str(&x);
                    p.names.push(x);
                    pushed += 1;
                    cur = b;
                }
                p.out.push_str(". ");
                p.term(cur, TERM);
                for _ in 0..pushed {
                    p.names.pop();
                }
            }),
            T::Let(x, d, b) => self.paren(prec > TERM, |p| {
                let x = p.fresh(x);
                p.out.push_str(&format!("let {x} = "));
                p.term(d, TERM);
                p.out.push_str(" in ");
                p.names.push(x);
                p.term(b, TERM);
                p.names.pop();
            }),
            T::App(f, a) => self.paren(prec > APP, |p| {
                p.term(f, APP);
                p.out.push(' ');
                p.term(a, ATOM);
            }),
            T::Pair(a, b) => {
                self.out.push('(');
                self.term(a, TERM);
                self.out.push_str(", ");
                self.term(b, TERM);
                self.out.push(')');
            }
            T::Fst(x) | T::Snd(x) | T::Succ(x) => self.paren(prec > APP, |p| {
                let kw = match t {
                    T::Fst(_) => "fst ",
                    T::Snd(_) => "snd ",
                    _ => "succ ",
                };
                p.out.push_str(kw);
                p.term(x, ATOM);
            }),
            T::NatRec(a, b, c) | T::If(a, b, c) => self.paren(prec > APP, |p| {
                p.out.push_str(if matches!(t, T::NatRec(..)) { "natrec" } else { "if" });
                for x in [a, b, c] {
                    p.out.push(' ');
                    p.term(x, ATOM);
                }
            }),
            T::Zero => self.out.push_str("zero"),
            T::True => self.out.push_str("true"),
            T::False => self.out.push_str("false"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_round_trip() {
        assert_eq!(numeral(0), T::Zero);
        assert_eq!(as_numeral(&T::succ(T::Zero)), Some(1));
        assert_eq!(as_numeral(&T::lam("x", T::Var(0))), None);
        assert_eq!(as_numeral(&numeral(12)), Some(12));
    }

    #[test]
    fn alpha_equivalence_ignores_names() {
        assert!(alpha_eq(&T::lam("x", T::Var(0)), &T::lam("y", T::Var(0))));
        assert!(!alpha_eq(&T::Zero, &T::succ(T::Zero)));
        let let_term = T::Let(Rc::from("x"), Rc::new(T::Zero), Rc::new(T::Var(0)));
        assert!(!alpha_eq(&let_term, &T::Zero));
    }

    #[test]
    fn printing() {
        assert_eq!(print_target(&T::lam("x", T::Var(0))), "\\x. x");
        assert_eq!(print_target(&T::succ(T::Zero)), "succ zero");
        let k = T::lam("x", T::lam("y", T::Var(1)));
        assert_eq!(print_target(&k), "\\x y. x");
        let app = T::app(T::lam("x", T::Var(0)), T::succ(T::Zero));
        assert_eq!(print_target(&app), "(\\x. x) (succ zero)");
        let nr = T::NatRec(Rc::new(T::Zero), Rc::new(T::lam("_", T::lam("r", T::succ(T::Var(0))))), Rc::new(numeral(2)));
        assert_eq!(print_target(&nr), "natrec zero (\\x r. succ r) (succ (succ zero))");
    }

    #[test]
    fn substitution_adjusts_indices() {
        // (\y. x y)[x := z] under one outer binder z
        let body = T::lam("y", T::app(T::Var(1), T::Var(0)));
        let r = instantiate(&body, &T::Var(0));
        assert_eq!(r, T::lam("y", T::app(T::Var(1), T::Var(0))));
        assert!(mentions(&body, 0));
        assert!(!mentions(&T::lam("y", T::Var(0)), 0));
    }
}

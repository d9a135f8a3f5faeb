//! Fueled normal-order evaluator for target terms.

use std::rc::Rc;

use thiserror::Error;

use super::target::{instantiate, print_target, TargetTerm};

use TargetTerm as T;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("out of fuel; next redex: {}", print_target(.redex))]
    FuelExhausted { redex: TargetTerm },
    #[error("stuck term: {}", print_target(.term))]
    Stuck { term: TargetTerm },
}

/// Fuel budget. `None` is unbounded.
struct Fuel(Option<u64>);

impl Fuel {
    fn spend(&mut self, redex: &TargetTerm) -> Result<(), EvalError> {
        match &mut self.0 {
            None => Ok(()),
            Some(0) => Err(EvalError::FuelExhausted { redex: redex.clone() }),
            Some(n) => {
                *n -= 1;
                Ok(())
            }
        }
    }
}

/// Normalizes `t`, charging one unit of fuel per rewrite.
pub fn eval_target(t: &TargetTerm, fuel: Option<u64>) -> Result<TargetTerm, EvalError> {
    let mut fuel = Fuel(fuel);
    normalize(t, &mut fuel)
}

/// Like [`eval_target`] but also reports the number of rewrites performed.
pub fn eval_target_counted(t: &TargetTerm, fuel: Option<u64>) -> Result<(TargetTerm, u64), EvalError> {
    let mut f = Fuel(Some(fuel.unwrap_or(u64::MAX)));
    let start = f.0.unwrap();
    let nf = normalize(t, &mut f)?;
    Ok((nf, start - f.0.unwrap()))
}

fn stuck(term: &TargetTerm) -> EvalError {
    EvalError::Stuck { term: term.clone() }
}

fn is_neutral(t: &TargetTerm) -> bool {
    match t {
        T::Var(_) => true,
        T::App(f, _) | T::Fst(f) | T::Snd(f) => is_neutral(f),
        T::NatRec(_, _, n) | T::If(n, _, _) => is_neutral(n),
        _ => false,
    }
}

fn whnf(t: &TargetTerm, fuel: &mut Fuel) -> Result<TargetTerm, EvalError> {
    let mut cur = t.clone();
    loop {
        let next = match &cur {
            T::App(f, a) => {
                let f = whnf(f, fuel)?;
                match &f {
                    T::Lam(_, body) => {
                        let redex = T::App(Rc::new(f.clone()), a.clone());
                        fuel.spend(&redex)?;
                        instantiate(body, a)
                    }
                    _ if is_neutral(&f) => return Ok(T::App(Rc::new(f), a.clone())),
                    _ => return Err(stuck(&T::App(Rc::new(f), a.clone()))),
                }
            }
            T::Fst(p) | T::Snd(p) => {
                let first = matches!(cur, T::Fst(_));
                let p = whnf(p, fuel)?;
                let rebuild = |p: TargetTerm| if first { T::Fst(Rc::new(p)) } else { T::Snd(Rc::new(p)) };
                match &p {
                    T::Pair(a, b) => {
                        fuel.spend(&rebuild(p.clone()))?;
                        if first { (**a).clone() } else { (**b).clone() }
                    }
                    _ if is_neutral(&p) => return Ok(rebuild(p)),
                    _ => return Err(stuck(&rebuild(p))),
                }
            }
            T::NatRec(z, s, n) => {
                let n = whnf(n, fuel)?;
                let redex = || T::NatRec(z.clone(), s.clone(), Rc::new(n.clone()));
                match &n {
                    T::Zero => {
                        fuel.spend(&redex())?;
                        (**z).clone()
                    }
                    T::Succ(m) => {
                        fuel.spend(&redex())?;
                        let rec = T::NatRec(z.clone(), s.clone(), m.clone());
                        T::App(Rc::new(T::App(s.clone(), m.clone())), Rc::new(rec))
                    }
                    _ if is_neutral(&n) => return Ok(redex()),
                    _ => return Err(stuck(&redex())),
                }
            }
            T::If(c, a, b) => {
                let c = whnf(c, fuel)?;
                let redex = || T::If(Rc::new(c.clone()), a.clone(), b.clone());
                match &c {
                    T::True => {
                        fuel.spend(&redex())?;
                        (**a).clone()
                    }
                    T::False => {
                        fuel.spend(&redex())?;
                        (**b).clone()
                    }
                    _ if is_neutral(&c) => return Ok(redex()),
                    _ => return Err(stuck(&redex())),
                }
            }
            T::Let(_, d, b) => {
                fuel.spend(&cur)?;
                instantiate(b, d)
            }
            _ => return Ok(cur),
        };
        cur = next;
    }
}

fn normalize(t: &TargetTerm, fuel: &mut Fuel) -> Result<TargetTerm, EvalError> {
    // successor chains are walked iteratively so long numerals stay cheap
    let mut layers = 0usize;
    let mut cur = whnf(t, fuel)?;
    while let T::Succ(p) = cur {
        layers += 1;
        cur = whnf(&p, fuel)?;
    }
    let n = |t: &Rc<TargetTerm>, fuel: &mut Fuel| normalize(t, fuel).map(Rc::new);
    let mut out = match &cur {
        T::Var(_) | T::Zero | T::True | T::False => cur.clone(),
        T::Lam(x, b) => T::Lam(x.clone(), n(b, fuel)?),
        T::Pair(a, b) => T::Pair(n(a, fuel)?, n(b, fuel)?),
        T::App(f, a) => T::App(n(f, fuel)?, n(a, fuel)?),
        T::Fst(p) => T::Fst(n(p, fuel)?),
        T::Snd(p) => T::Snd(n(p, fuel)?),
        T::NatRec(z, s, m) => T::NatRec(n(z, fuel)?, n(s, fuel)?, n(m, fuel)?),
        T::If(c, a, b) => T::If(n(c, fuel)?, n(a, fuel)?, n(b, fuel)?),
        T::Succ(_) | T::Let(..) => unreachable!("whnf result"),
    };
    for _ in 0..layers {
        out = T::Succ(Rc::new(out));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::target::{as_numeral, numeral};

    fn plus_step() -> TargetTerm {
        T::lam("_", T::lam("r", T::succ(T::Var(0))))
    }

    #[test]
    fn identity_application() {
        let t = T::app(T::lam("x", T::Var(0)), T::Zero);
        assert_eq!(eval_target(&t, None).unwrap(), T::Zero);
    }

    #[test]
    fn natrec_adds() {
        // hand reduction: natrec 2 s 3 -> s 2 (natrec 2 s 2) -> succ (natrec 2 s 2) -> ... -> succ^3 2
        let t = T::NatRec(Rc::new(numeral(2)), Rc::new(plus_step()), Rc::new(numeral(3)));
        let nf = eval_target(&t, None).unwrap();
        assert_eq!(as_numeral(&nf), Some(5));
    }

    #[test]
    fn projection_of_zero_is_stuck() {
        let err = eval_target(&T::Fst(Rc::new(T::Zero)), None).unwrap_err();
        assert!(matches!(err, EvalError::Stuck { .. }));
    }

    #[test]
    fn fuel_runs_out_on_omega() {
        let w = T::lam("x", T::app(T::Var(0), T::Var(0)));
        let omega = T::app(w.clone(), w);
        let err = eval_target(&omega, Some(100)).unwrap_err();
        assert!(matches!(err, EvalError::FuelExhausted { .. }));
    }

    #[test]
    fn normal_order_skips_divergent_argument() {
        let w = T::lam("x", T::app(T::Var(0), T::Var(0)));
        let omega = T::app(w.clone(), w);
        let k = T::lam("x", T::lam("y", T::Var(1)));
        let t = T::app(T::app(k, T::Zero), omega);
        assert_eq!(eval_target(&t, Some(10)).unwrap(), T::Zero);
    }

    #[test]
    fn primitives_and_lets() {
        let p = T::Pair(Rc::new(T::True), Rc::new(T::Zero));
        assert_eq!(eval_target(&T::Snd(Rc::new(p.clone())), None).unwrap(), T::Zero);
        let i = T::If(Rc::new(T::Fst(Rc::new(p))), Rc::new(numeral(1)), Rc::new(numeral(2)));
        assert_eq!(eval_target(&i, None).unwrap(), numeral(1));
        let l = T::Let(Rc::from("x"), Rc::new(numeral(4)), Rc::new(T::succ(T::Var(0))));
        assert_eq!(eval_target(&l, None).unwrap(), numeral(5));
        let (_, steps) = eval_target_counted(&l, None).unwrap();
        assert_eq!(steps, 1);
    }

    #[test]
    fn reduces_under_binders() {
        let t = T::lam("x", T::app(T::lam("y", T::Var(0)), T::Var(0)));
        assert_eq!(eval_target(&t, None).unwrap(), T::lam("x", T::Var(0)));
    }

    #[test]
    fn open_neutrals_are_kept() {
        let t = T::NatRec(Rc::new(T::Zero), Rc::new(plus_step()), Rc::new(T::Var(0)));
        let nf = eval_target(&t, None).unwrap();
        assert!(matches!(nf, T::NatRec(..)));
    }
}

//! Named, mode-marked rendering of core terms.
//!
//! Erased binders and eliminations carry a `₀` mark: `λ₀ x. t`,
//! `Π₀ (x : A). B`, `(x : A) *₀ B`, `f ₀a`, `(a ,₀ b)`, `fst₀ p`, `let₀`.

use std::rc::Rc;

use super::term::{MaskEntry, Name, Term};
use crate::mode::{Icit, Mode};

const TERM: u8 = 0;
const ARROW: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

/// Renders `t` in a scope whose variables are `names` (outermost first).
pub fn print_term(names: &[Name], t: &Term) -> String {
    let mut p = Printer { names: names.to_vec(), out: String::new() };
    p.term(t, TERM);
    p.out
}

struct Printer {
    names: Vec<Name>,
    out: String,
}

fn mark(mode: Mode) -> &'static str {
    match mode {
        Mode::Zero => "₀",
        Mode::Omega => "",
    }
}

impl Printer {
    fn fresh(&self, name: &Name) -> Name {
        if &**name == "_" {
            return name.clone();
        }
        let mut candidate = name.to_string();
        while self.names.iter().any(|n| **n == *candidate) {
            candidate.push('\'');
        }
        Rc::from(candidate)
    }

    fn with_binder(&mut self, name: &Name, f: impl FnOnce(&mut Printer, &Name)) {
        let x = self.fresh(name);
        self.names.push(x.clone());
        f(self, &x);
        self.names.pop();
    }

    fn var(&mut self, ix: usize) {
        let len = self.names.len();
        if ix < len {
            let name = self.names[len - 1 - ix].clone();
            self.out.push_str(&name);
        } else {
            self.out.push_str(&format!("#{ix}"));
        }
    }

    fn open(&mut self, need: bool) {
        if need {
            self.out.push('(');
        }
    }

    fn close(&mut self, need: bool) {
        if need {
            self.out.push(')');
        }
    }

    fn term(&mut self, t: &Term, prec: u8) {
        match t {
            Term::Var(ix) => self.var(ix.0),
            Term::Lam(..) => {
                self.open(prec > TERM);
                self.lambda(t);
                self.close(prec > TERM);
            }
            Term::Pi(x, icit, mode, a, b) => {
                self.open(prec > TERM);
                if &**x == "_" && *icit == Icit::Expl && !b.mentions(0) {
                    self.term(a, ARROW);
                    self.out.push_str(&format!(" →{} ", mark(*mode)));
                    self.with_binder(x, |p, _| p.term(b, TERM));
                } else {
                    let x2 = self.fresh(x);
                    let (l, r) = if *icit == Icit::Impl { ('{', '}') } else { ('(', ')') };
                    self.out.push_str(&format!("Π{} {l}{x2} : ", mark(*mode)));
                    self.term(a, TERM);
                    self.out.push_str(&format!("{r}. "));
                    self.names.push(x2);
                    self.term(b, TERM);
                    self.names.pop();
                }
                self.close(prec > TERM);
            }
            Term::Sigma(x, mode, a, b) => {
                self.open(prec > ARROW);
                if &**x == "_" && !b.mentions(0) {
                    self.term(a, APP);
                    self.out.push_str(&format!(" *{} ", mark(*mode)));
                    self.with_binder(x, |p, _| p.term(b, ARROW));
                } else {
                    let x2 = self.fresh(x);
                    self.out.push_str(&format!("({x2} : "));
                    self.term(a, TERM);
                    self.out.push_str(&format!(") *{} ", mark(*mode)));
                    self.names.push(x2);
                    self.term(b, ARROW);
                    self.names.pop();
                }
                self.close(prec > ARROW);
            }
            Term::App(icit, mode, f, a) => {
                self.open(prec > APP);
                self.term(f, APP);
                self.out.push(' ');
                match icit {
                    Icit::Impl => {
                        self.out.push('{');
                        self.out.push_str(mark(*mode));
                        self.term(a, TERM);
                        self.out.push('}');
                    }
                    Icit::Expl => {
                        self.out.push_str(mark(*mode));
                        self.term(a, ATOM);
                    }
                }
                self.close(prec > APP);
            }
            Term::Pair(mode, a, b) => {
                self.out.push('(');
                self.term(a, TERM);
                self.out.push_str(&format!(" ,{} ", mark(*mode)));
                self.term(b, TERM);
                self.out.push(')');
            }
            Term::Fst(mode, p) | Term::Snd(mode, p) => {
                self.open(prec > APP);
                let kw = if matches!(t, Term::Fst(..)) { "fst" } else { "snd" };
                self.out.push_str(&format!("{kw}{} ", mark(*mode)));
                self.term(p, ATOM);
                self.close(prec > APP);
            }
            Term::Univ => self.out.push('U'),
            Term::NatTy => self.out.push_str("Nat"),
            Term::BoolTy => self.out.push_str("Bool"),
            Term::Zero => self.out.push_str("zero"),
            Term::True => self.out.push_str("true"),
            Term::False => self.out.push_str("false"),
            Term::Succ(n) => match t.as_numeral() {
                Some(k) => self.out.push_str(&k.to_string()),
                None => {
                    self.open(prec > APP);
                    self.out.push_str("succ ");
                    self.term(n, ATOM);
                    self.close(prec > APP);
                }
            },
            Term::NatElim(p, z, s, n) | Term::BoolElim(p, z, s, n) => {
                self.open(prec > APP);
                let kw = if matches!(t, Term::NatElim(..)) { "natElim" } else { "boolElim" };
                self.out.push_str(kw);
                for arg in [p, z, s, n] {
                    self.out.push(' ');
                    self.term(arg, ATOM);
                }
                self.close(prec > APP);
            }
            Term::Let(x, mode, ty, d, b) => {
                self.open(prec > TERM);
                let x2 = self.fresh(x);
                self.out.push_str(&format!("let{} {x2} : ", mark(*mode)));
                self.term(ty, TERM);
                self.out.push_str(" = ");
                self.term(d, TERM);
                self.out.push_str(" in ");
                self.with_binder(x, |p, _| p.term(b, TERM));
                self.close(prec > TERM);
            }
            Term::Meta(m) => self.out.push_str(&m.to_string()),
            Term::InsertedMeta(m, mask) => {
                let args: Vec<(usize, Mode)> = mask
                    .iter()
                    .enumerate()
                    .filter_map(|(lvl, e)| match e {
                        MaskEntry::Bound(mode) => Some((lvl, *mode)),
                        MaskEntry::Defined => None,
                    })
                    .collect();
                let wrap = prec > APP && !args.is_empty();
                self.open(wrap);
                self.out.push_str(&m.to_string());
                for (lvl, mode) in args {
                    self.out.push(' ');
                    self.out.push_str(mark(mode));
                    self.var(mask.len() - 1 - lvl);
                }
                self.close(wrap);
            }
        }
    }

    fn lambda(&mut self, t: &Term) {
        match t {
            Term::Lam(x, icit, mode, body) => {
                self.with_binder(x, |p, x| {
                    p.out.push_str(&format!("λ{} ", mark(*mode)));
                    match icit {
                        Icit::Impl => p.out.push_str(&format!("{{{x}}}. ")),
                        Icit::Expl => p.out.push_str(&format!("{x}. ")),
                    }
                    p.lambda(body);
                });
            }
            other => self.term(other, TERM),
        }
    }
}

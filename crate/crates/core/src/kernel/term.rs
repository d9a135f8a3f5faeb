use std::rc::Rc;

use serde::Serialize;

use crate::mode::{Icit, Mode};

pub type Name = Rc<str>;

/// De Bruijn index: 0 is the innermost binder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Ix(pub usize);

/// De Bruijn level: 0 is the outermost binder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lvl(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MetaId(pub usize);

impl Lvl {
    pub fn to_ix(self, depth: Lvl) -> Ix {
        Ix(depth.0 - self.0 - 1)
    }

    pub fn next(self) -> Lvl {
        Lvl(self.0 + 1)
    }
}

impl std::fmt::Display for MetaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// One context slot as seen by an inserted metavariable: bound variables are
/// passed to the meta (with their mode), definitions are not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MaskEntry {
    Bound(Mode),
    Defined,
}

/// Core syntax. Eliminations and introductions of Π/Σ carry the mode of the
/// type former they belong to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Term {
    Var(Ix),
    Lam(Name, Icit, Mode, Rc<Term>),
    App(Icit, Mode, Rc<Term>, Rc<Term>),
    Pi(Name, Icit, Mode, Rc<Term>, Rc<Term>),
    Sigma(Name, Mode, Rc<Term>, Rc<Term>),
    Pair(Mode, Rc<Term>, Rc<Term>),
    Fst(Mode, Rc<Term>),
    Snd(Mode, Rc<Term>),
    Univ,
    NatTy,
    Zero,
    Succ(Rc<Term>),
    /// motive, zero case, successor case, scrutinee
    NatElim(Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>),
    BoolTy,
    True,
    False,
    /// motive, true case, false case, scrutinee
    BoolElim(Rc<Term>, Rc<Term>, Rc<Term>, Rc<Term>),
    /// name, mode of the bound variable, type, definition, body
    Let(Name, Mode, Rc<Term>, Rc<Term>, Rc<Term>),
    Meta(MetaId),
    /// A meta applied to every bound variable of the context it was created in.
    InsertedMeta(MetaId, Rc<[MaskEntry]>),
}

impl Term {
    pub fn var(ix: usize) -> Term {
        Term::Var(Ix(ix))
    }

    pub fn lam(name: &str, icit: Icit, mode: Mode, body: Term) -> Term {
        Term::Lam(Rc::from(name), icit, mode, Rc::new(body))
    }

    pub fn app(mode: Mode, f: Term, a: Term) -> Term {
        Term::App(Icit::Expl, mode, Rc::new(f), Rc::new(a))
    }

    pub fn pi(name: &str, icit: Icit, mode: Mode, dom: Term, cod: Term) -> Term {
        Term::Pi(Rc::from(name), icit, mode, Rc::new(dom), Rc::new(cod))
    }

    pub fn arrow(mode: Mode, dom: Term, cod: Term) -> Term {
        Term::pi("_", Icit::Expl, mode, dom, cod)
    }

    pub fn sigma(name: &str, mode: Mode, fst: Term, snd: Term) -> Term {
        Term::Sigma(Rc::from(name), mode, Rc::new(fst), Rc::new(snd))
    }

    pub fn pair(mode: Mode, a: Term, b: Term) -> Term {
        Term::Pair(mode, Rc::new(a), Rc::new(b))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Rc::new(t))
    }

    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |acc, _| Term::succ(acc))
    }

    pub fn nat_elim(motive: Term, z: Term, s: Term, n: Term) -> Term {
        Term::NatElim(Rc::new(motive), Rc::new(z), Rc::new(s), Rc::new(n))
    }

    pub fn bool_elim(motive: Term, t: Term, f: Term, b: Term) -> Term {
        Term::BoolElim(Rc::new(motive), Rc::new(t), Rc::new(f), Rc::new(b))
    }

    pub fn let_(name: &str, mode: Mode, ty: Term, def: Term, body: Term) -> Term {
        Term::Let(Rc::from(name), mode, Rc::new(ty), Rc::new(def), Rc::new(body))
    }

    /// Reads back `succ (... zero)` as a number.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut cur = self;
        loop {
            match cur {
                Term::Zero => return Some(n),
                Term::Succ(t) => {
                    n += 1;
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    /// Whether de Bruijn index `ix` (relative to this term's root) occurs free.
    pub fn mentions(&self, ix: usize) -> bool {
        match self {
            Term::Var(Ix(i)) => *i == ix,
            Term::Lam(_, _, _, b) => b.mentions(ix + 1),
            Term::App(_, _, f, a) => f.mentions(ix) || a.mentions(ix),
            Term::Pi(_, _, _, a, b) | Term::Sigma(_, _, a, b) => a.mentions(ix) || b.mentions(ix + 1),
            Term::Pair(_, a, b) => a.mentions(ix) || b.mentions(ix),
            Term::Fst(_, t) | Term::Snd(_, t) | Term::Succ(t) => t.mentions(ix),
            Term::NatElim(p, z, s, n) | Term::BoolElim(p, z, s, n) => {
                p.mentions(ix) || z.mentions(ix) || s.mentions(ix) || n.mentions(ix)
            }
            Term::Let(_, _, t, d, b) => t.mentions(ix) || d.mentions(ix) || b.mentions(ix + 1),
            Term::InsertedMeta(_, mask) => {
                // mask is ordered by level; index `ix` is slot `len - 1 - ix`
                ix < mask.len() && matches!(mask[mask.len() - 1 - ix], MaskEntry::Bound(_))
            }
            Term::Univ
            | Term::NatTy
            | Term::Zero
            | Term::BoolTy
            | Term::True
            | Term::False
            | Term::Meta(_) => false,
        }
    }

    /// Whether any metavariable occurs in the term.
    pub fn has_metas(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if matches!(t, Term::Meta(_) | Term::InsertedMeta(..)) {
                found = true;
            }
        });
        found
    }

    /// Pre-order traversal of every subterm.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Lam(_, _, _, b) | Term::Fst(_, b) | Term::Snd(_, b) | Term::Succ(b) => b.visit(f),
            Term::App(_, _, a, b) | Term::Pi(_, _, _, a, b) | Term::Sigma(_, _, a, b) | Term::Pair(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::NatElim(p, z, s, n) | Term::BoolElim(p, z, s, n) => {
                p.visit(f);
                z.visit(f);
                s.visit(f);
                n.visit(f);
            }
            Term::Let(_, _, t, d, b) => {
                t.visit(f);
                d.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }
}

use std::rc::Rc;

use super::term::{Lvl, MetaId, Name, Term};
use crate::mode::{Icit, Mode};

/// Persistent environment of values, innermost binder first.
#[derive(Clone, Debug, Default)]
pub struct Env {
    head: Option<Rc<EnvCell>>,
    len: usize,
}

#[derive(Debug)]
struct EnvCell {
    value: Value,
    tail: Env,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn extend(&self, value: Value) -> Env {
        Env {
            head: Some(Rc::new(EnvCell {
                value,
                tail: self.clone(),
            })),
            len: self.len + 1,
        }
    }

    /// Value bound at de Bruijn index `ix`.
    pub fn get(&self, ix: usize) -> Option<&Value> {
        let mut cur = self.head.as_ref()?;
        for _ in 0..ix {
            cur = cur.tail.head.as_ref()?;
        }
        Some(&cur.value)
    }

    /// Values in level order (outermost first).
    pub fn to_vec(&self) -> Vec<Value> {
        let mut out = Vec::with_capacity(self.len);
        let mut cur = self.head.as_ref();
        while let Some(cell) = cur {
            out.push(cell.value.clone());
            cur = cell.tail.head.as_ref();
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub env: Env,
    pub body: Rc<Term>,
}

impl Closure {
    pub fn new(env: Env, body: Rc<Term>) -> Closure {
        Closure { env, body }
    }
}

/// Eliminations stuck on a neutral head.
#[derive(Clone, Debug)]
pub enum Elim {
    App(Icit, Mode, Value),
    Fst(Mode),
    Snd(Mode),
    /// motive, zero case, successor case
    NatElim(Value, Value, Value),
    /// motive, true case, false case
    BoolElim(Value, Value, Value),
}

pub type Spine = Rc<Vec<Elim>>;

/// Semantic domain for normalization by evaluation.
#[derive(Clone, Debug)]
pub enum Value {
    /// Bound variable applied to a spine.
    Rigid(Lvl, Spine),
    /// Metavariable applied to a spine.
    Flex(MetaId, Spine),
    Lam(Name, Icit, Mode, Closure),
    Pi(Name, Icit, Mode, Rc<Value>, Closure),
    Sigma(Name, Mode, Rc<Value>, Closure),
    Pair(Mode, Rc<Value>, Rc<Value>),
    Univ,
    NatTy,
    Zero,
    Succ(Rc<Value>),
    BoolTy,
    True,
    False,
}

impl Value {
    pub fn var(lvl: Lvl) -> Value {
        Value::Rigid(lvl, Rc::new(Vec::new()))
    }

    pub fn meta(m: MetaId) -> Value {
        Value::Flex(m, Rc::new(Vec::new()))
    }

    /// `n` in unary.
    pub fn numeral(n: u64) -> Value {
        (0..n).fold(Value::Zero, |acc, _| Value::Succ(Rc::new(acc)))
    }
}

pub(crate) fn push_elim(spine: &Spine, elim: Elim) -> Spine {
    let mut v = Vec::with_capacity(spine.len() + 1);
    v.extend(spine.iter().cloned());
    v.push(elim);
    Rc::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_lookup_by_index() {
        let env = Env::new().extend(Value::Zero).extend(Value::True);
        assert_eq!(env.len(), 2);
        assert!(matches!(env.get(0), Some(Value::True)));
        assert!(matches!(env.get(1), Some(Value::Zero)));
        assert!(env.get(2).is_none());
        assert!(matches!(env.to_vec()[0], Value::Zero));
    }
}

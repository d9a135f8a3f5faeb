use super::metas::MetaStore;
use super::nbe::{eval, quote};
use super::term::{Ix, Lvl, MaskEntry, Name, Term};
use super::value::{Env, Value};
use crate::mode::Mode;

/// One variable in scope.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: Name,
    pub mode: Mode,
    pub ty: Value,
    /// Definition of a `let`-bound or top-level entry, as a term at the depth
    /// where it was bound.
    pub def: Option<Term>,
    /// Binders inserted by elaboration are not visible to name lookup.
    pub hidden: bool,
}

/// A typing context: entries in level order, their values, and the erasure
/// marker (`true` when `#` is present).
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub env: Env,
    pub entries: Vec<Entry>,
    pub erased: bool,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn depth(&self) -> Lvl {
        Lvl(self.entries.len())
    }

    /// Extends with a fresh bound variable.
    pub fn bind(&self, name: Name, mode: Mode, ty: Value) -> Context {
        let mut entries = self.entries.clone();
        let env = self.env.extend(Value::var(self.depth()));
        entries.push(Entry { name, mode, ty, def: None, hidden: false });
        Context { env, entries, erased: self.erased }
    }

    /// Extends with a definition whose value is already known.
    pub fn define(&self, name: Name, mode: Mode, ty: Value, def: Term, value: Value) -> Context {
        let mut entries = self.entries.clone();
        let env = self.env.extend(value);
        entries.push(Entry { name, mode, ty, def: Some(def), hidden: false });
        Context { env, entries, erased: self.erased }
    }

    /// Extends with a bound variable that source names cannot refer to.
    pub fn bind_hidden(&self, name: Name, mode: Mode, ty: Value) -> Context {
        let mut ctx = self.bind(name, mode, ty);
        if let Some(last) = ctx.entries.last_mut() {
            last.hidden = true;
        }
        ctx
    }

    pub fn with_erased(&self, erased: bool) -> Context {
        Context { erased, ..self.clone() }
    }

    /// The context with `#` added.
    pub fn erase(&self) -> Context {
        self.with_erased(true)
    }

    pub fn lookup(&self, ix: Ix) -> Option<&Entry> {
        let len = self.entries.len();
        if ix.0 < len {
            Some(&self.entries[len - 1 - ix.0])
        } else {
            None
        }
    }

    /// Entry by name, innermost first.
    pub fn lookup_name(&self, name: &str) -> Option<(Ix, &Entry)> {
        self.entries
            .iter()
            .rev()
            .enumerate()
            .find(|(_, e)| !e.hidden && &*e.name == name)
            .map(|(i, e)| (Ix(i), e))
    }

    /// Which entries an inserted meta is applied to.
    pub fn mask(&self) -> Vec<MaskEntry> {
        self.entries
            .iter()
            .map(|e| match e.def {
                Some(_) => MaskEntry::Defined,
                None => MaskEntry::Bound(e.mode),
            })
            .collect()
    }

    pub fn names(&self) -> Vec<Name> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn eval(&self, metas: &MetaStore, t: &Term) -> Value {
        eval(metas, &self.env, t)
    }

    pub fn quote(&self, metas: &MetaStore, v: &Value) -> Term {
        quote(metas, self.depth(), v)
    }

    /// Rebuilds a context from entries, binding every undefined entry to a
    /// fresh variable and re-evaluating definitions.
    pub fn from_entries(metas: &MetaStore, entries: Vec<Entry>, erased: bool) -> Context {
        let mut env = Env::new();
        for (lvl, e) in entries.iter().enumerate() {
            let v = match &e.def {
                Some(d) => eval(metas, &env, d),
                None => Value::var(Lvl(lvl)),
            };
            env = env.extend(v);
        }
        Context { env, entries, erased }
    }
}

use super::term::{MetaId, Name, Term};
use super::value::Value;
use crate::mode::Mode;
use crate::span::SourceSpan;

/// A context slot as captured by a metavariable at creation time.
#[derive(Clone, Debug)]
pub struct CapturedEntry {
    pub name: Name,
    pub mode: Mode,
    pub ty: Term,
    pub def: Option<Term>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Closed term: a lambda over the bound slots of the captured context.
    pub term: Term,
    pub value: Value,
}

#[derive(Clone, Debug)]
pub struct MetaEntry {
    pub id: MetaId,
    pub captured: Vec<CapturedEntry>,
    /// Whether the erasure marker was present where the meta was created.
    pub erased: bool,
    /// Type of the meta, in the captured context.
    pub ty: Term,
    /// The same type closed over the captured context: bound slots become Π
    /// binders with their modes, definitions become `let`s.
    pub closed_ty: Term,
    pub solution: Option<Solution>,
    pub span: Option<SourceSpan>,
}

/// Session-local store of metavariables. Ids are allocated sequentially.
#[derive(Clone, Debug, Default)]
pub struct MetaStore {
    entries: Vec<MetaEntry>,
}

impl MetaStore {
    pub fn new() -> MetaStore {
        MetaStore::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn next_id(&self) -> MetaId {
        MetaId(self.entries.len())
    }

    pub(crate) fn push(&mut self, entry: MetaEntry) -> MetaId {
        debug_assert_eq!(entry.id, self.next_id());
        let id = entry.id;
        self.entries.push(entry);
        id
    }

    pub fn get(&self, id: MetaId) -> &MetaEntry {
        &self.entries[id.0]
    }

    pub fn solution(&self, id: MetaId) -> Option<&Value> {
        self.entries
            .get(id.0)
            .and_then(|e| e.solution.as_ref())
            .map(|s| &s.value)
    }

    pub(crate) fn commit(&mut self, id: MetaId, solution: Solution) {
        let entry = &mut self.entries[id.0];
        assert!(entry.solution.is_none(), "meta {id} solved twice");
        entry.solution = Some(solution);
    }

    pub fn iter(&self) -> impl Iterator<Item = &MetaEntry> {
        self.entries.iter()
    }

    /// Metas allocated at or after `from` that are still unsolved.
    pub fn unsolved_since(&self, from: MetaId) -> impl Iterator<Item = &MetaEntry> {
        self.entries[from.0..]
            .iter()
            .filter(|e| e.solution.is_none())
    }
}

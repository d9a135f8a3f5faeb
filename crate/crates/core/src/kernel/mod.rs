//! Core syntax, normalization by evaluation, conversion and the kernel
//! typechecker.

mod check;
mod context;
mod conv;
mod metas;
mod nbe;
mod print;
mod term;
mod value;
mod zonk;

pub use check::{audit_modes, check, check_type, infer, motive_type, nat_step_type, KernelError, ModeLeak};
pub use context::{Context, Entry};
pub use conv::conv;
pub use metas::{CapturedEntry, MetaEntry, MetaStore, Solution};
pub use nbe::{apply, apply_spine, bool_elim, eval, force, fst, nat_elim, normalize, quote, rigid_env, snd};
pub use print::print_term;
pub use term::{Ix, Lvl, MaskEntry, MetaId, Name, Term};
pub use value::{Closure, Elim, Env, Spine, Value};
pub use zonk::{metas_in, value_is_solved, zonk};

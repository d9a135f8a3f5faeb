pub mod diagnostics;
pub mod elab;
pub mod extract;
pub mod kernel;
pub mod mode;
pub mod span;
pub mod surface;
pub mod translate;
pub mod unify;

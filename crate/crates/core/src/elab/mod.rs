//! Elaboration of surface modules into kernel-checked core terms.

mod error;
mod infer;

use std::rc::Rc;

pub use error::{ElabError, ElabErrorKind};
pub use infer::{returns_universe, Elaborator};

use crate::kernel::{
    check as kernel_check, check_type as kernel_check_type, infer as kernel_infer, print_term, zonk, Context, MetaId,
    MetaStore, Name, Term, Value,
};
use crate::mode::Mode;
use crate::span::SourceSpan;
use crate::surface::{parse_expr_source, Expr, Module};

/// An elaborated top-level declaration.
#[derive(Clone, Debug)]
pub struct ElabDecl {
    pub name: Name,
    pub span: SourceSpan,
    /// Mode 0 for declarations whose type ends in `U`, ω otherwise.
    pub mode: Mode,
    /// Zonked type and body, at the depth of the declaration.
    pub ty: Term,
    pub body: Term,
    pub ty_value: Value,
    pub value: Value,
    pub level: usize,
}

/// The elaborated `main` expression.
#[derive(Clone, Debug)]
pub struct ElabMain {
    pub span: SourceSpan,
    pub term: Term,
    pub ty: Term,
    pub ty_value: Value,
}

/// Result of elaborating a module: everything that succeeded plus the
/// errors, in source order.
#[derive(Clone, Debug)]
pub struct Elaboration {
    pub decls: Vec<ElabDecl>,
    pub main: Option<ElabMain>,
    /// Top-level context after the last declaration.
    pub ctx: Context,
    pub metas: MetaStore,
    pub errors: Vec<ElabError>,
    poisoned: Vec<Name>,
}

impl Elaboration {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn decl(&self, name: &str) -> Option<&ElabDecl> {
        self.decls.iter().find(|d| &*d.name == name)
    }

    /// Wraps `t`, a term at the depth of the declaration at `level` (or the
    /// full module when `level` is the number of declarations), in `let`s for
    /// every earlier declaration. `None` if an earlier declaration failed.
    pub fn close_at(&self, level: usize, t: &Term) -> Option<Term> {
        let entries = &self.ctx.entries[..level];
        let mut out = t.clone();
        for (lvl, e) in entries.iter().enumerate().rev() {
            let def = e.def.clone()?;
            let ty = crate::kernel::quote(&self.metas, crate::kernel::Lvl(lvl), &e.ty);
            out = Term::Let(e.name.clone(), e.mode, Rc::new(ty), Rc::new(def), Rc::new(out));
        }
        Some(out)
    }

    /// The closed body of a declaration.
    pub fn closed_body(&self, name: &str) -> Option<Term> {
        let d = self.decl(name)?;
        self.close_at(d.level, &d.body)
    }

    /// The closed type of a declaration.
    pub fn closed_type(&self, name: &str) -> Option<Term> {
        let d = self.decl(name)?;
        self.close_at(d.level, &d.ty)
    }

    pub fn closed_main(&self) -> Option<Term> {
        let m = self.main.as_ref()?;
        self.close_at(self.ctx.entries.len(), &m.term)
    }

    /// Elaborates an extra expression in the scope of the whole module,
    /// outside the erasure marker.
    pub fn elab_expr(&mut self, file: &str, src: &str) -> Result<(Term, Value), Vec<ElabError>> {
        let e = parse_expr_source(file, src).map_err(|s| {
            vec![ElabError::new(s.span().clone(), ElabErrorKind::Syntax(s))]
        })?;
        self.elab_expr_ast(&e)
    }

    pub fn elab_expr_ast(&mut self, e: &Expr) -> Result<(Term, Value), Vec<ElabError>> {
        let start = self.metas.next_id();
        let ctx = self.ctx.clone();
        let mut el = Elaborator { metas: &mut self.metas, poisoned: &self.poisoned };
        let (t, ty) = el.infer(&ctx, e).map_err(|e| vec![e])?;
        let (t, ty) = el.insert(&ctx, &e.span, t, ty);
        let unsolved = unsolved_errors(&self.metas, start);
        if !unsolved.is_empty() {
            return Err(unsolved);
        }
        let depth = ctx.entries.len();
        let t = zonk(&self.metas, depth, &t);
        if let Err(error) = kernel_infer(&self.metas, &ctx, &t) {
            return Err(vec![ElabError::new(e.span.clone(), ElabErrorKind::Kernel { name: Rc::from("expression"), error })]);
        }
        Ok((t, ty))
    }
}

fn unsolved_errors(metas: &MetaStore, start: MetaId) -> Vec<ElabError> {
    metas
        .unsolved_since(start)
        .map(|entry| {
            let mut names: Vec<Name> = Vec::new();
            let mut context = Vec::new();
            for c in &entry.captured {
                let mark = if c.mode == Mode::Zero { ":0" } else { ":" };
                context.push(format!("{} {mark} {}", c.name, print_term(&names, &c.ty)));
                names.push(c.name.clone());
            }
            if entry.erased {
                context.push("#".to_string());
            }
            let ty = print_term(&names, &entry.ty);
            ElabError::new(
                entry.span.clone().unwrap_or_else(SourceSpan::dummy),
                ElabErrorKind::Unsolved { meta: entry.id, ty, context },
            )
        })
        .collect()
}

/// Elaborates every declaration in order, then `main`. A declaration that
/// fails is reported and later declarations still run; they see the failed
/// name as an opaque constant (or not at all, if its type failed).
pub fn elaborate_module(module: &Module) -> Elaboration {
    let mut out = Elaboration {
        decls: Vec::new(),
        main: None,
        ctx: Context::new(),
        metas: MetaStore::new(),
        errors: Vec::new(),
        poisoned: Vec::new(),
    };
    for decl in &module.decls {
        if out.ctx.lookup_name(&decl.name).is_some() || out.poisoned.contains(&decl.name) {
            out.errors
                .push(ElabError::new(decl.name_span.clone(), ElabErrorKind::Duplicate(decl.name.clone())));
            continue;
        }
        let start = out.metas.next_id();
        let ctx = out.ctx.clone();
        let mut el = Elaborator { metas: &mut out.metas, poisoned: &out.poisoned };
        let ty = match el.check_type(&ctx, &decl.ty) {
            Ok(ty) => ty,
            Err(e) => {
                out.errors.push(e);
                out.poisoned.push(decl.name.clone());
                continue;
            }
        };
        let ty_v = ctx.eval(el.metas, &ty);
        let mode = if returns_universe(el.metas, ctx.entries.len(), &ty_v) { Mode::Zero } else { Mode::Omega };
        let body_ctx = if mode == Mode::Zero { ctx.erase() } else { ctx.clone() };
        let body = match el.check(&body_ctx, &decl.body, &ty_v) {
            Ok(b) => b,
            Err(e) => {
                out.errors.push(e);
                out.ctx = ctx.bind(decl.name.clone(), mode, ty_v);
                continue;
            }
        };
        let unsolved = unsolved_errors(&out.metas, start);
        if !unsolved.is_empty() {
            out.errors.extend(unsolved);
            out.ctx = ctx.bind(decl.name.clone(), mode, ty_v);
            continue;
        }
        let depth = ctx.entries.len();
        let ty = zonk(&out.metas, depth, &ty);
        let body = zonk(&out.metas, depth, &body);
        let ty_v = ctx.eval(&out.metas, &ty);
        let recheck = kernel_check_type(&out.metas, &ctx, &ty)
            .and_then(|_| kernel_check(&out.metas, &body_ctx, &body, &ty_v));
        if let Err(error) = recheck {
            out.errors.push(ElabError::new(
                decl.name_span.clone(),
                ElabErrorKind::Kernel { name: decl.name.clone(), error },
            ));
            out.ctx = ctx.bind(decl.name.clone(), mode, ty_v);
            continue;
        }
        let value = ctx.eval(&out.metas, &body);
        out.ctx = ctx.define(decl.name.clone(), mode, ty_v.clone(), body.clone(), value.clone());
        out.decls.push(ElabDecl {
            name: decl.name.clone(),
            span: decl.name_span.clone(),
            mode,
            ty,
            body,
            ty_value: ty_v,
            value,
            level: depth,
        });
    }
    if let Some(main) = &module.main {
        match out.elab_expr_ast(main) {
            Ok((term, ty_value)) => {
                let ty = out.ctx.quote(&out.metas, &ty_value);
                out.main = Some(ElabMain { span: main.span.clone(), term, ty, ty_value });
            }
            Err(errs) => out.errors.extend(errs),
        }
    }
    out
}

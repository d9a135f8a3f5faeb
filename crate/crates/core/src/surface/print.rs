use std::fmt::Write;

use super::syntax::{Expr, ExprKind, LamBinder, Module};
use crate::mode::{Icit, Mode};

// precedence levels, loosest first
const TERM: u8 = 0;
const SIGMA: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

pub fn print_module(m: &Module) -> String {
    let mut out = String::new();
    for d in &m.decls {
        let _ = writeln!(out, "let {} : {} = {};", d.name, print_expr(&d.ty), print_expr(&d.body));
    }
    if let Some(main) = &m.main {
        let _ = writeln!(out, "main = {};", print_expr(main));
    }
    out
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    go(&mut out, e, TERM);
    out
}

fn colon(mode: Mode) -> &'static str {
    match mode {
        Mode::Zero => ":0",
        Mode::Omega => ":",
    }
}

fn binder(out: &mut String, b: &LamBinder) {
    match (b.icit, &b.ann) {
        (Icit::Expl, None) => out.push_str(&b.name),
        (Icit::Impl, None) => {
            let _ = write!(out, "{{{}}}", b.name);
        }
        (icit, Some(ann)) => {
            let (open, close) = if icit == Icit::Impl { ('{', '}') } else { ('(', ')') };
            let mode = b.mode.unwrap_or(Mode::Omega);
            let _ = write!(out, "{open}{} {} ", b.name, colon(mode));
            go(out, ann, TERM);
            out.push(close);
        }
    }
}

fn go(out: &mut String, e: &Expr, prec: u8) {
    let level = match &e.kind {
        ExprKind::Lam(..) | ExprKind::Let(..) | ExprKind::Pi(..) => TERM,
        ExprKind::Sigma(..) => SIGMA,
        ExprKind::App(..)
        | ExprKind::Succ(_)
        | ExprKind::Fst(_)
        | ExprKind::Snd(_)
        | ExprKind::NatElim(..)
        | ExprKind::BoolElim(..) => APP,
        _ => ATOM,
    };
    let parens = level < prec;
    if parens {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Var(x) => out.push_str(x),
        ExprKind::Lam(..) => {
            out.push('\\');
            let mut cur = e;
            let mut first = true;
            while let ExprKind::Lam(b, body) = &cur.kind {
                if !first {
                    out.push(' ');
                }
                first = false;
                binder(out, b);
                cur = body;
            }
            out.push_str(". ");
            go(out, cur, TERM);
        }
        ExprKind::App(f, a, icit) => {
            go(out, f, APP);
            out.push(' ');
            match icit {
                Icit::Expl => go(out, a, ATOM),
                Icit::Impl => {
                    out.push('{');
                    go(out, a, TERM);
                    out.push('}');
                }
            }
        }
        ExprKind::Pi(x, mode, icit, dom, cod) => {
            if &**x == "_" && *mode == Mode::Omega && *icit == Icit::Expl {
                go(out, dom, SIGMA);
            } else {
                let (open, close) = if *icit == Icit::Impl { ('{', '}') } else { ('(', ')') };
                let _ = write!(out, "{open}{x} {} ", colon(*mode));
                go(out, dom, TERM);
                out.push(close);
            }
            out.push_str(" -> ");
            go(out, cod, TERM);
        }
        ExprKind::Sigma(x, mode, fst, snd) => {
            if &**x == "_" && *mode == Mode::Omega {
                go(out, fst, APP);
            } else {
                let _ = write!(out, "({x} {} ", colon(*mode));
                go(out, fst, TERM);
                out.push(')');
            }
            out.push_str(" * ");
            go(out, snd, SIGMA);
        }
        ExprKind::Pair(a, b) => {
            out.push('(');
            go(out, a, TERM);
            out.push_str(", ");
            go(out, b, TERM);
            out.push(')');
        }
        ExprKind::Fst(p) => keyword(out, "fst", &[p]),
        ExprKind::Snd(p) => keyword(out, "snd", &[p]),
        ExprKind::Succ(n) => keyword(out, "succ", &[n]),
        ExprKind::NatElim(p, z, s, n) => keyword(out, "natElim", &[p, z, s, n]),
        ExprKind::BoolElim(p, t, f, b) => keyword(out, "boolElim", &[p, t, f, b]),
        ExprKind::Let(x, ty, def, body) => {
            let _ = write!(out, "let {x} : ");
            go(out, ty, TERM);
            out.push_str(" = ");
            go(out, def, TERM);
            out.push_str(" in ");
            go(out, body, TERM);
        }
        ExprKind::Univ => out.push('U'),
        ExprKind::NatTy => out.push_str("Nat"),
        ExprKind::NumLit(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Zero => out.push_str("zero"),
        ExprKind::BoolTy => out.push_str("Bool"),
        ExprKind::True => out.push_str("true"),
        ExprKind::False => out.push_str("false"),
        ExprKind::Hole => out.push('_'),
    }
    if parens {
        out.push(')');
    }
}

fn keyword(out: &mut String, kw: &str, args: &[&Expr]) {
    out.push_str(kw);
    for a in args {
        out.push(' ');
        go(out, a, ATOM);
    }
}

//! Subcommand implementations. Each returns the process exit code.

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::Path;

use serde_json::{json, Value as Json};
use tt0_core::diagnostics::Diagnostic;
use tt0_core::elab::{elaborate_module, ElabError, ElabErrorKind, Elaboration};
use tt0_core::extract::{as_numeral, eval_target, extract_closed, print_target, EvalError, TargetTerm};
use tt0_core::kernel::{normalize, print_term, Env, Name, Term};
use tt0_core::mode::Mode;
use tt0_core::surface::parse_source;
use tt0_core::translate::sweep;

/// `println!` that exits quietly when stdout has been closed.
macro_rules! say {
    ($($arg:tt)*) => {
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

pub const OK: u8 = 0;
pub const DIAGNOSTICS: u8 = 1;
pub const USAGE: u8 = 2;
pub const OUT_OF_FUEL: u8 = 3;

pub struct Options {
    json: bool,
    color: bool,
}

impl Options {
    pub fn new(json: bool, no_color: bool) -> Options {
        Options { json, color: !no_color && std::io::stderr().is_terminal() }
    }

    fn report(&self, diagnostics: &[Diagnostic]) {
        if self.json {
            eprintln!("{}", json!({ "version": 1, "diagnostics": diagnostics }));
            return;
        }
        for d in diagnostics {
            let text = d.to_string();
            if self.color {
                eprintln!("{}", text.replacen(": error: ", ": \x1b[1;31merror:\x1b[0m ", 1));
            } else {
                eprintln!("{text}");
            }
        }
    }

    fn emit(&self, value: Json) {
        let mut value = value;
        value["version"] = json!(1);
        say!("{value}");
    }
}

/// Reads, parses and elaborates a file. Errors are reported and turned into
/// an exit code.
fn load(opts: &Options, path: &Path) -> Result<Elaboration, u8> {
    let source = fs::read_to_string(path).map_err(|e| {
        eprintln!("tt0: cannot read {}: {e}", path.display());
        USAGE
    })?;
    let file = path.display().to_string();
    let module = parse_source(&file, &source).map_err(|e| {
        let err = ElabError::new(e.span().clone(), ElabErrorKind::Syntax(e));
        opts.report(&[err.to_diagnostic()]);
        DIAGNOSTICS
    })?;
    Ok(elaborate_module(&module))
}

/// Like [`load`] but any elaboration error aborts.
fn load_checked(opts: &Options, path: &Path) -> Result<Elaboration, u8> {
    let el = load(opts, path)?;
    if !el.is_ok() {
        opts.report(&el.errors.iter().map(ElabError::to_diagnostic).collect::<Vec<_>>());
        return Err(DIAGNOSTICS);
    }
    Ok(el)
}

fn names_at(el: &Elaboration, level: usize) -> Vec<Name> {
    el.ctx.names()[..level].to_vec()
}

/// The declaration a subcommand operates on: its context level and term,
/// or `main` when no name is given.
fn select<'a>(el: &'a Elaboration, def: Option<&str>) -> Result<(usize, &'a Term), u8> {
    match def {
        Some(name) => match el.decl(name) {
            Some(d) => Ok((d.level, &d.body)),
            None => {
                eprintln!("tt0: no declaration named `{name}`");
                Err(USAGE)
            }
        },
        None => match &el.main {
            Some(m) => Ok((el.ctx.entries.len(), &m.term)),
            None => {
                eprintln!("tt0: the file has no `main`; pass --def NAME");
                Err(USAGE)
            }
        },
    }
}

fn mode_colon(mode: Mode) -> &'static str {
    match mode {
        Mode::Zero => ":0",
        Mode::Omega => ":",
    }
}

pub fn check(opts: &Options, path: &Path) -> u8 {
    let el = match load(opts, path) {
        Ok(el) => el,
        Err(code) => return code,
    };
    let mut rows = Vec::new();
    for d in &el.decls {
        if el.errors.iter().any(|e| matches!(&e.kind, ElabErrorKind::Kernel { name, .. } if *name == d.name)) {
            continue;
        }
        rows.push((d.name.to_string(), print_term(&names_at(&el, d.level), &d.ty)));
    }
    if let Some(m) = &el.main {
        rows.push(("main".to_string(), print_term(&el.ctx.names(), &m.ty)));
    }
    if el.is_ok() {
        if opts.json {
            let decls: Vec<Json> = rows.iter().map(|(n, t)| json!({ "name": n, "type": t })).collect();
            opts.emit(json!({ "ok": true, "decls": decls }));
        } else {
            for (name, ty) in &rows {
                say!("ok {name} : {ty}");
            }
        }
        OK
    } else {
        opts.report(&el.errors.iter().map(ElabError::to_diagnostic).collect::<Vec<_>>());
        DIAGNOSTICS
    }
}

pub fn elab(opts: &Options, path: &Path) -> u8 {
    let el = match load_checked(opts, path) {
        Ok(el) => el,
        Err(code) => return code,
    };
    if opts.json {
        let decls: Vec<Json> = el
            .decls
            .iter()
            .map(|d| {
                json!({
                    "name": &*d.name,
                    "mode": d.mode.as_str(),
                    "type": d.ty,
                    "body": d.body,
                })
            })
            .collect();
        let main = el.main.as_ref().map(|m| json!({ "type": m.ty, "body": m.term }));
        opts.emit(json!({ "decls": decls, "main": main }));
        return OK;
    }
    for d in &el.decls {
        let names = names_at(&el, d.level);
        say!(
            "let {} {} {} = {};",
            d.name,
            mode_colon(d.mode),
            print_term(&names, &d.ty),
            print_term(&names, &d.body)
        );
    }
    if let Some(m) = &el.main {
        let names = el.ctx.names();
        say!("main = {} : {};", print_term(&names, &m.term), print_term(&names, &m.ty));
    }
    OK
}

pub fn nf(opts: &Options, path: &Path, def: Option<&str>) -> u8 {
    let el = match load_checked(opts, path) {
        Ok(el) => el,
        Err(code) => return code,
    };
    let (level, term) = match select(&el, def) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let Some(closed) = el.close_at(level, term) else {
        eprintln!("tt0: an earlier declaration has no definition");
        return DIAGNOSTICS;
    };
    let nf = normalize(&el.metas, &Env::new(), &closed);
    if opts.json {
        opts.emit(json!({ "name": def.unwrap_or("main"), "normal_form": nf, "text": print_term(&[], &nf) }));
    } else {
        say!("{}", print_term(&[], &nf));
    }
    OK
}

fn extracted(el: &Elaboration, def: Option<&str>) -> Result<TargetTerm, u8> {
    let (level, term) = select(el, def)?;
    extract_closed(el, level, term).map_err(|e| {
        eprintln!("tt0: {e}");
        DIAGNOSTICS
    })
}

pub fn extract(opts: &Options, path: &Path, def: Option<&str>) -> u8 {
    let el = match load_checked(opts, path) {
        Ok(el) => el,
        Err(code) => return code,
    };
    if let Some(name) = def {
        if el.decl(name).is_some_and(|d| d.mode == Mode::Zero) {
            eprintln!("tt0: `{name}` is erased and has no runtime content");
            return DIAGNOSTICS;
        }
    }
    let t = match extracted(&el, def) {
        Ok(t) => t,
        Err(code) => return code,
    };
    if opts.json {
        opts.emit(json!({ "name": def.unwrap_or("main"), "term": t }));
    } else {
        say!("{}", print_target(&t));
    }
    OK
}

pub fn run(opts: &Options, path: &Path, fuel: Option<u64>) -> u8 {
    let el = match load_checked(opts, path) {
        Ok(el) => el,
        Err(code) => return code,
    };
    let t = match extracted(&el, None) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match eval_target(&t, fuel) {
        Ok(nf) => {
            let k = as_numeral(&nf);
            if opts.json {
                opts.emit(json!({ "normal_form": nf, "text": print_target(&nf), "numeral": k }));
            } else {
                say!("{}", print_target(&nf));
                if let Some(k) = k {
                    say!("= {k}");
                }
            }
            OK
        }
        Err(e @ EvalError::FuelExhausted { .. }) => {
            eprintln!("tt0: {e}");
            OUT_OF_FUEL
        }
        Err(e) => {
            eprintln!("tt0: {e}");
            DIAGNOSTICS
        }
    }
}

pub fn meta(opts: &Options, path: &Path) -> u8 {
    let el = match load_checked(opts, path) {
        Ok(el) => el,
        Err(code) => return code,
    };
    let rows = sweep(&el);
    let verdict = |r: &Result<(), _>| if r.is_ok() { "pass" } else { "FAIL" };
    if opts.json {
        let out: Vec<Json> = rows
            .iter()
            .map(|r| {
                json!({
                    "name": &*r.name,
                    "zeroing": r.zeroing.is_ok(),
                    "stripping": r.stripping.is_ok(),
                })
            })
            .collect();
        opts.emit(json!({ "rows": out }));
    } else {
        let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0).max(4);
        say!("{:width$}  zeroing  stripping", "name");
        for r in &rows {
            say!("{:width$}  {:7}  {}", r.name, verdict(&r.zeroing), verdict(&r.stripping));
        }
    }
    for r in &rows {
        for (what, res) in [("zeroing", &r.zeroing), ("stripping", &r.stripping)] {
            if let Err(e) = res {
                eprintln!("tt0: {} failed {what}: {e}", r.name);
            }
        }
    }
    if rows.iter().all(|r| r.passed()) {
        OK
    } else {
        DIAGNOSTICS
    }
}

use std::fs;
use std::path::PathBuf;

use tt0_core::elab::{elaborate_module, Elaboration};
use tt0_core::extract::{extract, extract_closed, numeral, TargetTerm};
use tt0_core::kernel::{audit_modes, check, check_type, metas_in, Context, Term};
use tt0_core::mode::Mode;
use tt0_core::surface::parse_source;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn programs(dir: PathBuf) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tt0"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn elab(file: &str, src: &str) -> Elaboration {
    elaborate_module(&parse_source(file, src).unwrap_or_else(|e| panic!("{file}: {e}")))
}

#[test]
fn every_good_program_elaborates_and_rechecks() {
    let progs = programs(corpus_dir());
    assert!(progs.len() >= 25, "only {} programs", progs.len());
    for (file, src) in progs {
        let el = elab(&file, &src);
        assert!(el.is_ok(), "{file}: {:?}", el.errors);
        assert_eq!(el.metas.unsolved_since(tt0_core::kernel::MetaId(0)).count(), 0, "{file}");
        for d in &el.decls {
            let ctx = Context::from_entries(&el.metas, el.ctx.entries[..d.level].to_vec(), false);
            assert!(metas_in(&d.body).is_empty() && metas_in(&d.ty).is_empty(), "{file}: {} not zonked", d.name);
            check_type(&el.metas, &ctx, &d.ty).unwrap_or_else(|e| panic!("{file}: {}: {e}", d.name));
            let body_ctx = if d.mode == Mode::Zero { ctx.erase() } else { ctx.clone() };
            check(&el.metas, &body_ctx, &d.body, &d.ty_value).unwrap_or_else(|e| panic!("{file}: {}: {e}", d.name));
            let names = ctx.names();
            let modes: Vec<Mode> = ctx.entries.iter().map(|e| e.mode).collect();
            audit_modes(&names, &modes, body_ctx.erased, &d.body).unwrap_or_else(|e| panic!("{file}: {}: {e:?}", d.name));
        }
    }
}

#[test]
fn extraction_is_total_on_runtime_declarations() {
    for (file, src) in programs(corpus_dir()) {
        let el = elab(&file, &src);
        for d in el.decls.iter().filter(|d| d.mode == Mode::Omega) {
            extract_closed(&el, d.level, &d.body).unwrap_or_else(|e| panic!("{file}: {}: {e}", d.name));
        }
        if let Some(m) = &el.main {
            extract_closed(&el, el.ctx.entries.len(), &m.term).unwrap_or_else(|e| panic!("{file}: main: {e}"));
        }
    }
}

/// Collects erased pairs `Pair(0, a, b)` whose second component is closed.
fn erased_pairs(t: &Term, out: &mut Vec<Term>) {
    t.visit(&mut |s| {
        if let Term::Pair(Mode::Zero, _, b) = s {
            if !(0..64).any(|i| b.mentions(i)) {
                out.push(s.clone());
            }
        }
    });
}

#[test]
fn erased_pairs_extract_to_their_second_component() {
    let mut seen = 0;
    for (file, src) in programs(corpus_dir()) {
        let el = elab(&file, &src);
        let mut pairs = Vec::new();
        for d in el.decls.iter().filter(|d| d.mode == Mode::Omega) {
            erased_pairs(&d.body, &mut pairs);
        }
        for p in pairs {
            let Term::Pair(_, _, b) = &p else { unreachable!() };
            let whole = extract(&Context::new(), &p).unwrap_or_else(|e| panic!("{file}: {e}"));
            let second = extract(&Context::new(), b).unwrap();
            assert_eq!(whole, second, "{file}");
            seen += 1;
        }
    }
    assert!(seen >= 3, "only {seen} erased pairs in the corpus");
}

#[test]
fn bad_programs_are_rejected() {
    let progs = programs(corpus_dir().join("bad"));
    assert!(progs.len() >= 5);
    for (file, src) in progs {
        match parse_source(&file, &src) {
            Err(_) => assert_eq!(file, "syntax.tt0"),
            Ok(m) => assert!(!elaborate_module(&m).is_ok(), "{file} was accepted"),
        }
    }
}

#[test]
fn vec_pair_extracts_to_five() {
    let el = elab("vec_pair.tt0", &fs::read_to_string(corpus_dir().join("vec_pair.tt0")).unwrap());
    let p = el.decl("p").unwrap();
    assert_eq!(extract_closed(&el, p.level, &p.body).unwrap(), numeral(5));
    let id = elab("id.tt0", &fs::read_to_string(corpus_dir().join("id.tt0")).unwrap());
    let d = id.decl("id").unwrap();
    assert!(matches!(extract_closed(&id, d.level, &d.body).unwrap(), TargetTerm::Lam(_, ref b) if **b == TargetTerm::Var(0)));
}

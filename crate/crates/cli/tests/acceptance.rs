//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::rc::Rc;

use tt0_core::elab::{elaborate_module, Elaboration};
use tt0_core::extract::{alpha_eq, as_numeral, eval_target, extract, extract_closed, numeral, TargetTerm};
use tt0_core::kernel::{
    check, check_type, conv, eval, metas_in, normalize, rigid_env, Context, Env, Lvl, MetaStore, Term, Value,
};
use tt0_core::mode::{Icit, Mode};
use tt0_core::surface::parse_source;
use tt0_core::translate::strip_modes;
use tt0_core::unify::{fresh_meta, unify, UnifyError};

type Verdict = Result<String, String>;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn tt0_files(dir: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tt0"))
        .collect();
    out.sort();
    out
}

fn load(path: &Path) -> Elaboration {
    let src = fs::read_to_string(path).unwrap();
    let file = path.file_name().unwrap().to_string_lossy().into_owned();
    elaborate_module(&parse_source(&file, &src).unwrap_or_else(|e| panic!("{file}: {e}")))
}

fn load_named(name: &str) -> Elaboration {
    load(&corpus_dir().join(name))
}

fn corpus() -> Vec<(String, Elaboration)> {
    tt0_files(&corpus_dir())
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), load(&p)))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Closed normal form of a term at the given declaration level.
fn nbe_numeral(el: &Elaboration, level: usize, t: &Term) -> Option<u64> {
    let closed = el.close_at(level, t)?;
    normalize(&el.metas, &Env::new(), &closed).as_numeral()
}

fn run_target(t: &TargetTerm) -> Result<TargetTerm, String> {
    eval_target(t, Some(10_000_000)).map_err(|e| e.to_string())
}

fn kernel_independence() -> Verdict {
    let programs = corpus();
    ensure(programs.len() >= 25, || format!("corpus has {} programs", programs.len()))?;
    for required in [
        "id.tt0",
        "vec_pair.tt0",
        "list.tt0",
        "fin.tt0",
        "plus.tt0",
        "mult.tt0",
        "bool.tt0",
        "implicit.tt0",
    ] {
        ensure(programs.iter().any(|(f, _)| f == required), || format!("missing {required}"))?;
    }
    let mut decls = 0;
    let mut solved = 0;
    for (file, el) in &programs {
        ensure(el.is_ok(), || format!("{file}: {:?}", el.errors))?;
        let unsolved = el.metas.iter().filter(|m| m.solution.is_none()).count();
        ensure(unsolved == 0, || format!("{file}: {unsolved} unsolved metas"))?;
        solved += el.metas.len();
        for d in &el.decls {
            ensure(metas_in(&d.body).is_empty() && metas_in(&d.ty).is_empty(), || format!("{file}: {} not zonked", d.name))?;
            let ctx = Context::from_entries(&el.metas, el.ctx.entries[..d.level].to_vec(), false);
            check_type(&el.metas, &ctx, &d.ty).map_err(|e| format!("{file}: {}: {e}", d.name))?;
            let body_ctx = if d.mode == Mode::Zero { ctx.erase() } else { ctx };
            let ty = body_ctx.eval(&el.metas, &d.ty);
            check(&el.metas, &body_ctx, &d.body, &ty).map_err(|e| format!("{file}: {}: {e}", d.name))?;
            decls += 1;
        }
        if let Some(m) = &el.main {
            let ctx = Context::from_entries(&el.metas, el.ctx.entries.clone(), false);
            let ty = ctx.eval(&el.metas, &m.ty);
            check(&el.metas, &ctx, &m.term, &ty).map_err(|e| format!("{file}: main: {e}"))?;
            decls += 1;
        }
    }
    Ok(format!("{} programs, {decls} definitions rechecked, {solved} metas all solved", programs.len()))
}

fn canonicity() -> Verdict {
    let mut checked = 0;
    let mut files = 0;
    for (file, el) in corpus() {
        let mut here = 0;
        let mut targets: Vec<(String, usize, Term)> = el
            .decls
            .iter()
            .filter(|d| matches!(d.ty_value, Value::NatTy))
            .map(|d| (d.name.to_string(), d.level, d.body.clone()))
            .collect();
        if let Some(m) = el.main.as_ref().filter(|m| matches!(m.ty_value, Value::NatTy)) {
            targets.push(("main".into(), el.ctx.entries.len(), m.term.clone()));
        }
        for (name, level, body) in targets {
            let expected = nbe_numeral(&el, level, &body).ok_or_else(|| format!("{file}: {name}: NbE gave no numeral"))?;
            let target = extract_closed(&el, level, &body).map_err(|e| format!("{file}: {name}: {e}"))?;
            let got = as_numeral(&run_target(&target)?);
            ensure(got == Some(expected), || format!("{file}: {name}: extracted {got:?}, NbE {expected}"))?;
            here += 1;
        }
        checked += here;
        files += usize::from(here > 0);
    }
    ensure(files >= 10, || format!("only {files} programs with closed naturals"))?;
    let plus = load_named("plus.tt0");
    let five = plus.decl("five").unwrap();
    let got = as_numeral(&run_target(&extract_closed(&plus, five.level, &five.body).unwrap())?);
    ensure(got == Some(2 + 3), || format!("plus 2 3 extracted to {got:?}"))?;
    Ok(format!("{checked} closed naturals in {files} programs; plus 2 3 = 5"))
}

fn tracking() -> Verdict {
    let el = load_named("tracking.tt0");
    type Oracle = fn(u64) -> u64;
    let cases: [(&str, Oracle); 5] = [
        ("next", |k| k + 1),
        ("const5", |_| 5),
        ("plus3", |k| k + 3),
        ("double", |k| 2 * k),
        ("doubleNext", |k| 2 * (k + 1)),
    ];
    for (name, oracle) in cases {
        let d = el.decl(name).ok_or_else(|| format!("no {name}"))?;
        let f = extract_closed(&el, d.level, &d.body).map_err(|e| e.to_string())?;
        let closed = el.closed_body(name).unwrap();
        for k in 0..=10u64 {
            let app = TargetTerm::app(f.clone(), numeral(k));
            let got = as_numeral(&run_target(&app)?);
            let nbe = normalize(&el.metas, &Env::new(), &Term::app(Mode::Omega, closed.clone(), Term::numeral(k)));
            ensure(nbe.as_numeral() == Some(oracle(k)), || format!("{name} {k}: NbE {nbe:?}"))?;
            ensure(got == Some(oracle(k)), || format!("{name} {k}: extracted {got:?}, expected {}", oracle(k)))?;
        }
    }
    Ok("5 functions agree with NbE and a native oracle on 0..=10".into())
}

fn non_interference() -> Verdict {
    let el = load_named("erased_fns.tt0");
    let plus = el.closed_body("plus").unwrap();
    let args = [
        Term::numeral(0),
        Term::numeral(9),
        Term::app(Mode::Omega, Term::app(Mode::Omega, plus, Term::numeral(2)), Term::numeral(2)),
    ];
    let names = ["k7", "kplus", "kpass", "kvec", "ktype", "kpair"];
    let mut results = Vec::new();
    for name in names {
        let d = el.decl(name).unwrap();
        ensure(
            matches!(&d.ty_value, Value::Pi(_, Icit::Expl, Mode::Zero, dom, _) if matches!(**dom, Value::NatTy)),
            || format!("{name} is not an erased function on Nat"),
        )?;
        let f = el.closed_body(name).unwrap();
        let ef = extract(&Context::new(), &f).map_err(|e| format!("{name}: {e}"))?;
        let value = as_numeral(&run_target(&ef)?).ok_or_else(|| format!("{name}: not a numeral"))?;
        for x in &args {
            let fx = Term::app(Mode::Zero, f.clone(), x.clone());
            let efx = extract(&Context::new(), &fx).map_err(|e| format!("{name}: {e}"))?;
            ensure(alpha_eq(&efx, &ef), || format!("{name}: extraction depends on the erased argument"))?;
            let nbe = normalize(&el.metas, &Env::new(), &fx).as_numeral();
            ensure(nbe == Some(value), || format!("{name}: NbE {nbe:?} vs runtime {value}"))?;
        }
        results.push(format!("{name}={value}"));
    }
    Ok(format!("{} erased functions constant over {} arguments ({})", names.len(), args.len(), results.join(", ")))
}

fn identity_extraction() -> Verdict {
    let src = "let id : {A :0 U} -> A -> A = \\{A} x. x;";
    let el = elaborate_module(&parse_source("id.tt0", src).unwrap());
    ensure(el.is_ok(), || format!("{:?}", el.errors))?;
    let d = el.decl("id").unwrap();
    let t = extract_closed(&el, d.level, &d.body).map_err(|e| e.to_string())?;
    let expected = TargetTerm::lam("x", TargetTerm::Var(0));
    ensure(alpha_eq(&t, &expected), || format!("extracted {t}"))?;
    Ok(format!("extracts to {t}"))
}

fn meta_sweep() -> Verdict {
    let files = tt0_files(&corpus_dir());
    for path in &files {
        let out = Command::new(env!("CARGO_BIN_EXE_tt0")).arg("meta").arg(path).output().unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        ensure(out.status.success() && !stdout.contains("FAIL"), || {
            format!("{}: {}{}", path.display(), stdout, String::from_utf8_lossy(&out.stderr))
        })?;
    }
    let metas = MetaStore::new();
    let erased = Term::arrow(Mode::Zero, Term::NatTy, Term::NatTy);
    let runtime = Term::arrow(Mode::Omega, Term::NatTy, Term::NatTy);
    ensure(strip_modes(&erased) == strip_modes(&runtime), || "stripping kept the mode".into())?;
    let (a, b) = (eval(&metas, &Env::new(), &erased), eval(&metas, &Env::new(), &runtime));
    ensure(!conv(&metas, Lvl(0), &a, &b), || "conversion identified Π₀ and Π_ω".into())?;
    Ok(format!("{} programs pass zeroing and stripping; stripping is not injective", files.len()))
}

fn unification_regressions() -> Verdict {
    // (a) a runtime meta whose only solution is an erased variable
    let bad = load(&corpus_dir().join("bad/tagged_bad.tt0"));
    ensure(bad.errors.len() == 1 && bad.errors[0].is_mode_error(), || format!("{:?}", bad.errors))?;
    ensure(bad.errors[0].category() == "mode", || bad.errors[0].category().to_string())?;
    let good = load_named("tagged.tt0");
    ensure(good.is_ok(), || format!("{:?}", good.errors))?;

    // (b) non-linear and non-pattern spines
    let mut metas = MetaStore::new();
    let nat_to_nat = Term::arrow(Mode::Omega, Term::NatTy, Term::NatTy);
    let ty = eval(&metas, &Env::new(), &Term::arrow(Mode::Omega, Term::NatTy, nat_to_nat));
    let m = fresh_meta(&mut metas, &Context::new(), &ty, None);
    let env = rigid_env(2);
    let names: Vec<Rc<str>> = vec![Rc::from("x"), Rc::from("y")];
    let x = Term::var(1);
    let twice = Term::app(Mode::Omega, Term::app(Mode::Omega, m.clone(), x.clone()), x.clone());
    let lhs = eval(&metas, &env, &twice);
    let rhs = eval(&metas, &env, &x);
    let nonlinear = unify(&mut metas, &names, &lhs, &rhs);
    ensure(matches!(nonlinear, Err(UnifyError::NonLinear { .. })), || format!("non-linear: {nonlinear:?}"))?;
    let succ_arg = Term::app(Mode::Omega, Term::app(Mode::Omega, m, Term::succ(x.clone())), Term::var(0));
    let lhs = eval(&metas, &env, &succ_arg);
    let nonpattern = unify(&mut metas, &names, &lhs, &rhs);
    ensure(matches!(nonpattern, Err(UnifyError::NonPattern { .. })), || format!("non-pattern: {nonpattern:?}"))?;
    ensure(metas.iter().all(|e| e.solution.is_none()), || "a rejected constraint solved the meta".into())?;

    // (c) every committed solution in the corpus rechecks in its captured context
    let mut committed = 0;
    for (file, el) in corpus() {
        for entry in el.metas.iter() {
            let Some(sol) = &entry.solution else { continue };
            let ty = eval(&el.metas, &Env::new(), &entry.closed_ty);
            let ctx = Context::new().with_erased(entry.erased);
            check(&el.metas, &ctx, &sol.term, &ty).map_err(|e| format!("{file}: {}: {e}", entry.id))?;
            committed += 1;
        }
    }
    ensure(committed > 0, || "no solutions to recheck".into())?;
    Ok(format!("mode error on tagged_bad; non-linear and non-pattern rejected; {committed} solutions recheck"))
}

fn eliminator_mode_rule() -> Verdict {
    for file in ["bad/elim_erased_reject.tt0", "bad/bool_elim_erased_reject.tt0"] {
        let el = load(&corpus_dir().join(file));
        ensure(!el.is_ok() && el.errors.iter().all(|e| e.is_mode_error()), || format!("{file}: {:?}", el.errors))?;
    }
    let el = load_named("elim_erased_accept.tt0");
    ensure(el.is_ok(), || format!("elim_erased_accept.tt0: {:?}", el.errors))?;

    // the same eliminations directly against the kernel, outside and inside the marker
    let metas = MetaStore::new();
    let ctx = Context::new().bind(Rc::from("n"), Mode::Zero, Value::NatTy);
    let motive = Term::lam("_", Icit::Expl, Mode::Omega, Term::NatTy);
    let step = Term::lam("k", Icit::Expl, Mode::Omega, Term::lam("r", Icit::Expl, Mode::Omega, Term::var(0)));
    let nat = Term::nat_elim(motive.clone(), Term::Zero, step, Term::var(0));
    let boolean = Term::bool_elim(motive, Term::Zero, Term::Zero, Term::var(0));
    let bctx = Context::new().bind(Rc::from("b"), Mode::Zero, Value::BoolTy);
    ensure(check(&metas, &ctx, &nat, &Value::NatTy).is_err(), || "natElim accepted at runtime".into())?;
    ensure(check(&metas, &ctx.erase(), &nat, &Value::NatTy).is_ok(), || "natElim rejected when erased".into())?;
    ensure(check(&metas, &bctx, &boolean, &Value::NatTy).is_err(), || "boolElim accepted at runtime".into())?;
    ensure(check(&metas, &bctx.erase(), &boolean, &Value::NatTy).is_ok(), || "boolElim rejected when erased".into())?;
    Ok("erased scrutinees rejected at runtime, accepted under the marker".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("kernel independence", kernel_independence),
        ("canonicity", canonicity),
        ("tracking", tracking),
        ("non-interference", non_interference),
        ("identity extraction", identity_extraction),
        ("meta-theory sweep", meta_sweep),
        ("unification regressions", unification_regressions),
        ("eliminator mode rule", eliminator_mode_rule),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("PASS {}. {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {title}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::rc::Rc;

use proptest::prelude::*;
use tt0_core::elab::elaborate_module;
use tt0_core::extract::{as_numeral, eval_target, extract, extract_closed};
use tt0_core::kernel::{check, conv, eval, normalize, Context, Env, Lvl, MetaStore, Term};
use tt0_core::mode::{Icit, Mode};
use tt0_core::span::SourceSpan;
use tt0_core::surface::{parse_expr_source, parse_source, print_expr, print_module, Decl, Expr, ExprKind, LamBinder, Module};

fn ex(kind: ExprKind) -> Expr {
    Expr::new(SourceSpan::dummy(), kind)
}

fn name() -> impl Strategy<Value = Rc<str>> {
    prop_oneof![Just("x"), Just("y"), Just("f"), Just("A"), Just("_")].prop_map(Rc::from)
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Zero), Just(Mode::Omega)]
}

fn icit() -> impl Strategy<Value = Icit> {
    prop_oneof![Just(Icit::Expl), Just(Icit::Impl)]
}

fn surface_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        name().prop_filter("variable", |x| &**x != "_").prop_map(|x| ex(ExprKind::Var(x))),
        Just(ex(ExprKind::Univ)),
        Just(ex(ExprKind::NatTy)),
        Just(ex(ExprKind::BoolTy)),
        Just(ex(ExprKind::Zero)),
        Just(ex(ExprKind::True)),
        Just(ex(ExprKind::False)),
        Just(ex(ExprKind::Hole)),
        (0u64..20).prop_map(|n| ex(ExprKind::NumLit(n))),
    ];
    leaf.prop_recursive(4, 48, 4, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            (name(), icit(), proptest::option::of((mode(), inner.clone())), inner.clone()).prop_map(
                move |(x, i, ann, body)| {
                    let (mode, ann) = match ann {
                        Some((m, a)) => (Some(m), Some(Box::new(a))),
                        None => (None, None),
                    };
                    ex(ExprKind::Lam(LamBinder { name: x, icit: i, mode, ann }, Box::new(body)))
                }
            ),
            (inner.clone(), inner.clone(), icit()).prop_map(move |(f, a, i)| ex(ExprKind::App(b(f), b(a), i))),
            (name(), mode(), icit(), inner.clone(), inner.clone())
                .prop_map(move |(x, m, i, a, c)| ex(ExprKind::Pi(x, m, i, b(a), b(c)))),
            (name(), mode(), inner.clone(), inner.clone())
                .prop_map(move |(x, m, a, c)| ex(ExprKind::Sigma(x, m, b(a), b(c)))),
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| ex(ExprKind::Pair(b(a), b(c)))),
            inner.clone().prop_map(move |p| ex(ExprKind::Fst(b(p)))),
            inner.clone().prop_map(move |p| ex(ExprKind::Snd(b(p)))),
            inner.clone().prop_map(move |p| ex(ExprKind::Succ(b(p)))),
            (name(), inner.clone(), inner.clone(), inner.clone())
                .prop_map(move |(x, t, d, e)| ex(ExprKind::Let(x, b(t), b(d), b(e)))),
            (inner.clone(), inner.clone(), inner.clone(), inner.clone())
                .prop_map(move |(p, z, s, n)| ex(ExprKind::NatElim(b(p), b(z), b(s), b(n)))),
            (inner.clone(), inner.clone(), inner.clone(), inner.clone())
                .prop_map(move |(p, t, f, c)| ex(ExprKind::BoolElim(b(p), b(t), b(f), b(c)))),
        ]
    })
}

/// Small arithmetic and boolean programs, evaluated natively as the oracle.
#[derive(Clone, Debug)]
enum Arith {
    Lit(u64),
    Plus(Box<Arith>, Box<Arith>),
    Mult(Box<Arith>, Box<Arith>),
    Pred(Box<Arith>),
    IfEven(Box<Arith>, Box<Arith>, Box<Arith>),
}

impl Arith {
    fn value(&self) -> u64 {
        match self {
            Arith::Lit(n) => *n,
            Arith::Plus(a, b) => a.value() + b.value(),
            Arith::Mult(a, b) => a.value() * b.value(),
            Arith::Pred(a) => a.value().saturating_sub(1),
            Arith::IfEven(c, a, b) => {
                if c.value() % 2 == 0 {
                    a.value()
                } else {
                    b.value()
                }
            }
        }
    }

    fn source(&self) -> String {
        match self {
            Arith::Lit(n) => n.to_string(),
            Arith::Plus(a, b) => format!("(plus {} {})", a.source(), b.source()),
            Arith::Mult(a, b) => format!("(mult {} {})", a.source(), b.source()),
            Arith::Pred(a) => format!("(pred {})", a.source()),
            Arith::IfEven(c, a, b) => {
                format!("(boolElim (\\_. Nat) {} {} (even {}))", a.source(), b.source(), c.source())
            }
        }
    }
}

fn arith() -> impl Strategy<Value = Arith> {
    (0u64..6).prop_map(Arith::Lit).prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arith::Plus(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arith::Mult(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Arith::Pred(Box::new(a))),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(c, a, b)| Arith::IfEven(Box::new(c), Box::new(a), Box::new(b))),
        ]
    })
}

const PRELUDE: &str = "
let plus : Nat -> Nat -> Nat = \\m n. natElim (\\_. Nat) n (\\k r. succ r) m;
let mult : Nat -> Nat -> Nat = \\m n. natElim (\\_. Nat) 0 (\\k r. plus n r) m;
let pred : Nat -> Nat = \\n. natElim (\\_. Nat) 0 (\\k r. k) n;
let not : Bool -> Bool = \\b. boolElim (\\_. Bool) false true b;
let even : Nat -> Bool = \\n. natElim (\\_. Bool) true (\\k r. not r) n;
";

/// Core types and terms, not necessarily well typed; conversion does not care.
fn core_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::NatTy),
        Just(Term::BoolTy),
        Just(Term::Univ),
        Just(Term::Zero),
        Just(Term::True),
        (0u64..4).prop_map(Term::numeral),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (mode(), inner.clone(), inner.clone()).prop_map(|(m, a, b)| Term::arrow(m, a, b)),
            (mode(), inner.clone(), inner.clone()).prop_map(|(m, a, b)| Term::sigma("x", m, a, b)),
            (mode(), inner.clone()).prop_map(|(m, b)| Term::lam("x", Icit::Expl, m, b)),
            (mode(), inner.clone(), inner.clone()).prop_map(|(m, a, b)| Term::pair(m, a, b)),
            (mode(), inner.clone(), inner.clone()).prop_map(|(m, f, a)| {
                Term::app(m, Term::lam("x", Icit::Expl, m, f), a)
            }),
            inner.clone().prop_map(Term::succ),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn surface_expressions_round_trip(e in surface_expr()) {
        let text = print_expr(&e);
        let back = parse_expr_source("p.tt0", &text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back.without_spans(), e.without_spans(), "{}", text);
    }

    #[test]
    fn surface_modules_round_trip(ty in surface_expr(), body in surface_expr(), main in proptest::option::of(surface_expr())) {
        let decl = Decl { name: Rc::from("d"), name_span: SourceSpan::dummy(), ty, body };
        let m = Module { decls: vec![decl.clone(), Decl { name: Rc::from("e"), ..decl }], main };
        let text = print_module(&m);
        let back = parse_source("p.tt0", &text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back.without_spans(), m.without_spans());
    }

    #[test]
    fn conversion_is_symmetric_and_reflexive(a in core_term(), b in core_term()) {
        let metas = MetaStore::new();
        let (va, vb) = (eval(&metas, &Env::new(), &a), eval(&metas, &Env::new(), &b));
        prop_assert_eq!(conv(&metas, Lvl(0), &va, &vb), conv(&metas, Lvl(0), &vb, &va));
        prop_assert!(conv(&metas, Lvl(0), &va, &va));
    }

    #[test]
    fn normal_forms_are_stable(t in core_term()) {
        let metas = MetaStore::new();
        let once = normalize(&metas, &Env::new(), &t);
        let twice = normalize(&metas, &Env::new(), &once);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn arithmetic_agrees_with_native_oracle(a in arith()) {
        let src = format!("{PRELUDE}\nmain = {};", a.source());
        let el = elaborate_module(&parse_source("a.tt0", &src).unwrap());
        prop_assert!(el.is_ok(), "{:?}", el.errors);
        let expected = a.value();
        let core = normalize(&el.metas, &Env::new(), &el.closed_main().unwrap());
        prop_assert_eq!(core.as_numeral(), Some(expected));
        let m = el.main.as_ref().unwrap();
        let target = extract_closed(&el, el.ctx.entries.len(), &m.term).unwrap();
        let nf = eval_target(&target, Some(10_000_000)).unwrap();
        prop_assert_eq!(as_numeral(&nf), Some(expected));
    }

    #[test]
    fn checking_survives_the_erasure_marker(a in arith(), k in 0u64..5) {
        // a term over one runtime variable, checked with and without the marker
        let src = format!("{PRELUDE}\nlet f : Nat -> Nat = \\v. plus v {};", a.source());
        let el = elaborate_module(&parse_source("w.tt0", &src).unwrap());
        prop_assert!(el.is_ok(), "{:?}", el.errors);
        let f = el.decl("f").unwrap();
        let ctx = Context::from_entries(&el.metas, el.ctx.entries[..f.level].to_vec(), false);
        check(&el.metas, &ctx, &f.body, &f.ty_value).unwrap();
        check(&el.metas, &ctx.erase(), &f.body, &f.ty_value).unwrap();
        let closed_ty = eval(&el.metas, &Env::new(), &el.closed_type("f").unwrap());
        check(&el.metas, &Context::new().erase(), &el.closed_body("f").unwrap(), &closed_ty).unwrap();
        let applied = Term::app(Mode::Omega, el.closed_body("f").unwrap(), Term::numeral(k));
        let target = extract(&Context::new(), &applied).unwrap();
        prop_assert_eq!(as_numeral(&eval_target(&target, None).unwrap()), Some(k + a.value()));
    }
}

//! Normalization against a unary oracle, plus idempotence and printing
//! round trips on generated terms.

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use hott_core::frontend::elab::elab_expr;
use hott_core::frontend::parser::parse_expr;
use hott_core::frontend::pretty::show;
use hott_core::syntax::structural_eq;
use hott_core::{Checked, Checker, Ctx, GlobalEnv, Level, Session, Term};
use proptest::prelude::*;

fn nat_module() -> &'static Arc<Checked> {
    static M: OnceLock<Arc<Checked>> = OnceLock::new();
    M.get_or_init(|| {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/stdlib");
        Session::new(vec![dir.clone()])
            .check_file(&dir.join("nat.hott"))
            .expect("nat.hott checks")
    })
}

fn elab(src: &str) -> Term {
    let g = &nat_module().globals;
    elab_expr(g, &parse_expr(src).unwrap()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn normalize(t: &Term) -> Term {
    let mut ck = Checker::new(&nat_module().globals);
    ck.normalize(&Ctx::new(), t).unwrap_or_else(|e| panic!("{e}"))
}

/// The oracle: counts `succ` layers down to `zero`.
fn successors(t: &Term) -> Option<u64> {
    match t.unloc() {
        Term::Zero => Some(0),
        Term::Succ(p) => successors(p).map(|n| n + 1),
        _ => None,
    }
}

#[test]
fn two_plus_two_is_four_successors() {
    let n = normalize(&elab("plus 2 2"));
    assert_eq!(successors(&n), Some(4));
    assert_eq!(show(&n, &[]), "succ (succ (succ (succ zero)))");
}

#[test]
fn three_times_three_is_nine_successors() {
    let n = normalize(&elab("mult 3 3"));
    assert_eq!(successors(&n), Some(9));
}

#[test]
fn small_tables() {
    for m in 0..5u64 {
        for k in 0..5u64 {
            assert_eq!(successors(&normalize(&elab(&format!("plus {m} {k}")))), Some(m + k));
            assert_eq!(successors(&normalize(&elab(&format!("mult {m} {k}")))), Some(m * k));
        }
    }
}

#[test]
fn stuck_recursion_stays_neutral() {
    let t = elab("(fun n. plus n 1 : Nat -> Nat)");
    let n = normalize(&t);
    assert!(successors(&n).is_none());
    assert!(show(&n, &[]).contains("Nat-elim"), "{}", show(&n, &[]));
}

#[derive(Clone, Debug)]
enum Arith {
    Lit(u64),
    Var,
    Succ(Box<Arith>),
    Pred(Box<Arith>),
    Plus(Box<Arith>, Box<Arith>),
    Mult(Box<Arith>, Box<Arith>),
    Double(Box<Arith>),
}

impl Arith {
    fn src(&self) -> String {
        match self {
            Arith::Lit(n) => n.to_string(),
            Arith::Var => "v".into(),
            Arith::Succ(a) => format!("succ ({})", a.src()),
            Arith::Pred(a) => format!("pred ({})", a.src()),
            Arith::Plus(a, b) => format!("plus ({}) ({})", a.src(), b.src()),
            Arith::Mult(a, b) => format!("mult ({}) ({})", a.src(), b.src()),
            Arith::Double(a) => format!("(fun x. plus x x : Nat -> Nat) ({})", a.src()),
        }
    }

    fn value(&self, v: u64) -> u64 {
        match self {
            Arith::Lit(n) => *n,
            Arith::Var => v,
            Arith::Succ(a) => a.value(v) + 1,
            Arith::Pred(a) => a.value(v).saturating_sub(1),
            Arith::Plus(a, b) => a.value(v) + b.value(v),
            Arith::Mult(a, b) => a.value(v) * b.value(v),
            Arith::Double(a) => 2 * a.value(v),
        }
    }
}

fn arith() -> impl Strategy<Value = Arith> {
    let leaf = prop_oneof![(0u64..4).prop_map(Arith::Lit), Just(Arith::Var)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Arith::Succ(Box::new(a))),
            inner.clone().prop_map(|a| Arith::Pred(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arith::Plus(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Arith::Mult(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Arith::Double(Box::new(a))),
        ]
    })
}

/// Closed core terms built from the non-HIT formers, with every variable
/// bound.
fn core_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..4).prop_map(Term::Var),
        Just(Term::Nat),
        Just(Term::Zero),
        (0u32..3).prop_map(|l| Term::Univ(Level(l))),
    ];
    let t = leaf.prop_recursive(4, 32, 3, |inner| {
        let rc = |t: Term| Arc::new(t);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pi("x", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sigma("y", a, b)),
            inner.clone().prop_map(|b| Term::lam("z", b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (inner.clone(), inner.clone()).prop_map(move |(a, b)| Term::Pair(rc(a), rc(b))),
            inner.clone().prop_map(|a| Term::Fst(Arc::new(a))),
            inner.clone().prop_map(|a| Term::Snd(Arc::new(a))),
            inner.clone().prop_map(Term::succ),
            inner.clone().prop_map(Term::refl),
            (inner.clone(), inner.clone(), inner).prop_map(|(a, x, y)| Term::id(a, x, y)),
        ]
    });
    t.prop_map(|t| bind_all(&t, 0))
}

/// Sends each variable to one that is bound at its position, or to `zero`.
fn bind_all(t: &Term, depth: usize) -> Term {
    let rc = |t: Term| Arc::new(t);
    match t {
        Term::Var(_) if depth == 0 => Term::Zero,
        Term::Var(i) => Term::Var(i % depth),
        Term::Pi(h, a, b) => Term::Pi(h.clone(), rc(bind_all(a, depth)), rc(bind_all(b, depth + 1))),
        Term::Sigma(h, a, b) => Term::Sigma(h.clone(), rc(bind_all(a, depth)), rc(bind_all(b, depth + 1))),
        Term::Lam(h, b) => Term::Lam(h.clone(), rc(bind_all(b, depth + 1))),
        Term::App(f, a) => Term::App(rc(bind_all(f, depth)), rc(bind_all(a, depth))),
        Term::Pair(a, b) => Term::Pair(rc(bind_all(a, depth)), rc(bind_all(b, depth))),
        Term::Fst(a) => Term::Fst(rc(bind_all(a, depth))),
        Term::Snd(a) => Term::Snd(rc(bind_all(a, depth))),
        Term::Succ(a) => Term::Succ(rc(bind_all(a, depth))),
        Term::Refl(a) => Term::Refl(rc(bind_all(a, depth))),
        Term::Id(a, x, y) => Term::Id(rc(bind_all(a, depth)), rc(bind_all(x, depth)), rc(bind_all(y, depth))),
        other => other.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_arithmetic_matches_the_oracle(e in arith(), v in 0u64..3) {
        let t = elab(&format!("(fun v. {} : Nat -> Nat) {v}", e.src()));
        let n = normalize(&t);
        prop_assert_eq!(successors(&n), Some(e.value(v)));
    }

    #[test]
    fn normalization_is_idempotent_on_open_arithmetic(e in arith()) {
        let t = elab(&format!("(fun v. {} : Nat -> Nat)", e.src()));
        let once = normalize(&t);
        let ann = Term::Ann(Arc::new(once.clone()), Arc::new(Term::pi("_", Term::Nat, Term::Nat)));
        let twice = normalize(&ann);
        prop_assert!(structural_eq(&once, &twice), "{} vs {}", show(&once, &[]), show(&twice, &[]));
    }

    #[test]
    fn printed_terms_parse_back(t in core_term()) {
        let printed = show(&t, &[]);
        let parsed = parse_expr(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        let back = elab_expr(&GlobalEnv::new(), &parsed)
            .map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert!(structural_eq(&back.strip_locs(), &t), "{}", printed);
    }
}

//! de Bruijn shifting and instantiation checked against a named-variable
//! oracle: terms are written with names, substituted by capture-avoiding
//! renaming, and only then translated to indices.

use std::collections::BTreeSet;

use hott_core::syntax::{instantiate, shift, unshift};
use hott_core::Term;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum N {
    Var(String),
    Lam(String, Box<N>),
    App(Box<N>, Box<N>),
    Pair(Box<N>, Box<N>),
    Succ(Box<N>),
}

fn var(x: &str) -> N {
    N::Var(x.to_string())
}

fn lam(x: &str, b: N) -> N {
    N::Lam(x.to_string(), Box::new(b))
}

fn app(f: N, a: N) -> N {
    N::App(Box::new(f), Box::new(a))
}

/// Translates to indices. `ctx` lists the names in scope, innermost last.
fn to_db(t: &N, ctx: &mut Vec<String>) -> Term {
    match t {
        N::Var(x) => {
            let pos = ctx.iter().rposition(|y| y == x).unwrap_or_else(|| panic!("free `{x}`"));
            Term::Var(ctx.len() - 1 - pos)
        }
        N::Lam(x, b) => {
            ctx.push(x.clone());
            let body = to_db(b, ctx);
            ctx.pop();
            Term::lam(x, body)
        }
        N::App(f, a) => Term::app(to_db(f, ctx), to_db(a, ctx)),
        N::Pair(a, b) => Term::Pair(to_db(a, ctx).into(), to_db(b, ctx).into()),
        N::Succ(a) => Term::succ(to_db(a, ctx)),
    }
}

fn db(t: &N, ctx: &[&str]) -> Term {
    to_db(t, &mut ctx.iter().map(|s| s.to_string()).collect())
}

fn free(t: &N, out: &mut BTreeSet<String>) {
    match t {
        N::Var(x) => {
            out.insert(x.clone());
        }
        N::Lam(x, b) => {
            let mut inner = BTreeSet::new();
            free(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
        N::App(a, b) | N::Pair(a, b) => {
            free(a, out);
            free(b, out);
        }
        N::Succ(a) => free(a, out),
    }
}

fn names(t: &N, out: &mut BTreeSet<String>) {
    match t {
        N::Var(x) => {
            out.insert(x.clone());
        }
        N::Lam(x, b) => {
            out.insert(x.clone());
            names(b, out);
        }
        N::App(a, b) | N::Pair(a, b) => {
            names(a, out);
            names(b, out);
        }
        N::Succ(a) => names(a, out),
    }
}

/// Capture-avoiding `t[x := s]`.
fn subst(t: &N, x: &str, s: &N) -> N {
    match t {
        N::Var(y) if y == x => s.clone(),
        N::Var(_) => t.clone(),
        N::Lam(y, _) if y == x => t.clone(),
        N::Lam(y, b) => {
            let mut fv = BTreeSet::new();
            free(s, &mut fv);
            if fv.contains(y) {
                let mut taken = fv;
                names(b, &mut taken);
                taken.insert(x.to_string());
                let z = (0..).map(|i| format!("{y}{i}")).find(|z| !taken.contains(z)).unwrap();
                let renamed = subst(b, y, &N::Var(z.clone()));
                N::Lam(z, Box::new(subst(&renamed, x, s)))
            } else {
                N::Lam(y.clone(), Box::new(subst(b, x, s)))
            }
        }
        N::App(a, b) => N::App(Box::new(subst(a, x, s)), Box::new(subst(b, x, s))),
        N::Pair(a, b) => N::Pair(Box::new(subst(a, x, s)), Box::new(subst(b, x, s))),
        N::Succ(a) => N::Succ(Box::new(subst(a, x, s))),
    }
}

// Hand-written cases.

#[test]
fn instantiate_avoids_capture() {
    // (fun y. x y)[x := y] = fun y0. y y0
    let body = lam("y", app(var("x"), var("y")));
    let out = subst(&body, "x", &var("y"));
    assert_eq!(
        instantiate(&db(&body, &["y", "x"]), &db(&var("y"), &["y"])),
        db(&out, &["y"])
    );
    assert_eq!(db(&out, &["y"]), Term::lam("y", Term::app(Term::Var(1), Term::Var(0))));
}

#[test]
fn instantiate_stops_at_shadowing_binder() {
    let body = app(var("x"), lam("x", var("x")));
    let arg = var("a");
    assert_eq!(
        instantiate(&db(&body, &["a", "x"]), &db(&arg, &["a"])),
        db(&subst(&body, "x", &arg), &["a"])
    );
}

#[test]
fn shift_skips_bound_names() {
    let t = lam("z", app(var("a"), var("z")));
    let shifted = shift(&db(&t, &["a"]), 2, 0);
    assert_eq!(shifted, db(&t, &["a", "w0", "w1"]));
}

// Generated cases.

const POOL: [&str; 5] = ["a", "b", "c", "x", "y"];

fn named() -> impl Strategy<Value = N> {
    let leaf = prop::sample::select(&POOL[..]).prop_map(var);
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (prop::sample::select(&POOL[..]), inner.clone()).prop_map(|(x, b)| lam(x, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| app(f, a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| N::Pair(Box::new(a), Box::new(b))),
            inner.prop_map(|a| N::Succ(Box::new(a))),
        ]
    })
}

/// Replaces free names outside `scope` by `scope[0]`.
fn close(t: &N, scope: &[&str]) -> N {
    fn go(t: &N, scope: &mut Vec<String>) -> N {
        match t {
            N::Var(x) if scope.contains(x) => t.clone(),
            N::Var(_) => N::Var(scope[0].clone()),
            N::Lam(x, b) => {
                scope.push(x.clone());
                let b = go(b, scope);
                scope.pop();
                N::Lam(x.clone(), Box::new(b))
            }
            N::App(a, b) => N::App(Box::new(go(a, scope)), Box::new(go(b, scope))),
            N::Pair(a, b) => N::Pair(Box::new(go(a, scope)), Box::new(go(b, scope))),
            N::Succ(a) => N::Succ(Box::new(go(a, scope))),
        }
    }
    go(t, &mut scope.iter().map(|s| s.to_string()).collect())
}

proptest! {
    #[test]
    fn instantiate_matches_named_substitution(body in named(), arg in named()) {
        let outer = ["a", "b", "c"];
        let body = close(&body, &["a", "b", "c", "x"]);
        let arg = close(&arg, &outer);
        let expected = db(&subst(&body, "x", &arg), &outer);
        let actual = instantiate(&db(&body, &["a", "b", "c", "x"]), &db(&arg, &outer));
        prop_assert_eq!(actual, expected);
    }

    #[test]
    fn shift_matches_inserting_unused_names(t in named(), k in 0usize..4, cut in 0usize..3) {
        let scope = ["a", "b", "c"];
        let t = close(&t, &scope);
        let (outer, inner) = scope.split_at(scope.len() - cut);
        let fresh: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
        let mut widened: Vec<&str> = outer.to_vec();
        widened.extend(fresh.iter().map(|s| s.as_str()));
        widened.extend(inner);
        prop_assert_eq!(shift(&db(&t, &scope), k, cut), db(&t, &widened));
    }

    #[test]
    fn shifts_compose_and_invert(t in named(), j in 0usize..3, k in 0usize..3, cut in 0usize..3) {
        let t = db(&close(&t, &POOL), &POOL);
        prop_assert_eq!(shift(&shift(&t, j, cut), k, cut), shift(&t, j + k, cut));
        prop_assert_eq!(unshift(&shift(&t, k, cut), k, cut), t);
    }

    #[test]
    fn instantiating_a_shifted_body_is_identity(t in named(), arg in named()) {
        // A body that ignores its variable is the shift of a closed-over term.
        let t = db(&close(&t, &POOL), &POOL);
        let arg = db(&close(&arg, &POOL), &POOL);
        prop_assert_eq!(instantiate(&shift(&t, 1, 0), &arg), t);
    }
}

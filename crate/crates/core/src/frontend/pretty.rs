//! Printing of surface syntax, and delaboration of core terms back into
//! surface syntax with fresh binder names.

use std::collections::HashSet;

use crate::frontend::lexer::is_reserved;
use crate::frontend::surface::*;
use crate::syntax::{Name, Term};

/// Identifiers with built-in meaning; binders never take these names.
pub const BUILTINS: &[&str] = &["Nat", "zero", "succ", "Nat-elim", "Sum", "Sum-elim", "J"];

// Precedence levels, loosest first.
const EXPR: u8 = 0;
const PROD: u8 = 1;
const EQ: u8 = 2;
const APP: u8 = 3;
const ATOM: u8 = 4;

fn level(t: &STerm) -> u8 {
    match &t.kind {
        SKind::Fun(..) | SKind::Pi(..) | SKind::Arrow(..) | SKind::Sigma(..) => EXPR,
        SKind::Prod(..) => PROD,
        SKind::Eq(..) => EQ,
        SKind::App(..) => APP,
        _ => ATOM,
    }
}

pub fn print(t: &STerm) -> String {
    let mut out = String::new();
    go(t, EXPR, &mut out);
    out
}

fn names(ns: &[Ident]) -> String {
    ns.iter().map(|n| n.name.as_str()).collect::<Vec<_>>().join(" ")
}

fn binders(bs: &[Binder], out: &mut String) {
    for (i, b) in bs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push('(');
        out.push_str(&names(&b.names));
        out.push_str(" : ");
        go(&b.ty, EXPR, out);
        out.push(')');
    }
}

fn go(t: &STerm, prec: u8, out: &mut String) {
    let parens = level(t) < prec;
    if parens {
        out.push('(');
    }
    match &t.kind {
        SKind::Var(s) => out.push_str(s),
        SKind::Hole => out.push('_'),
        SKind::Univ(n) => {
            out.push_str("U ");
            out.push_str(&n.to_string());
        }
        SKind::Num(n) => out.push_str(&n.to_string()),
        SKind::Prim(p) => out.push_str(p.keyword()),
        SKind::Elim(id) => {
            out.push_str("elim ");
            out.push_str(&id.name);
        }
        SKind::Fun(ns, body) => {
            out.push_str("fun ");
            out.push_str(&names(ns));
            out.push_str(". ");
            go(body, EXPR, out);
        }
        SKind::Pi(bs, cod) => {
            binders(bs, out);
            out.push_str(" -> ");
            go(cod, EXPR, out);
        }
        SKind::Arrow(a, b) => {
            go(a, PROD, out);
            out.push_str(" -> ");
            go(b, EXPR, out);
        }
        SKind::Sigma(bs, rest) => {
            binders(bs, out);
            out.push_str(" * ");
            go(rest, PROD, out);
        }
        SKind::Prod(a, b) => {
            go(a, EQ, out);
            out.push_str(" * ");
            // a dependent pair type on the right would swallow the rest
            if matches!(b.kind, SKind::Sigma(..)) {
                out.push('(');
                go(b, EXPR, out);
                out.push(')');
            } else {
                go(b, PROD, out);
            }
        }
        SKind::Eq(a, b, carrier) => {
            go(a, APP, out);
            out.push_str(" = ");
            go(b, APP, out);
            out.push_str(" in ");
            go(carrier, APP, out);
        }
        SKind::App(head, args) => {
            go(head, ATOM, out);
            for a in args {
                out.push(' ');
                go(a, ATOM, out);
            }
        }
        SKind::Pair(a, b) => {
            out.push('(');
            go(a, EXPR, out);
            out.push_str(", ");
            go(b, EXPR, out);
            out.push(')');
        }
        SKind::Ann(a, ty) => {
            out.push('(');
            go(a, EXPR, out);
            out.push_str(" : ");
            go(ty, EXPR, out);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

pub fn print_decl(d: &SDecl) -> String {
    let mut out = String::new();
    let head = |kw: &str, name: &Ident, bs: &[Binder], out: &mut String| {
        out.push_str(kw);
        out.push(' ');
        out.push_str(&name.name);
        if !bs.is_empty() {
            out.push(' ');
            binders(bs, out);
        }
        out.push_str(" : ");
    };
    match d {
        SDecl::Def {
            name,
            binders: bs,
            ty,
            body,
            ..
        } => {
            head("def", name, bs, &mut out);
            go(ty, EXPR, &mut out);
            out.push_str(" :=\n  ");
            go(body, EXPR, &mut out);
        }
        SDecl::Postulate {
            name, binders: bs, ty, ..
        } => {
            head("postulate", name, bs, &mut out);
            go(ty, EXPR, &mut out);
        }
        SDecl::Hit {
            name,
            params,
            ty,
            ctors,
            ..
        } => {
            head("hit", name, params, &mut out);
            go(ty, EXPR, &mut out);
            out.push_str(" where");
            for c in ctors {
                out.push_str("\n  | ");
                out.push_str(&c.name.name);
                out.push_str(" : ");
                go(&c.ty, EXPR, &mut out);
            }
        }
    }
    out
}

pub fn print_module(m: &ModuleSource) -> String {
    let mut out = String::new();
    for i in &m.imports {
        out.push_str("import ");
        out.push_str(&i.name);
        out.push('\n');
    }
    for d in &m.decls {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&print_decl(d));
        out.push('\n');
    }
    out
}

/// Global names a term refers to, including constructor names.
fn referenced_globals(t: &Term, out: &mut HashSet<String>) {
    use Term::*;
    let mut rec = |t: &Term| referenced_globals(t, out);
    match t {
        Const(c) => {
            out.insert(c.to_string());
        }
        HitForm(n, args) => {
            out.insert(n.to_string());
            args.iter().for_each(|a| referenced_globals(a, out));
        }
        HitCtor(_, c, args) => {
            out.insert(c.to_string());
            args.iter().for_each(|a| referenced_globals(a, out));
        }
        HitElim {
            hit,
            motive,
            methods,
            scrutinee,
        } => {
            out.insert(hit.to_string());
            referenced_globals(motive, out);
            methods.iter().for_each(|m| referenced_globals(m, out));
            referenced_globals(scrutinee, out);
        }
        Var(_) | Univ(_) | Nat | Zero | Hole => {}
        Pi(_, a, b) | Sigma(_, a, b) | App(a, b) | Pair(a, b) | Sum(a, b) | Ann(a, b) => {
            rec(a);
            rec(b);
        }
        Lam(_, a) | Fst(a) | Snd(a) | Inl(a) | Inr(a) | Succ(a) | Refl(a) | Loc(_, a) => rec(a),
        SumElim {
            motive,
            left,
            right,
            scrutinee,
        } => [motive, left, right, scrutinee].into_iter().for_each(|x| rec(x)),
        NatElim {
            motive,
            zero,
            succ,
            scrutinee,
        } => [motive, zero, succ, scrutinee].into_iter().for_each(|x| rec(x)),
        Id(a, x, y) => [a, x, y].into_iter().for_each(|x| rec(x)),
        J {
            motive,
            base,
            lhs,
            rhs,
            proof,
        } => [motive, base, lhs, rhs, proof].into_iter().for_each(|x| rec(x)),
    }
}

struct Delab {
    scope: Vec<String>,
    avoid: HashSet<String>,
}

fn var(s: &str) -> STerm {
    STerm::var(s)
}

fn synth(kind: SKind) -> STerm {
    STerm::synth(kind)
}

fn ident(s: &str) -> Ident {
    Ident {
        name: s.to_string(),
        span: Default::default(),
    }
}

fn app(head: STerm, args: Vec<STerm>) -> STerm {
    match head.kind {
        SKind::App(h, mut first) => {
            first.extend(args);
            synth(SKind::App(h, first))
        }
        _ => synth(SKind::App(Box::new(head), args)),
    }
}

impl Delab {
    fn fresh(&self, hint: &str, used: bool) -> String {
        if hint == "_" && !used {
            return "_".into();
        }
        let base = if hint == "_" || hint.is_empty() { "x" } else { hint };
        let taken = |s: &str| {
            self.scope.iter().any(|n| n == s) || self.avoid.contains(s) || is_reserved(s) || BUILTINS.contains(&s)
        };
        if !taken(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}{i}")).find(|c| !taken(c)).unwrap()
    }

    /// Delaborates a body under `k` new binders with the given hints.
    fn under(&mut self, hints: &[&str], body: &Term) -> (Vec<Ident>, STerm) {
        let k = hints.len();
        let mut ids = Vec::with_capacity(k);
        for (j, h) in hints.iter().enumerate() {
            let used = body.has_free_var(k - 1 - j);
            let n = self.fresh(h, used);
            self.scope.push(n.clone());
            ids.push(ident(&n));
        }
        let b = self.term(body);
        self.scope.truncate(self.scope.len() - k);
        (ids, b)
    }

    fn fun(&mut self, hints: &[&str], body: &Term) -> STerm {
        let (ids, b) = self.under(hints, body);
        synth(SKind::Fun(ids, Box::new(b)))
    }

    fn term(&mut self, t: &Term) -> STerm {
        match t {
            Term::Loc(_, inner) => self.term(inner),
            Term::Var(i) => match self.scope.len().checked_sub(i + 1) {
                Some(l) => var(&self.scope[l]),
                None => var(&format!("?{i}")),
            },
            Term::Univ(l) => synth(SKind::Univ(l.0)),
            Term::Pi(..) | Term::Sigma(..) => self.binding_type(t),
            Term::Lam(..) => {
                let mut hints = Vec::new();
                let mut cur = t;
                while let Term::Lam(h, b) = cur {
                    hints.push(h.to_string());
                    cur = b.unloc();
                }
                let hs: Vec<&str> = hints.iter().map(|s| s.as_str()).collect();
                self.fun(&hs, cur)
            }
            Term::App(..) => {
                let mut args = Vec::new();
                let mut cur = t;
                while let Term::App(f, a) = cur {
                    args.push(a);
                    cur = f.unloc();
                }
                let head = self.term(cur);
                let args = args.into_iter().rev().map(|a| self.term(a)).collect();
                app(head, args)
            }
            Term::Pair(a, b) => synth(SKind::Pair(Box::new(self.term(a)), Box::new(self.term(b)))),
            Term::Fst(p) => app(synth(SKind::Prim(Prim::Fst)), vec![self.term(p)]),
            Term::Snd(p) => app(synth(SKind::Prim(Prim::Snd)), vec![self.term(p)]),
            Term::Sum(a, b) => app(var("Sum"), vec![self.term(a), self.term(b)]),
            Term::Inl(a) => app(synth(SKind::Prim(Prim::Inl)), vec![self.term(a)]),
            Term::Inr(a) => app(synth(SKind::Prim(Prim::Inr)), vec![self.term(a)]),
            Term::SumElim {
                motive,
                left,
                right,
                scrutinee,
            } => {
                let args = vec![
                    self.fun(&["x"], motive),
                    self.fun(&["a"], left),
                    self.fun(&["b"], right),
                    self.term(scrutinee),
                ];
                app(var("Sum-elim"), args)
            }
            Term::Nat => var("Nat"),
            Term::Zero => var("zero"),
            Term::Succ(n) => app(var("succ"), vec![self.term(n)]),
            Term::NatElim {
                motive,
                zero,
                succ,
                scrutinee,
            } => {
                let args = vec![
                    self.fun(&["n"], motive),
                    self.term(zero),
                    self.fun(&["k", "ih"], succ),
                    self.term(scrutinee),
                ];
                app(var("Nat-elim"), args)
            }
            Term::Id(a, x, y) => synth(SKind::Eq(
                Box::new(self.term(x)),
                Box::new(self.term(y)),
                Box::new(self.term(a)),
            )),
            Term::Refl(x) => app(synth(SKind::Prim(Prim::Refl)), vec![self.term(x)]),
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                proof,
            } => {
                let args = vec![
                    self.fun(&["x", "y", "p"], motive),
                    self.fun(&["x"], base),
                    self.term(lhs),
                    self.term(rhs),
                    self.term(proof),
                ];
                app(var("J"), args)
            }
            Term::HitForm(n, args) | Term::HitCtor(_, n, args) => {
                let head = var(n);
                if args.is_empty() {
                    head
                } else {
                    app(head, args.iter().map(|a| self.term(a)).collect())
                }
            }
            Term::HitElim {
                hit,
                motive,
                methods,
                scrutinee,
            } => {
                let mut args = vec![self.fun(&["x"], motive)];
                args.extend(methods.iter().map(|m| self.term(m)));
                args.push(self.term(scrutinee));
                app(synth(SKind::Elim(ident(hit))), args)
            }
            Term::Const(c) => var(c),
            Term::Ann(a, ty) => synth(SKind::Ann(Box::new(self.term(a)), Box::new(self.term(ty)))),
            Term::Hole => synth(SKind::Hole),
        }
    }

    /// Pi or Sigma, grouping consecutive dependent binders of the same kind
    /// into one telescope.
    fn binding_type(&mut self, t: &Term) -> STerm {
        let is_pi = matches!(t, Term::Pi(..));
        let (Term::Pi(_, a, b) | Term::Sigma(_, a, b)) = t else {
            unreachable!()
        };
        if !b.has_free_var(0) {
            let dom = self.term(a);
            self.scope.push("_".into());
            let cod = self.term(b);
            self.scope.pop();
            let kind = if is_pi {
                SKind::Arrow(Box::new(dom), Box::new(cod))
            } else {
                SKind::Prod(Box::new(dom), Box::new(cod))
            };
            return synth(kind);
        }
        let mut groups: Vec<(Vec<Ident>, STerm, String)> = Vec::new();
        let pushed_before = self.scope.len();
        let mut cur: &Term = t;
        loop {
            let (h, a, b) = match (cur, is_pi) {
                (Term::Pi(h, a, b), true) | (Term::Sigma(h, a, b), false) if b.has_free_var(0) => (h, a, b),
                _ => break,
            };
            let dom = self.term(a);
            let printed = print(&dom);
            let n = self.fresh(h, true);
            self.scope.push(n.clone());
            match groups.last_mut() {
                Some((ns, _, p)) if *p == printed => ns.push(ident(&n)),
                _ => groups.push((vec![ident(&n)], dom, printed)),
            }
            cur = b.unloc();
        }
        let rest = self.term(cur);
        self.scope.truncate(pushed_before);
        let tele = groups.into_iter().map(|(names, ty, _)| Binder { names, ty }).collect();
        if is_pi {
            synth(SKind::Pi(tele, Box::new(rest)))
        } else {
            synth(SKind::Sigma(tele, Box::new(rest)))
        }
    }
}

/// Converts a core term to surface syntax. `scope` names the free
/// variables by level.
pub fn delab(t: &Term, scope: &[Name]) -> STerm {
    let mut avoid = HashSet::new();
    referenced_globals(t, &mut avoid);
    let mut d = Delab {
        scope: scope.iter().map(|n| n.to_string()).collect(),
        avoid,
    };
    d.term(t)
}

/// Prints a core term in surface syntax.
pub fn show(t: &Term, scope: &[Name]) -> String {
    print(&delab(t, scope))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::parse_expr;
    use crate::syntax::{name, Level};

    fn round(src: &str) -> String {
        print(&parse_expr(src).unwrap())
    }

    #[test]
    fn printing_is_a_fixpoint() {
        for src in [
            "(A : U 0) -> A -> A",
            "fun A a. a",
            "(x : A) * B x",
            "((x : A) * B x) -> C",
            "A * ((x : A) * B x)",
            "x = y in A",
            "(p = q in (x = y in A)) -> Nat",
            "f (g x) (U 1) _ 3",
            "(f x : B)",
            "(a, (b, c))",
            "elim S1 (fun x. Nat) zero (refl zero) base",
            "fst (snd p)",
            "(fun x. x) y",
        ] {
            let once = round(src);
            assert_eq!(round(&once), once, "{src}");
        }
    }

    #[test]
    fn arithmetic_prints_in_unary() {
        let four = Term::numeral(4);
        assert_eq!(show(&four, &[]), "succ (succ (succ (succ zero)))");
    }

    #[test]
    fn identity_types() {
        let t = Term::id(Term::Nat, Term::Zero, Term::Zero);
        assert_eq!(show(&t, &[]), "zero = zero in Nat");
    }

    #[test]
    fn binders_are_freshened() {
        // fun x. fun x. <outer x>
        let t = Term::lam("x", Term::lam("x", Term::Var(1)));
        assert_eq!(show(&t, &[]), "fun x x1. x");
        let t = Term::lam("x", Term::Var(1));
        assert_eq!(show(&t, &[name("x")]), "fun x1. x");
    }

    #[test]
    fn telescopes_group_equal_types() {
        let t = Term::pi(
            "A",
            Term::Univ(Level(0)),
            Term::pi("B", Term::Univ(Level(0)), Term::pi("_", Term::Var(1), Term::Var(1))),
        );
        assert_eq!(show(&t, &[]), "(A B : U 0) -> A -> B");
    }

    #[test]
    fn binders_avoid_globals_and_builtins() {
        let t = Term::lam("f", Term::app(Term::constant("f"), Term::Var(0)));
        assert_eq!(show(&t, &[]), "fun f1. f f1");
        let t = Term::lam("J", Term::Var(0));
        assert_eq!(show(&t, &[]), "fun J1. J1");
    }
}

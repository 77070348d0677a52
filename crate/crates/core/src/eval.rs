//! Environment-machine evaluation and the definitional-equality test.
//!
//! Definitions unfold to their cached values, postulates and identification
//! constructors stay neutral, `J` computes on `refl`, and HIT eliminators
//! compute on point constructors only.

use std::sync::Arc;

use thiserror::Error;

use crate::env::{Entry, GlobalEnv};
use crate::syntax::{constants, name, Term};
use crate::value::{Closure, Env, Frame, Head, Lvl, Neutral, Val, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unresolved constant `{0}`")]
    UnresolvedConstant(String),
}

/// Checks that every constant a term mentions is known, so that evaluating
/// it cannot hit the unresolved-constant guard.
pub fn ensure_resolved(globals: &GlobalEnv, t: &Term) -> Result<(), EvalError> {
    let mut names = Vec::new();
    constants(t, &mut names);
    match names.into_iter().find(|n| !globals.contains(n)) {
        Some(n) => Err(EvalError::UnresolvedConstant(n.to_string())),
        None => Ok(()),
    }
}

#[derive(Clone, Copy)]
pub struct Eval<'g> {
    pub globals: &'g GlobalEnv,
}

impl<'g> Eval<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Self {
        Eval { globals }
    }

    /// Evaluates a term. The term must be well scoped in `env` and mention
    /// only known constants; violations are kernel bugs and panic.
    pub fn eval(&self, env: &Env, t: &Term) -> Val {
        use Term::*;
        let ev = |t: &Term| self.eval(env, t);
        let clo = |t: &Arc<Term>, hint: &str| Closure {
            env: env.clone(),
            body: t.clone(),
            hint: name(hint),
        };
        match t {
            Var(i) => env
                .lookup(*i)
                .unwrap_or_else(|| panic!("eval: variable {i} out of scope"))
                .clone(),
            Univ(l) => Arc::new(Value::Univ(*l)),
            Pi(h, a, b) => Arc::new(Value::Pi(ev(a), clo(b, h))),
            Lam(h, b) => Arc::new(Value::Lam(clo(b, h))),
            App(f, a) => self.apply(&ev(f), ev(a)),
            Sigma(h, a, b) => Arc::new(Value::Sigma(ev(a), clo(b, h))),
            Pair(a, b) => Arc::new(Value::Pair(ev(a), ev(b))),
            Fst(p) => self.fst(&ev(p)),
            Snd(p) => self.snd(&ev(p)),
            Sum(a, b) => Arc::new(Value::Sum(ev(a), ev(b))),
            Inl(a) => Arc::new(Value::Inl(ev(a))),
            Inr(a) => Arc::new(Value::Inr(ev(a))),
            SumElim {
                motive,
                left,
                right,
                scrutinee,
            } => self.sum_elim(clo(motive, "x"), clo(left, "a"), clo(right, "b"), &ev(scrutinee)),
            Nat => Arc::new(Value::Nat),
            Zero => Arc::new(Value::Zero),
            Succ(n) => Arc::new(Value::Succ(ev(n))),
            NatElim {
                motive,
                zero,
                succ,
                scrutinee,
            } => self.nat_elim(clo(motive, "n"), ev(zero), clo(succ, "k"), &ev(scrutinee)),
            Id(a, x, y) => Arc::new(Value::Id(ev(a), ev(x), ev(y))),
            Refl(x) => Arc::new(Value::Refl(ev(x))),
            J {
                motive,
                base,
                lhs,
                rhs,
                proof,
            } => self.j(clo(motive, "x"), clo(base, "x"), ev(lhs), ev(rhs), &ev(proof)),
            HitForm(n, args) => Arc::new(Value::HitForm(n.clone(), args.iter().map(|a| ev(a)).collect())),
            HitCtor(n, c, args) => {
                let args: Vec<Val> = args.iter().map(|a| ev(a)).collect();
                let info = self
                    .globals
                    .hit(n)
                    .unwrap_or_else(|| panic!("eval: unknown higher inductive type `{n}`"));
                if info.hit.decl.point_index(c).is_some() {
                    Arc::new(Value::HitCtor(n.clone(), c.clone(), args))
                } else {
                    Arc::new(Value::Neutral(Neutral {
                        head: Head::PathCtor(n.clone(), c.clone(), args),
                        spine: Vec::new(),
                    }))
                }
            }
            HitElim {
                hit,
                motive,
                methods,
                scrutinee,
            } => {
                let methods = methods.iter().map(|m| ev(m)).collect();
                self.hit_elim(hit, clo(motive, "x"), methods, &ev(scrutinee))
            }
            Const(c) => match self.globals.lookup(c).map(|e| &**e) {
                Some(Entry::Def { val, .. }) => val.clone(),
                Some(Entry::Postulate { .. }) => Arc::new(Value::Neutral(Neutral {
                    head: Head::Postulate(c.clone()),
                    spine: Vec::new(),
                })),
                None => panic!("eval: {}", EvalError::UnresolvedConstant(c.to_string())),
            },
            Ann(t, _) | Loc(_, t) => ev(t),
            Hole => panic!("eval: unsolved hole"),
        }
    }

    /// Instantiates a closure with values listed outermost-first.
    pub fn inst(&self, c: &Closure, args: &[Val]) -> Val {
        let env = args.iter().fold(c.env.clone(), |env, a| env.extend(a.clone()));
        self.eval(&env, &c.body)
    }

    pub fn inst1(&self, c: &Closure, arg: Val) -> Val {
        self.eval(&c.env.extend(arg), &c.body)
    }

    pub fn apply(&self, f: &Val, arg: Val) -> Val {
        match &**f {
            Value::Lam(c) => self.inst1(c, arg),
            Value::Neutral(n) => n.push(Frame::App(arg)),
            other => panic!("apply: not applicable: {other:?}"),
        }
    }

    pub fn apply_all(&self, f: &Val, args: impl IntoIterator<Item = Val>) -> Val {
        args.into_iter().fold(f.clone(), |f, a| self.apply(&f, a))
    }

    pub fn fst(&self, p: &Val) -> Val {
        match &**p {
            Value::Pair(a, _) => a.clone(),
            Value::Neutral(n) => n.push(Frame::Fst),
            other => panic!("fst: not a pair: {other:?}"),
        }
    }

    pub fn snd(&self, p: &Val) -> Val {
        match &**p {
            Value::Pair(_, b) => b.clone(),
            Value::Neutral(n) => n.push(Frame::Snd),
            other => panic!("snd: not a pair: {other:?}"),
        }
    }

    pub fn sum_elim(&self, motive: Closure, left: Closure, right: Closure, s: &Val) -> Val {
        match &**s {
            Value::Inl(a) => self.inst1(&left, a.clone()),
            Value::Inr(b) => self.inst1(&right, b.clone()),
            Value::Neutral(n) => n.push(Frame::SumElim { motive, left, right }),
            other => panic!("sum elimination on {other:?}"),
        }
    }

    pub fn nat_elim(&self, motive: Closure, zero: Val, succ: Closure, n: &Val) -> Val {
        // Peel successors iteratively so large numerals do not recurse deeply.
        let mut preds = Vec::new();
        let mut cur = n.clone();
        while let Value::Succ(p) = &*cur {
            let next = p.clone();
            preds.push(next.clone());
            cur = next;
        }
        let mut acc = match &*cur {
            Value::Zero => zero,
            Value::Neutral(ne) => ne.push(Frame::NatElim {
                motive,
                zero,
                succ: succ.clone(),
            }),
            other => panic!("nat elimination on {other:?}"),
        };
        for p in preds.into_iter().rev() {
            acc = self.inst(&succ, &[p, acc]);
        }
        acc
    }

    pub fn j(&self, motive: Closure, base: Closure, lhs: Val, rhs: Val, proof: &Val) -> Val {
        match &**proof {
            Value::Refl(_) => self.inst1(&base, lhs),
            Value::Neutral(n) => n.push(Frame::J { motive, base, lhs, rhs }),
            other => panic!("J on {other:?}"),
        }
    }

    pub fn hit_elim(&self, hit: &crate::syntax::Name, motive: Closure, methods: Vec<Val>, s: &Val) -> Val {
        match &**s {
            Value::HitCtor(n, c, args) if n == hit => {
                let info = self.globals.hit(n).expect("hit_elim: unknown type");
                let decl = &info.hit.decl;
                let i = decl.point_index(c).expect("hit_elim: not a point constructor");
                let np = decl.num_params();
                let ctor_args = &args[np..];
                let mut out = methods[i].clone();
                for a in ctor_args {
                    out = self.apply(&out, a.clone());
                }
                for (a, shape) in ctor_args.iter().zip(&info.hit.points[i].args) {
                    if matches!(shape, crate::hit::ArgShape::Recursive) {
                        let ih = self.hit_elim(hit, motive.clone(), methods.clone(), a);
                        out = self.apply(&out, ih);
                    }
                }
                out
            }
            Value::Neutral(n) => n.push(Frame::HitElim {
                hit: hit.clone(),
                motive,
                methods,
            }),
            other => panic!("eliminator of `{hit}` applied to {other:?}"),
        }
    }

    /// Definitional equality of two values in a context of `depth`
    /// variables, with eta for functions and pairs.
    pub fn convertible(&self, depth: Lvl, v: &Val, u: &Val) -> bool {
        use Value::*;
        if Arc::ptr_eq(v, u) {
            return true;
        }
        match (&**v, &**u) {
            (Univ(a), Univ(b)) => a == b,
            (Pi(a1, b1), Pi(a2, b2)) | (Sigma(a1, b1), Sigma(a2, b2)) => {
                self.convertible(depth, a1, a2) && self.conv_closure(depth, b1, b2, 1)
            }
            (Lam(c1), Lam(c2)) => self.conv_closure(depth, c1, c2, 1),
            (Lam(c), Neutral(_)) => {
                let x = Value::var(depth);
                self.convertible(depth + 1, &self.inst1(c, x.clone()), &self.apply(u, x))
            }
            (Neutral(_), Lam(c)) => {
                let x = Value::var(depth);
                self.convertible(depth + 1, &self.apply(v, x.clone()), &self.inst1(c, x))
            }
            (Pair(a1, b1), Pair(a2, b2)) => self.convertible(depth, a1, a2) && self.convertible(depth, b1, b2),
            (Pair(a, b), Neutral(_)) => {
                self.convertible(depth, a, &self.fst(u)) && self.convertible(depth, b, &self.snd(u))
            }
            (Neutral(_), Pair(a, b)) => {
                self.convertible(depth, &self.fst(v), a) && self.convertible(depth, &self.snd(v), b)
            }
            (Sum(a1, b1), Sum(a2, b2)) => self.convertible(depth, a1, a2) && self.convertible(depth, b1, b2),
            (Inl(a), Inl(b)) | (Inr(a), Inr(b)) | (Succ(a), Succ(b)) | (Refl(a), Refl(b)) => {
                self.convertible(depth, a, b)
            }
            (Nat, Nat) | (Zero, Zero) => true,
            (Id(a1, x1, y1), Id(a2, x2, y2)) => {
                self.convertible(depth, a1, a2) && self.convertible(depth, x1, x2) && self.convertible(depth, y1, y2)
            }
            (HitForm(n1, a1), HitForm(n2, a2)) => n1 == n2 && self.conv_all(depth, a1, a2),
            (HitCtor(n1, c1, a1), HitCtor(n2, c2, a2)) => n1 == n2 && c1 == c2 && self.conv_all(depth, a1, a2),
            (Neutral(n1), Neutral(n2)) => self.conv_neutral(depth, n1, n2),
            _ => false,
        }
    }

    fn conv_all(&self, depth: Lvl, a: &[Val], b: &[Val]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.convertible(depth, x, y))
    }

    fn conv_closure(&self, depth: Lvl, c1: &Closure, c2: &Closure, arity: usize) -> bool {
        let vars: Vec<Val> = (0..arity).map(|k| Value::var(depth + k)).collect();
        self.convertible(depth + arity, &self.inst(c1, &vars), &self.inst(c2, &vars))
    }

    fn conv_neutral(&self, depth: Lvl, n1: &Neutral, n2: &Neutral) -> bool {
        let heads = match (&n1.head, &n2.head) {
            (Head::Var(a), Head::Var(b)) => a == b,
            (Head::Postulate(a), Head::Postulate(b)) => a == b,
            (Head::PathCtor(h1, c1, a1), Head::PathCtor(h2, c2, a2)) => {
                h1 == h2 && c1 == c2 && self.conv_all(depth, a1, a2)
            }
            _ => false,
        };
        heads
            && n1.spine.len() == n2.spine.len()
            && n1
                .spine
                .iter()
                .zip(&n2.spine)
                .all(|(f1, f2)| self.conv_frame(depth, f1, f2))
    }

    fn conv_frame(&self, depth: Lvl, f1: &Frame, f2: &Frame) -> bool {
        match (f1, f2) {
            (Frame::App(a), Frame::App(b)) => self.convertible(depth, a, b),
            (Frame::Fst, Frame::Fst) | (Frame::Snd, Frame::Snd) => true,
            (
                Frame::SumElim {
                    motive: m1,
                    left: l1,
                    right: r1,
                },
                Frame::SumElim {
                    motive: m2,
                    left: l2,
                    right: r2,
                },
            ) => {
                self.conv_closure(depth, m1, m2, 1)
                    && self.conv_closure(depth, l1, l2, 1)
                    && self.conv_closure(depth, r1, r2, 1)
            }
            (
                Frame::NatElim {
                    motive: m1,
                    zero: z1,
                    succ: s1,
                },
                Frame::NatElim {
                    motive: m2,
                    zero: z2,
                    succ: s2,
                },
            ) => {
                self.conv_closure(depth, m1, m2, 1)
                    && self.convertible(depth, z1, z2)
                    && self.conv_closure(depth, s1, s2, 2)
            }
            (
                Frame::J {
                    motive: m1,
                    base: b1,
                    lhs: l1,
                    rhs: r1,
                },
                Frame::J {
                    motive: m2,
                    base: b2,
                    lhs: l2,
                    rhs: r2,
                },
            ) => {
                self.conv_closure(depth, m1, m2, 3)
                    && self.conv_closure(depth, b1, b2, 1)
                    && self.convertible(depth, l1, l2)
                    && self.convertible(depth, r1, r2)
            }
            (
                Frame::HitElim {
                    hit: h1,
                    motive: m1,
                    methods: ms1,
                },
                Frame::HitElim {
                    hit: h2,
                    motive: m2,
                    methods: ms2,
                },
            ) => h1 == h2 && self.conv_closure(depth, m1, m2, 1) && self.conv_all(depth, ms1, ms2),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;

    fn closed(t: &Term) -> Val {
        let g = GlobalEnv::new();
        Eval::new(&g).eval(&Env::new(), t)
    }

    #[test]
    fn projection_of_pair() {
        let t = Term::Fst(Arc::new(Term::Pair(Arc::new(Term::Zero), Arc::new(Term::Nat))));
        assert!(matches!(&*closed(&t), Value::Zero));
    }

    #[test]
    fn identity_beta() {
        let t = Term::app(Term::lam("x", Term::Var(0)), Term::Zero);
        assert!(matches!(&*closed(&t), Value::Zero));
    }

    #[test]
    fn neutral_application_extends_spine() {
        let g = GlobalEnv::new();
        let ev = Eval::new(&g);
        let out = ev.apply(&Value::var(0), Arc::new(Value::Zero));
        let n = out.as_neutral().unwrap();
        assert!(matches!(n.head, Head::Var(0)));
        assert!(matches!(n.spine.as_slice(), [Frame::App(_)]));
    }

    #[test]
    fn inl_and_inr_are_not_convertible() {
        let g = GlobalEnv::new();
        let ev = Eval::new(&g);
        let a = Arc::new(Value::Zero);
        let l = Arc::new(Value::Inl(a.clone()));
        let r = Arc::new(Value::Inr(a));
        assert!(!ev.convertible(0, &l, &r));
        assert!(ev.convertible(0, &l, &l.clone()));
    }

    #[test]
    fn eta_for_functions_and_pairs() {
        let g = GlobalEnv::new();
        let ev = Eval::new(&g);
        let f = Value::var(0);
        let eta = ev.eval(
            &Env::new().extend(f.clone()),
            &Term::lam("x", Term::app(Term::Var(1), Term::Var(0))),
        );
        assert!(ev.convertible(1, &f, &eta));
        assert!(ev.convertible(1, &eta, &f));
        let p = Value::var(0);
        let pair = Arc::new(Value::Pair(ev.fst(&p), ev.snd(&p)));
        assert!(ev.convertible(1, &p, &pair));
    }

    #[test]
    fn j_computes_on_refl() {
        // J(C, x. succ x, 0, 0, refl 0) ~> succ 0
        let t = Term::J {
            motive: Arc::new(Term::Nat),
            base: Arc::new(Term::succ(Term::Var(0))),
            lhs: Arc::new(Term::Zero),
            rhs: Arc::new(Term::Zero),
            proof: Arc::new(Term::refl(Term::Zero)),
        };
        match &*closed(&t) {
            Value::Succ(z) => assert!(matches!(**z, Value::Zero)),
            other => panic!("{other:?}"),
        }
    }
}

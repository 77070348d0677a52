//! Read-back from values to normal-form terms.
//!
//! [`quote`] is untyped and produces beta-normal terms. [`Reader`] is
//! type-directed and additionally eta-expands at function and pair types,
//! which is what `normalize` uses.

use std::sync::Arc;

use crate::env::GlobalEnv;
use crate::eval::Eval;
use crate::syntax::{Name, Term};
use crate::value::{Closure, Env, Frame, Head, Lvl, Neutral, Val, Value};

/// Reads a value back to a beta-normal term in a context of `depth`
/// variables.
pub fn quote(globals: &GlobalEnv, depth: Lvl, v: &Val) -> Term {
    Quoter { ev: Eval::new(globals) }.value(depth, v)
}

struct Quoter<'g> {
    ev: Eval<'g>,
}

impl Quoter<'_> {
    fn closure(&self, depth: Lvl, c: &Closure, arity: usize) -> Arc<Term> {
        let vars: Vec<Val> = (0..arity).map(|k| Value::var(depth + k)).collect();
        Arc::new(self.value(depth + arity, &self.ev.inst(c, &vars)))
    }

    fn value(&self, depth: Lvl, v: &Val) -> Term {
        let q = |v: &Val| Arc::new(self.value(depth, v));
        match &**v {
            Value::Univ(l) => Term::Univ(*l),
            Value::Pi(a, b) => Term::Pi(b.hint.clone(), q(a), self.closure(depth, b, 1)),
            Value::Lam(b) => Term::Lam(b.hint.clone(), self.closure(depth, b, 1)),
            Value::Sigma(a, b) => Term::Sigma(b.hint.clone(), q(a), self.closure(depth, b, 1)),
            Value::Pair(a, b) => Term::Pair(q(a), q(b)),
            Value::Sum(a, b) => Term::Sum(q(a), q(b)),
            Value::Inl(a) => Term::Inl(q(a)),
            Value::Inr(a) => Term::Inr(q(a)),
            Value::Nat => Term::Nat,
            Value::Zero => Term::Zero,
            Value::Succ(n) => Term::Succ(q(n)),
            Value::Id(a, x, y) => Term::Id(q(a), q(x), q(y)),
            Value::Refl(x) => Term::Refl(q(x)),
            Value::HitForm(n, args) => Term::HitForm(n.clone(), args.iter().map(q).collect()),
            Value::HitCtor(n, c, args) => Term::HitCtor(n.clone(), c.clone(), args.iter().map(q).collect()),
            Value::Neutral(ne) => self.neutral(depth, ne),
        }
    }

    fn neutral(&self, depth: Lvl, ne: &Neutral) -> Term {
        let q = |v: &Val| Arc::new(self.value(depth, v));
        let mut t = match &ne.head {
            Head::Var(l) => Term::Var(depth - 1 - l),
            Head::Postulate(c) => Term::Const(c.clone()),
            Head::PathCtor(n, c, args) => Term::HitCtor(n.clone(), c.clone(), args.iter().map(q).collect()),
        };
        for frame in &ne.spine {
            let head = Arc::new(t);
            t = match frame {
                Frame::App(a) => Term::App(head, q(a)),
                Frame::Fst => Term::Fst(head),
                Frame::Snd => Term::Snd(head),
                Frame::SumElim { motive, left, right } => Term::SumElim {
                    motive: self.closure(depth, motive, 1),
                    left: self.closure(depth, left, 1),
                    right: self.closure(depth, right, 1),
                    scrutinee: head,
                },
                Frame::NatElim { motive, zero, succ } => Term::NatElim {
                    motive: self.closure(depth, motive, 1),
                    zero: q(zero),
                    succ: self.closure(depth, succ, 2),
                    scrutinee: head,
                },
                Frame::J { motive, base, lhs, rhs } => Term::J {
                    motive: self.closure(depth, motive, 3),
                    base: self.closure(depth, base, 1),
                    lhs: q(lhs),
                    rhs: q(rhs),
                    proof: head,
                },
                Frame::HitElim { hit, motive, methods } => Term::HitElim {
                    hit: hit.clone(),
                    motive: self.closure(depth, motive, 1),
                    methods: methods.iter().map(q).collect(),
                    scrutinee: head,
                },
            };
        }
        t
    }
}

/// Type-directed read-back. `types` holds the type of each bound variable
/// by level.
pub struct Reader<'g> {
    ev: Eval<'g>,
    types: Vec<Val>,
}

impl<'g> Reader<'g> {
    pub fn new(globals: &'g GlobalEnv, types: Vec<Val>) -> Self {
        Reader {
            ev: Eval::new(globals),
            types,
        }
    }

    fn depth(&self) -> Lvl {
        self.types.len()
    }

    fn fallback(&self, v: &Val) -> Term {
        quote(self.ev.globals, self.depth(), v)
    }

    /// Runs `f` with a fresh variable of type `ty` in scope.
    fn under<R>(&mut self, ty: Val, f: impl FnOnce(&mut Self, Val) -> R) -> R {
        let x = Value::var(self.depth());
        self.types.push(ty);
        let r = f(self, x);
        self.types.pop();
        r
    }

    /// Reads back `v`, which has type `ty`, in eta-long normal form.
    pub fn read(&mut self, ty: &Val, v: &Val) -> Term {
        match &**ty {
            Value::Pi(dom, cod) => {
                let hint = match &**v {
                    Value::Lam(c) => c.hint.clone(),
                    _ => cod.hint.clone(),
                };
                let ev = self.ev;
                let body = self.under(dom.clone(), |r, x| {
                    let cod_ty = ev.inst1(cod, x.clone());
                    let fx = ev.apply(v, x);
                    r.read(&cod_ty, &fx)
                });
                Term::Lam(hint, Arc::new(body))
            }
            Value::Sigma(a, b) => {
                let first = self.ev.fst(v);
                let second = self.ev.snd(v);
                let b_ty = self.ev.inst1(b, first.clone());
                let t1 = self.read(a, &first);
                let t2 = self.read(&b_ty, &second);
                Term::Pair(Arc::new(t1), Arc::new(t2))
            }
            Value::Univ(_) => self.read_type(v),
            _ => match (&**v, &**ty) {
                (Value::Zero, _) => Term::Zero,
                (Value::Succ(_), _) => {
                    let mut n = 0;
                    let mut cur = v.clone();
                    while let Value::Succ(p) = &*cur.clone() {
                        n += 1;
                        cur = p.clone();
                    }
                    let base = self.read(ty, &cur);
                    (0..n).fold(base, |t, _| Term::succ(t))
                }
                (Value::Inl(a), Value::Sum(l, _)) => Term::Inl(Arc::new(self.read(l, a))),
                (Value::Inr(b), Value::Sum(_, r)) => Term::Inr(Arc::new(self.read(r, b))),
                (Value::Refl(x), Value::Id(a, _, _)) => Term::Refl(Arc::new(self.read(a, x))),
                (Value::HitCtor(n, c, args), _) => {
                    let tys = self.ctor_telescope(n, c, args);
                    Term::HitCtor(n.clone(), c.clone(), self.read_args(&tys, args))
                }
                (Value::Neutral(ne), _) => self.read_neutral(ne).0,
                _ => self.fallback(v),
            },
        }
    }

    /// Reads back a value that is itself a type.
    pub fn read_type(&mut self, v: &Val) -> Term {
        match &**v {
            Value::Univ(l) => Term::Univ(*l),
            Value::Pi(a, b) | Value::Sigma(a, b) => {
                let dom = self.read_type(a);
                let ev = self.ev;
                let cod = self.under(a.clone(), |r, x| r.read_type(&ev.inst1(b, x)));
                if matches!(&**v, Value::Pi(..)) {
                    Term::Pi(b.hint.clone(), Arc::new(dom), Arc::new(cod))
                } else {
                    Term::Sigma(b.hint.clone(), Arc::new(dom), Arc::new(cod))
                }
            }
            Value::Sum(a, b) => Term::Sum(Arc::new(self.read_type(a)), Arc::new(self.read_type(b))),
            Value::Nat => Term::Nat,
            Value::Id(a, x, y) => {
                let ta = self.read_type(a);
                let tx = self.read(a, x);
                let ty = self.read(a, y);
                Term::id(ta, tx, ty)
            }
            Value::HitForm(n, args) => {
                let tys = self.param_telescope(n, args);
                Term::HitForm(n.clone(), self.read_args(&tys, args))
            }
            Value::Neutral(ne) => self.read_neutral(ne).0,
            _ => self.fallback(v),
        }
    }

    fn read_args(&mut self, tys: &[Val], args: &[Val]) -> Vec<Arc<Term>> {
        tys.iter().zip(args).map(|(t, a)| Arc::new(self.read(t, a))).collect()
    }

    /// Types of a telescope of terms evaluated against the given values.
    fn telescope(&self, types: &[&Term], args: &[Val]) -> Vec<Val> {
        let mut env = Env::new();
        let mut out = Vec::new();
        for (ty, a) in types.iter().zip(args) {
            out.push(self.ev.eval(&env, ty));
            env = env.extend(a.clone());
        }
        out
    }

    fn param_telescope(&self, hit: &Name, args: &[Val]) -> Vec<Val> {
        let Some(info) = self.ev.globals.hit(hit) else {
            return Vec::new();
        };
        let tys: Vec<&Term> = info.hit.decl.params.iter().map(|(_, t)| t).collect();
        self.telescope(&tys, args)
    }

    fn ctor_telescope(&self, hit: &Name, ctor: &Name, args: &[Val]) -> Vec<Val> {
        let Some(info) = self.ev.globals.hit(hit) else {
            return Vec::new();
        };
        let decl = &info.hit.decl;
        let Some(c) = decl.find_ctor(ctor) else {
            return Vec::new();
        };
        let tys: Vec<&Term> = decl.params.iter().chain(c.args.iter()).map(|(_, t)| t).collect();
        self.telescope(&tys, args)
    }

    fn read_closure_type(&mut self, doms: &[Val], c: &Closure) -> Term {
        // Each domain is already evaluated; the closure binds one variable per
        // domain.
        fn go(r: &mut Reader<'_>, doms: &[Val], c: &Closure, acc: Vec<Val>) -> Term {
            match doms.split_first() {
                None => {
                    let v = r.ev.inst(c, &acc);
                    r.read_type(&v)
                }
                Some((d, rest)) => r.under(d.clone(), |r, x| {
                    let mut acc = acc;
                    acc.push(x);
                    go(r, rest, c, acc)
                }),
            }
        }
        go(self, doms, c, Vec::new())
    }

    /// Reads a neutral, returning its term and type.
    pub fn read_neutral(&mut self, ne: &Neutral) -> (Term, Val) {
        let ev = self.ev;
        let (mut t, mut ty, mut cur) = match &ne.head {
            Head::Var(l) => {
                let ty = self.types.get(*l).cloned();
                let Some(ty) = ty else {
                    let v = Arc::new(Value::Neutral(ne.clone()));
                    return (self.fallback(&v), Arc::new(Value::Univ(crate::syntax::Level(0))));
                };
                (Term::Var(self.depth() - 1 - l), ty, Value::var(*l))
            }
            Head::Postulate(c) => {
                let ty = ev
                    .globals
                    .lookup(c)
                    .map(|e| e.ty_val().clone())
                    .expect("read-back: unknown postulate");
                (
                    Term::Const(c.clone()),
                    ty,
                    ev.eval(&Env::new(), &Term::Const(c.clone())),
                )
            }
            Head::PathCtor(n, c, args) => {
                let info = ev.globals.hit(n).expect("read-back: unknown type").clone();
                let decl = &info.hit.decl;
                let ctor = decl.find_ctor(c).expect("read-back: unknown constructor");
                let tys: Vec<&Term> = decl.params.iter().chain(ctor.args.iter()).map(|(_, t)| t).collect();
                let arg_tys = self.telescope(&tys, args);
                let env: Env = args.iter().cloned().collect();
                let target = ctor.target.as_ref().expect("path constructor without target");
                let ty = ev.eval(&env, target);
                let term = Term::HitCtor(n.clone(), c.clone(), self.read_args(&arg_tys, args));
                let cur = Arc::new(Value::Neutral(Neutral {
                    head: ne.head.clone(),
                    spine: Vec::new(),
                }));
                (term, ty, cur)
            }
        };
        for frame in &ne.spine {
            let head = Arc::new(t);
            let next_cur;
            match (frame, &*ty.clone()) {
                (Frame::App(a), Value::Pi(dom, cod)) => {
                    let ta = self.read(dom, a);
                    t = Term::App(head, Arc::new(ta));
                    ty = ev.inst1(cod, a.clone());
                    next_cur = ev.apply(&cur, a.clone());
                }
                (Frame::Fst, Value::Sigma(a, _)) => {
                    t = Term::Fst(head);
                    ty = a.clone();
                    next_cur = ev.fst(&cur);
                }
                (Frame::Snd, Value::Sigma(_, b)) => {
                    t = Term::Snd(head);
                    ty = ev.inst1(b, ev.fst(&cur));
                    next_cur = ev.snd(&cur);
                }
                (Frame::SumElim { motive, left, right }, Value::Sum(a, b)) => {
                    let tm = self.read_closure_type(&[ty.clone()], motive);
                    let tl = self.under(a.clone(), |r, x| {
                        let mty = ev.inst1(motive, Arc::new(Value::Inl(x.clone())));
                        r.read(&mty, &ev.inst1(left, x))
                    });
                    let tr = self.under(b.clone(), |r, x| {
                        let mty = ev.inst1(motive, Arc::new(Value::Inr(x.clone())));
                        r.read(&mty, &ev.inst1(right, x))
                    });
                    t = Term::SumElim {
                        motive: Arc::new(tm),
                        left: Arc::new(tl),
                        right: Arc::new(tr),
                        scrutinee: head,
                    };
                    next_cur = ev.sum_elim(motive.clone(), left.clone(), right.clone(), &cur);
                    ty = ev.inst1(motive, cur.clone());
                }
                (Frame::NatElim { motive, zero, succ }, _) => {
                    let nat = Arc::new(Value::Nat);
                    let tm = self.read_closure_type(std::slice::from_ref(&nat), motive);
                    let zty = ev.inst1(motive, Arc::new(Value::Zero));
                    let tz = self.read(&zty, zero);
                    let ts = self.under(nat, |r, k| {
                        let ihty = ev.inst1(motive, k.clone());
                        r.under(ihty, |r, ih| {
                            let sty = ev.inst1(motive, Arc::new(Value::Succ(k.clone())));
                            r.read(&sty, &ev.inst(succ, &[k, ih]))
                        })
                    });
                    t = Term::NatElim {
                        motive: Arc::new(tm),
                        zero: Arc::new(tz),
                        succ: Arc::new(ts),
                        scrutinee: head,
                    };
                    next_cur = ev.nat_elim(motive.clone(), zero.clone(), succ.clone(), &cur);
                    ty = ev.inst1(motive, cur.clone());
                }
                (Frame::J { motive, base, lhs, rhs }, Value::Id(a, _, _)) => {
                    let tm = self.under(a.clone(), |r, x| {
                        r.under(a.clone(), |r, y| {
                            let pty = Arc::new(Value::Id(a.clone(), x.clone(), y.clone()));
                            r.under(pty, |r, p| r.read_type(&ev.inst(motive, &[x, y, p])))
                        })
                    });
                    let tb = self.under(a.clone(), |r, x| {
                        let bty = ev.inst(motive, &[x.clone(), x.clone(), Arc::new(Value::Refl(x.clone()))]);
                        r.read(&bty, &ev.inst1(base, x))
                    });
                    let tl = self.read(a, lhs);
                    let tr = self.read(a, rhs);
                    t = Term::J {
                        motive: Arc::new(tm),
                        base: Arc::new(tb),
                        lhs: Arc::new(tl),
                        rhs: Arc::new(tr),
                        proof: head,
                    };
                    next_cur = ev.j(motive.clone(), base.clone(), lhs.clone(), rhs.clone(), &cur);
                    ty = ev.inst(motive, &[lhs.clone(), rhs.clone(), cur.clone()]);
                }
                (Frame::HitElim { hit, motive, methods }, Value::HitForm(_, params)) => {
                    let info = ev.globals.hit(hit).expect("read-back: unknown type").clone();
                    let tm = self.read_closure_type(&[ty.clone()], motive);
                    let mut env: Env = params.iter().cloned().collect();
                    env = env.extend(Arc::new(Value::Lam(motive.clone())));
                    let mut tms = Vec::new();
                    for (m, mty) in methods.iter().zip(&info.method_types) {
                        let mty_val = ev.eval(&env, mty);
                        tms.push(Arc::new(self.read(&mty_val, m)));
                        env = env.extend(m.clone());
                    }
                    t = Term::HitElim {
                        hit: hit.clone(),
                        motive: Arc::new(tm),
                        methods: tms,
                        scrutinee: head,
                    };
                    next_cur = ev.hit_elim(hit, motive.clone(), methods.clone(), &cur);
                    ty = ev.inst1(motive, cur.clone());
                }
                _ => {
                    // Ill-typed spine: only possible through a kernel bug.
                    let v = Arc::new(Value::Neutral(ne.clone()));
                    return (self.fallback(&v), ty);
                }
            }
            cur = next_cur;
        }
        (t, ty)
    }
}

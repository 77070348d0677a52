//! Bidirectional type checking and declaration checking.
//!
//! Introduction forms are checked against a known type, elimination forms
//! infer. Every entry point returns the checked term with its holes filled.

use std::sync::Arc;

use crate::diagnostic::{Diagnostic, ErrorClass};
use crate::elim;
use crate::env::{Entry, GlobalEnv, HitInfo};
use crate::eval::Eval;
use crate::frontend::pretty;
use crate::hit::{validate_hit_decl, CtorDecl, HitDecl, HitError};
use crate::quote::{quote, Reader};
use crate::syntax::{name, shift, Level, Name, RcTerm, Span, Term};
use crate::value::{Closure, Env, Val, Value};

pub type Result<T> = std::result::Result<T, Diagnostic>;

/// Local typing context. `env` maps each bound variable to its value (a
/// fresh neutral, or the argument of a checked beta-redex).
#[derive(Debug, Clone, Default)]
pub struct Ctx {
    pub env: Env,
    pub types: Vec<Val>,
    pub names: Vec<Name>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    pub fn depth(&self) -> usize {
        self.types.len()
    }

    pub fn bind(&self, hint: Name, ty: Val) -> Ctx {
        self.define(hint, ty, Value::var(self.depth()))
    }

    pub fn define(&self, hint: Name, ty: Val, val: Val) -> Ctx {
        let mut types = self.types.clone();
        types.push(ty);
        let mut names = self.names.clone();
        names.push(hint);
        Ctx {
            env: self.env.extend(val),
            types,
            names,
        }
    }
}

fn univ(l: Level) -> Val {
    Arc::new(Value::Univ(l))
}

fn nat() -> Val {
    Arc::new(Value::Nat)
}

fn rc(t: Term) -> RcTerm {
    Arc::new(t)
}

pub struct Checker<'g> {
    globals: &'g GlobalEnv,
    ev: Eval<'g>,
    span: Option<Span>,
}

impl<'g> Checker<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Self {
        Checker {
            globals,
            ev: Eval::new(globals),
            span: None,
        }
    }

    /// Location reported by errors that arise outside any located subterm.
    pub fn with_span(mut self, span: Span) -> Self {
        self.span = Some(span);
        self
    }

    pub fn eval(&self, ctx: &Ctx, t: &Term) -> Val {
        self.ev.eval(&ctx.env, t)
    }

    fn closure(&self, ctx: &Ctx, body: &Term, hint: &str) -> Closure {
        Closure {
            env: ctx.env.clone(),
            body: rc(body.clone()),
            hint: name(hint),
        }
    }

    /// Prints a type value in normal form.
    pub fn show(&self, ctx: &Ctx, ty: &Val) -> String {
        let t = Reader::new(self.globals, ctx.types.clone()).read_type(ty);
        pretty::show(&t, &ctx.names)
    }

    fn err(&self, class: ErrorClass, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(class, self.span, message)
    }

    fn mismatch(&self, ctx: &Ctx, message: &str, expected: String, actual: &Val) -> Diagnostic {
        Diagnostic::mismatch(self.span, message, expected, self.show(ctx, actual))
    }

    /// The error for a term of type `actual` used at type `expected`.
    fn conversion_error(&self, ctx: &Ctx, actual: &Val, expected: &Val) -> Diagnostic {
        if let (Value::Univ(a), Value::Univ(e)) = (&**actual, &**expected) {
            return self.err(
                ErrorClass::UniverseError,
                format!("this type lives in U {a}, but U {e} was expected (universes are not cumulative and U {e} is not a point of itself)"),
            );
        }
        Diagnostic::mismatch(
            self.span,
            "type mismatch",
            self.show(ctx, expected),
            self.show(ctx, actual),
        )
    }

    fn located<R>(&mut self, span: Span, f: impl FnOnce(&mut Self) -> R) -> R {
        let saved = self.span.replace(span);
        let r = f(self);
        self.span = saved;
        r
    }

    fn hit_info(&self, hit: &Name) -> Result<Arc<HitInfo>> {
        self.globals.hit(hit).cloned().ok_or_else(|| {
            self.err(
                ErrorClass::UnboundName,
                format!("unknown higher inductive type `{hit}`"),
            )
        })
    }

    /// Checks `t` as a type and returns its universe level.
    pub fn check_type(&mut self, ctx: &Ctx, t: &Term) -> Result<(Term, Level)> {
        if let Term::Loc(sp, inner) = t {
            let sp = *sp;
            let (t2, l) = self.located(sp, |c| c.check_type(ctx, inner))?;
            return Ok((Term::Loc(sp, rc(t2)), l));
        }
        if matches!(t, Term::Hole) {
            return Err(self.err(ErrorClass::UnsolvedHole, "cannot determine this type from its context"));
        }
        let (t2, ty) = self.infer(ctx, t)?;
        match &*ty {
            Value::Univ(l) => Ok((t2, *l)),
            _ => Err(self.mismatch(ctx, "expected a type", "U _".into(), &ty)),
        }
    }

    /// Checks each argument against a telescope of closed types, returning
    /// the checked arguments and the environment of their values.
    fn check_telescope(&mut self, ctx: &Ctx, tele: &[&Term], args: &[RcTerm]) -> Result<(Vec<RcTerm>, Env)> {
        if tele.len() != args.len() {
            return Err(Diagnostic::mismatch(
                self.span,
                "wrong number of arguments",
                format!("{} arguments", tele.len()),
                format!("{} arguments", args.len()),
            ));
        }
        let mut tenv = Env::new();
        let mut out = Vec::with_capacity(args.len());
        for (ty, a) in tele.iter().zip(args) {
            let tyv = self.ev.eval(&tenv, ty);
            let a2 = self.check(ctx, a, &tyv)?;
            tenv = tenv.extend(self.eval(ctx, &a2));
            out.push(rc(a2));
        }
        Ok((out, tenv))
    }

    pub fn infer(&mut self, ctx: &Ctx, t: &Term) -> Result<(Term, Val)> {
        match t {
            Term::Loc(sp, inner) => {
                let sp = *sp;
                let (t2, ty) = self.located(sp, |c| c.infer(ctx, inner))?;
                Ok((Term::Loc(sp, rc(t2)), ty))
            }
            Term::Var(i) => {
                let lvl = ctx
                    .depth()
                    .checked_sub(i + 1)
                    .unwrap_or_else(|| panic!("infer: variable {i} out of scope"));
                Ok((t.clone(), ctx.types[lvl].clone()))
            }
            Term::Univ(l) => Ok((t.clone(), univ(l.succ()))),
            Term::Pi(h, a, b) | Term::Sigma(h, a, b) => {
                let (a2, la) = self.check_type(ctx, a)?;
                let av = self.eval(ctx, &a2);
                let (b2, lb) = self.check_type(&ctx.bind(h.clone(), av), b)?;
                let t2 = match t {
                    Term::Pi(..) => Term::Pi(h.clone(), rc(a2), rc(b2)),
                    _ => Term::Sigma(h.clone(), rc(a2), rc(b2)),
                };
                Ok((t2, univ(la.max(lb))))
            }
            Term::Lam(..) => Err(self.err(
                ErrorClass::UnsolvedHole,
                "cannot infer the type of a function; add a type annotation",
            )),
            Term::App(f, a) => {
                if let Term::Lam(h, body) = f.unloc() {
                    let (a2, aty) = self.infer(ctx, a)?;
                    let av = self.eval(ctx, &a2);
                    let inner = ctx.define(h.clone(), aty, av);
                    let (b2, bty) = self.infer(&inner, body)?;
                    return Ok((Term::App(rc(Term::Lam(h.clone(), rc(b2))), rc(a2)), bty));
                }
                let (f2, fty) = self.infer(ctx, f)?;
                match &*fty {
                    Value::Pi(dom, cod) => {
                        let a2 = self.check(ctx, a, dom)?;
                        let av = self.eval(ctx, &a2);
                        Ok((Term::App(rc(f2), rc(a2)), self.ev.inst1(cod, av)))
                    }
                    _ => Err(self.err(
                        ErrorClass::NotAFunction,
                        format!("a term of type {} cannot be applied", self.show(ctx, &fty)),
                    )),
                }
            }
            Term::Pair(a, b) => {
                let (a2, at) = self.infer(ctx, a)?;
                let (b2, bt) = self.infer(ctx, b)?;
                let bterm = quote(self.globals, ctx.depth(), &bt);
                let cod = Closure {
                    env: ctx.env.clone(),
                    body: rc(shift(&bterm, 1, 0)),
                    hint: name("_"),
                };
                Ok((Term::Pair(rc(a2), rc(b2)), Arc::new(Value::Sigma(at, cod))))
            }
            Term::Fst(p) | Term::Snd(p) => {
                let (p2, pty) = self.infer(ctx, p)?;
                let Value::Sigma(a, b) = &*pty else {
                    return Err(self.err(
                        ErrorClass::NotAPair,
                        format!("a term of type {} has no projections", self.show(ctx, &pty)),
                    ));
                };
                if let Term::Fst(_) = t {
                    Ok((Term::Fst(rc(p2)), a.clone()))
                } else {
                    let first = self.ev.fst(&self.eval(ctx, &p2));
                    Ok((Term::Snd(rc(p2)), self.ev.inst1(b, first)))
                }
            }
            Term::Sum(a, b) => {
                let (a2, la) = self.check_type(ctx, a)?;
                let (b2, lb) = self.check_type(ctx, b)?;
                Ok((Term::Sum(rc(a2), rc(b2)), univ(la.max(lb))))
            }
            Term::Inl(_) | Term::Inr(_) => Err(self.err(
                ErrorClass::UnsolvedHole,
                "cannot infer the type of an injection; add a type annotation",
            )),
            Term::SumElim {
                motive,
                left,
                right,
                scrutinee,
            } => {
                let (s2, st) = self.infer(ctx, scrutinee)?;
                let (l, r) = match &*st {
                    Value::Sum(l, r) => (l.clone(), r.clone()),
                    _ => return Err(self.mismatch(ctx, "Sum-elim needs a sum", "Sum _ _".into(), &st)),
                };
                let (m2, _) = self.check_type(&ctx.bind(name("x"), st.clone()), motive)?;
                let mc = self.closure(ctx, &m2, "x");
                let x = Value::var(ctx.depth());
                let lty = self.ev.inst1(&mc, Arc::new(Value::Inl(x.clone())));
                let left2 = self.check(&ctx.bind(name("a"), l), left, &lty)?;
                let rty = self.ev.inst1(&mc, Arc::new(Value::Inr(x)));
                let right2 = self.check(&ctx.bind(name("b"), r), right, &rty)?;
                let ty = self.ev.inst1(&mc, self.eval(ctx, &s2));
                Ok((
                    Term::SumElim {
                        motive: rc(m2),
                        left: rc(left2),
                        right: rc(right2),
                        scrutinee: rc(s2),
                    },
                    ty,
                ))
            }
            Term::Nat => Ok((Term::Nat, univ(Level(0)))),
            Term::Zero => Ok((Term::Zero, nat())),
            Term::Succ(n) => {
                let n2 = self.check(ctx, n, &nat())?;
                Ok((Term::Succ(rc(n2)), nat()))
            }
            Term::NatElim {
                motive,
                zero,
                succ,
                scrutinee,
            } => {
                let s2 = self.check(ctx, scrutinee, &nat())?;
                let (m2, _) = self.check_type(&ctx.bind(name("n"), nat()), motive)?;
                let mc = self.closure(ctx, &m2, "n");
                let zero2 = self.check(ctx, zero, &self.ev.inst1(&mc, Arc::new(Value::Zero)))?;
                let k = Value::var(ctx.depth());
                let ih_ty = self.ev.inst1(&mc, k.clone());
                let succ_ctx = ctx.bind(name("k"), nat()).bind(name("ih"), ih_ty);
                let succ_ty = self.ev.inst1(&mc, Arc::new(Value::Succ(k)));
                let succ2 = self.check(&succ_ctx, succ, &succ_ty)?;
                let ty = self.ev.inst1(&mc, self.eval(ctx, &s2));
                Ok((
                    Term::NatElim {
                        motive: rc(m2),
                        zero: rc(zero2),
                        succ: rc(succ2),
                        scrutinee: rc(s2),
                    },
                    ty,
                ))
            }
            Term::Id(a, x, y) => {
                let (a2, l) = self.check_type(ctx, a)?;
                let av = self.eval(ctx, &a2);
                let x2 = self.check(ctx, x, &av)?;
                let y2 = self.check(ctx, y, &av)?;
                Ok((Term::Id(rc(a2), rc(x2), rc(y2)), univ(l)))
            }
            Term::Refl(x) => {
                if matches!(x.unloc(), Term::Hole) {
                    return Err(self.err(
                        ErrorClass::UnsolvedHole,
                        "cannot determine the point of `refl _` without an expected type",
                    ));
                }
                let (x2, a) = self.infer(ctx, x)?;
                let xv = self.eval(ctx, &x2);
                Ok((Term::Refl(rc(x2)), Arc::new(Value::Id(a, xv.clone(), xv))))
            }
            Term::J {
                motive,
                base,
                lhs,
                rhs,
                proof,
            } => self.infer_j(ctx, motive, base, lhs, rhs, proof),
            Term::HitForm(n, args) => {
                let info = self.hit_info(n)?;
                let decl = &info.hit.decl;
                let tele: Vec<&Term> = decl.params.iter().map(|(_, ty)| ty).collect();
                let (args2, _) = self.check_telescope(ctx, &tele, args)?;
                Ok((Term::HitForm(n.clone(), args2), univ(decl.level)))
            }
            Term::HitCtor(n, c, args) => {
                let info = self.hit_info(n)?;
                let decl = &info.hit.decl;
                let ctor = decl
                    .find_ctor(c)
                    .ok_or_else(|| self.err(ErrorClass::UnboundName, format!("`{c}` is not a constructor of `{n}`")))?;
                let tele: Vec<&Term> = decl.params.iter().chain(&ctor.args).map(|(_, ty)| ty).collect();
                let (args2, tenv) = self.check_telescope(ctx, &tele, args)?;
                let target = match &ctor.target {
                    Some(target) => target.clone(),
                    None => decl.self_type(ctor.args.len()),
                };
                let ty = self.ev.eval(&tenv, &target);
                Ok((Term::HitCtor(n.clone(), c.clone(), args2), ty))
            }
            Term::HitElim {
                hit,
                motive,
                methods,
                scrutinee,
            } => {
                let info = self.hit_info(hit)?;
                let (s2, st) = self.infer(ctx, scrutinee)?;
                let params = match &*st {
                    Value::HitForm(n, ps) if n == hit => ps.clone(),
                    _ => {
                        let holes = " _".repeat(info.hit.decl.num_params());
                        return Err(self.mismatch(
                            ctx,
                            &format!("the eliminator of `{hit}` needs a point of `{hit}`"),
                            format!("{hit}{holes}"),
                            &st,
                        ));
                    }
                };
                let (m2, _) = self.check_type(&ctx.bind(name("x"), st.clone()), motive)?;
                let mc = self.closure(ctx, &m2, "x");
                if methods.len() != info.method_types.len() {
                    return Err(Diagnostic::mismatch(
                        self.span,
                        format!("wrong number of methods for the eliminator of `{hit}`"),
                        format!("{} methods", info.method_types.len()),
                        format!("{} methods", methods.len()),
                    ));
                }
                let mut menv: Env = params.into_iter().collect();
                menv = menv.extend(Arc::new(Value::Lam(mc.clone())));
                let mut methods2 = Vec::with_capacity(methods.len());
                for (m, mt) in methods.iter().zip(&info.method_types) {
                    let mty = self.ev.eval(&menv, mt);
                    let m2 = self.check(ctx, m, &mty)?;
                    menv = menv.extend(self.eval(ctx, &m2));
                    methods2.push(rc(m2));
                }
                let ty = self.ev.inst1(&mc, self.eval(ctx, &s2));
                Ok((
                    Term::HitElim {
                        hit: hit.clone(),
                        motive: rc(m2),
                        methods: methods2,
                        scrutinee: rc(s2),
                    },
                    ty,
                ))
            }
            Term::Const(c) => match self.globals.lookup(c) {
                Some(entry) => Ok((t.clone(), entry.ty_val().clone())),
                None => Err(self.err(ErrorClass::UnboundName, format!("unknown constant `{c}`"))),
            },
            Term::Ann(e, ty) => {
                let (ty2, _) = self.check_type(ctx, ty)?;
                let tyv = self.eval(ctx, &ty2);
                let e2 = self.check(ctx, e, &tyv)?;
                Ok((Term::Ann(rc(e2), rc(ty2)), tyv))
            }
            Term::Hole => Err(self.err(
                ErrorClass::UnsolvedHole,
                "cannot determine the value of this hole from its context",
            )),
        }
    }

    fn infer_j(
        &mut self,
        ctx: &Ctx,
        motive: &Term,
        base: &Term,
        lhs: &Term,
        rhs: &Term,
        proof: &Term,
    ) -> Result<(Term, Val)> {
        let (p2, pty) = self.infer(ctx, proof)?;
        let (a, x, y) = match &*pty {
            Value::Id(a, x, y) => (a.clone(), x.clone(), y.clone()),
            _ => return Err(self.mismatch(ctx, "J needs an identification", "_ = _ in _".into(), &pty)),
        };
        let endpoint = |c: &mut Self, e: &Term, default: &Val| -> Result<(Term, Val)> {
            if matches!(e.unloc(), Term::Hole) {
                Ok((quote(c.globals, ctx.depth(), default), default.clone()))
            } else {
                let e2 = c.check(ctx, e, &a)?;
                let v = c.eval(ctx, &e2);
                Ok((e2, v))
            }
        };
        let (l2, lv) = endpoint(self, lhs, &x)?;
        let (r2, rv) = endpoint(self, rhs, &y)?;
        let d = ctx.depth();
        if !self.ev.convertible(d, &lv, &x) || !self.ev.convertible(d, &rv, &y) {
            let claimed = Arc::new(Value::Id(a.clone(), lv, rv));
            return Err(Diagnostic::mismatch(
                self.span,
                "the endpoints given to J do not match the identification",
                self.show(ctx, &claimed),
                self.show(ctx, &pty),
            ));
        }
        let (xv, yv) = (Value::var(d), Value::var(d + 1));
        let m_ctx = ctx
            .bind(name("x"), a.clone())
            .bind(name("y"), a.clone())
            .bind(name("p"), Arc::new(Value::Id(a.clone(), xv.clone(), yv)));
        let (m2, _) = self.check_type(&m_ctx, motive)?;
        let mc = self.closure(ctx, &m2, "x");
        let base_ty = self.ev.inst(&mc, &[xv.clone(), xv.clone(), Arc::new(Value::Refl(xv))]);
        let base2 = self.check(&ctx.bind(name("x"), a), base, &base_ty)?;
        let pv = self.eval(ctx, &p2);
        let lv = self.eval(ctx, &l2);
        let rv = self.eval(ctx, &r2);
        let ty = self.ev.inst(&mc, &[lv, rv, pv]);
        Ok((
            Term::J {
                motive: rc(m2),
                base: rc(base2),
                lhs: rc(l2),
                rhs: rc(r2),
                proof: rc(p2),
            },
            ty,
        ))
    }

    pub fn check(&mut self, ctx: &Ctx, t: &Term, ty: &Val) -> Result<Term> {
        match (t, &**ty) {
            (Term::Loc(sp, inner), _) => {
                let sp = *sp;
                let t2 = self.located(sp, |c| c.check(ctx, inner, ty))?;
                Ok(Term::Loc(sp, rc(t2)))
            }
            (Term::Lam(h, body), Value::Pi(dom, cod)) => {
                let x = Value::var(ctx.depth());
                let body_ty = self.ev.inst1(cod, x);
                let body2 = self.check(&ctx.bind(h.clone(), dom.clone()), body, &body_ty)?;
                Ok(Term::Lam(h.clone(), rc(body2)))
            }
            (Term::Lam(..), _) => Err(self.shape_error(
                ctx,
                "a function was given where a function type was not expected",
                "_ -> _",
                ty,
            )),
            (Term::Pair(a, b), Value::Sigma(at, bt)) => {
                let a2 = self.check(ctx, a, at)?;
                let bty = self.ev.inst1(bt, self.eval(ctx, &a2));
                let b2 = self.check(ctx, b, &bty)?;
                Ok(Term::Pair(rc(a2), rc(b2)))
            }
            (Term::Pair(..), _) => {
                Err(self.shape_error(ctx, "a pair was given where a pair type was not expected", "_ * _", ty))
            }
            (Term::Inl(a), Value::Sum(l, _)) => Ok(Term::Inl(rc(self.check(ctx, a, l)?))),
            (Term::Inr(b), Value::Sum(_, r)) => Ok(Term::Inr(rc(self.check(ctx, b, r)?))),
            (Term::Inl(_) | Term::Inr(_), _) => Err(self.shape_error(
                ctx,
                "an injection was given where a sum was not expected",
                "Sum _ _",
                ty,
            )),
            (Term::Refl(x), Value::Id(a, l, r)) => {
                let (x2, xv) = if matches!(x.unloc(), Term::Hole) {
                    (quote(self.globals, ctx.depth(), l), l.clone())
                } else {
                    let x2 = self.check(ctx, x, a)?;
                    let xv = self.eval(ctx, &x2);
                    (x2, xv)
                };
                let d = ctx.depth();
                if !self.ev.convertible(d, &xv, l) || !self.ev.convertible(d, &xv, r) {
                    let actual = Arc::new(Value::Id(a.clone(), xv.clone(), xv));
                    return Err(Diagnostic::mismatch(
                        self.span,
                        "refl only proves identifications between definitionally equal points",
                        self.show(ctx, ty),
                        self.show(ctx, &actual),
                    ));
                }
                Ok(Term::Refl(rc(x2)))
            }
            (Term::Hole, _) => Err(self.err(
                ErrorClass::UnsolvedHole,
                format!("cannot determine the value of this hole of type {}", self.show(ctx, ty)),
            )),
            (Term::App(f, a), _) if matches!(f.unloc(), Term::Lam(..)) => {
                let Term::Lam(h, body) = f.unloc() else { unreachable!() };
                let (a2, aty) = self.infer(ctx, a)?;
                let av = self.eval(ctx, &a2);
                let body2 = self.check(&ctx.define(h.clone(), aty, av), body, ty)?;
                Ok(Term::App(rc(Term::Lam(h.clone(), rc(body2))), rc(a2)))
            }
            _ => {
                let (t2, actual) = self.infer(ctx, t)?;
                if !self.ev.convertible(ctx.depth(), &actual, ty) {
                    return Err(self.conversion_error(ctx, &actual, ty));
                }
                Ok(t2)
            }
        }
    }

    /// An introduction form checked against a type of the wrong shape.
    fn shape_error(&self, ctx: &Ctx, message: &str, actual: &str, expected: &Val) -> Diagnostic {
        Diagnostic::mismatch(self.span, message, self.show(ctx, expected), actual.to_string())
    }

    /// Normal form of a well-typed term, read back at its inferred type.
    pub fn normalize(&mut self, ctx: &Ctx, t: &Term) -> Result<Term> {
        let (t2, ty) = self.infer(ctx, t)?;
        let v = self.eval(ctx, &t2);
        Ok(Reader::new(self.globals, ctx.types.clone()).read(&ty, &v))
    }
}

/// A declaration ready for checking.
#[derive(Debug, Clone)]
pub enum Decl {
    Def {
        name: Name,
        span: Span,
        ty: Term,
        body: Term,
    },
    Postulate {
        name: Name,
        span: Span,
        ty: Term,
    },
    Hit {
        decl: HitDecl,
        span: Span,
    },
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Def { name, .. } | Decl::Postulate { name, .. } => name,
            Decl::Hit { decl, .. } => &decl.name,
        }
    }
}

fn duplicate(name: &str, span: Span) -> Diagnostic {
    Diagnostic::new(
        ErrorClass::DuplicateName,
        Some(span),
        format!("`{name}` is already defined"),
    )
}

/// Checks a declaration and extends the environment with it. On error the
/// environment is left unchanged.
pub fn check_declaration(globals: &mut GlobalEnv, decl: &Decl) -> Result<()> {
    match decl {
        Decl::Def { name, span, ty, body } => {
            if globals.contains(name) {
                return Err(duplicate(name, *span));
            }
            let entry = checked_def(globals, ty, body, *span)?;
            globals.insert(name.clone(), entry);
            Ok(())
        }
        Decl::Postulate { name, span, ty } => {
            if globals.contains(name) {
                return Err(duplicate(name, *span));
            }
            let entry = checked_postulate(globals, ty, *span)?;
            globals.insert(name.clone(), entry);
            Ok(())
        }
        Decl::Hit { decl, span } => check_hit(globals, decl, *span),
    }
}

fn checked_def(globals: &GlobalEnv, ty: &Term, body: &Term, span: Span) -> Result<Entry> {
    let mut c = Checker::new(globals).with_span(span);
    let ctx = Ctx::new();
    let (ty2, _) = c.check_type(&ctx, ty)?;
    let ty_val = c.eval(&ctx, &ty2);
    let body2 = c.check(&ctx, body, &ty_val)?;
    let val = c.eval(&ctx, &body2);
    Ok(Entry::Def {
        ty: ty2,
        body: body2,
        ty_val,
        val,
    })
}

fn checked_postulate(globals: &GlobalEnv, ty: &Term, span: Span) -> Result<Entry> {
    let mut c = Checker::new(globals).with_span(span);
    let ctx = Ctx::new();
    let (ty2, _) = c.check_type(&ctx, ty)?;
    let ty_val = c.eval(&ctx, &ty2);
    Ok(Entry::Postulate { ty: ty2, ty_val })
}

/// Names a HIT declaration adds to the environment.
pub fn generated_names(decl: &HitDecl) -> Vec<Name> {
    let mut names = vec![decl.name.clone()];
    names.extend(decl.ctors().map(|c| c.name.clone()));
    names.push(elim_name(&decl.name));
    for l in BETA_LEVELS {
        names.extend(decl.path_ctors.iter().map(|c| elim::beta_name(&c.name, l)));
    }
    names
}

pub fn elim_name(hit: &str) -> Name {
    name(&format!("{hit}-elim"))
}

/// Motive levels for which computation rules are generated. Level 1
/// covers type families such as a universal cover `X -> U 0`.
pub const BETA_LEVELS: [Level; 2] = [Level(0), Level(1)];

fn check_hit(globals: &mut GlobalEnv, decl: &HitDecl, span: Span) -> Result<()> {
    let invalid = |e: HitError| {
        Diagnostic::new(
            ErrorClass::InvalidHit,
            Some(span),
            format!("invalid declaration of `{}`: {e}", decl.name),
        )
    };
    let hit = validate_hit_decl(decl).map_err(invalid)?;

    let names = generated_names(decl);
    for (i, n) in names.iter().enumerate() {
        if globals.contains(n) || names[..i].contains(n) {
            return Err(duplicate(n, span));
        }
    }

    // Constructor telescopes mention the type being declared, so they are
    // checked in a scratch environment that already knows its shape.
    let mut scratch = globals.clone();
    scratch.insert_hit(HitInfo {
        hit,
        method_types: Vec::new(),
        elim_name: elim_name(&decl.name),
        elim_type: Term::Hole,
        beta_names: Vec::new(),
    });
    let checked = {
        let mut c = Checker::new(&scratch).with_span(span);
        let mut ctx = Ctx::new();
        let mut params = Vec::new();
        for (h, ty) in &decl.params {
            let (ty2, _) = c.check_type(&ctx, ty)?;
            let v = c.eval(&ctx, &ty2);
            ctx = ctx.bind(h.clone(), v);
            params.push((h.clone(), ty2));
        }
        let mut check_ctor = |ctor: &CtorDecl| -> Result<CtorDecl> {
            let mut cctx = ctx.clone();
            let mut args = Vec::new();
            for (h, ty) in &ctor.args {
                let (ty2, l) = c.check_type(&cctx, ty)?;
                if l > decl.level {
                    return Err(c.err(
                        ErrorClass::UniverseError,
                        format!(
                            "argument `{h}` of `{}` lives in U {l}, above the declared U {}",
                            ctor.name, decl.level
                        ),
                    ));
                }
                let v = c.eval(&cctx, &ty2);
                cctx = cctx.bind(h.clone(), v);
                args.push((h.clone(), ty2));
            }
            let target = match &ctor.target {
                Some(t) => Some(c.check_type(&cctx, t)?.0),
                None => None,
            };
            Ok(CtorDecl {
                name: ctor.name.clone(),
                args,
                target,
            })
        };
        let point_ctors = decl
            .point_ctors
            .iter()
            .map(&mut check_ctor)
            .collect::<Result<Vec<_>>>()?;
        let path_ctors = decl
            .path_ctors
            .iter()
            .map(&mut check_ctor)
            .collect::<Result<Vec<_>>>()?;
        HitDecl {
            name: decl.name.clone(),
            params,
            level: decl.level,
            point_ctors,
            path_ctors,
        }
    };
    let hit = validate_hit_decl(&checked).map_err(invalid)?;

    let betas: Vec<(Name, Term)> = BETA_LEVELS
        .into_iter()
        .flat_map(|l| elim::path_beta_constants(&hit, l))
        .collect();
    let info = HitInfo {
        method_types: elim::method_types(&hit),
        elim_name: elim_name(&decl.name),
        elim_type: elim::elim_type(&hit),
        beta_names: betas.iter().map(|(n, _)| n.clone()).collect(),
        hit: hit.clone(),
    };
    let mut scratch = globals.clone();
    scratch.insert_hit(info.clone());

    // Generated constants are checked like user declarations; a failure
    // here is a bug in the generator, reported against the declaration.
    let internal = |what: &str, d: Diagnostic| {
        Diagnostic::new(
            ErrorClass::InvalidHit,
            Some(span),
            format!("internal error: generated {what} does not check: {}", d.message),
        )
    };
    let add_def = |env: &mut GlobalEnv, n: Name, ty: Term, body: Term| -> Result<()> {
        let entry = checked_def(env, &ty, &body, span).map_err(|d| internal(&n, d))?;
        env.insert(n, entry);
        Ok(())
    };
    add_def(
        &mut scratch,
        decl.name.clone(),
        elim::former_type(&hit),
        elim::former_body(&hit),
    )?;
    for ctor in checked.ctors() {
        let (ty, body) = elim::ctor_constant(&hit, &ctor.name);
        add_def(&mut scratch, ctor.name.clone(), ty, body)?;
    }
    add_def(
        &mut scratch,
        info.elim_name.clone(),
        info.elim_type.clone(),
        elim::elim_body(&hit),
    )?;
    for (n, ty) in betas {
        let entry = checked_postulate(&scratch, &ty, span).map_err(|d| internal(&n, d))?;
        scratch.insert(n, entry);
    }
    *globals = scratch;
    Ok(())
}

/// Normal form of a global: a definition's body, or the postulate itself.
pub fn normalize_const(globals: &GlobalEnv, c: &str) -> Option<Term> {
    let entry = globals.lookup(c)?;
    Some(match &**entry {
        Entry::Def { ty_val, val, .. } => Reader::new(globals, Vec::new()).read(ty_val, val),
        Entry::Postulate { .. } => Term::Const(name(c)),
    })
}

/// Normal form of a global's type.
pub fn type_of_const(globals: &GlobalEnv, c: &str) -> Option<Term> {
    let entry = globals.lookup(c)?;
    Some(Reader::new(globals, Vec::new()).read_type(entry.ty_val()))
}

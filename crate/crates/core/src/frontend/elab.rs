//! Elaboration of surface syntax into core terms: names become de Bruijn
//! indices or global constants, numerals and built-in eliminators are
//! expanded, and every node is wrapped in its source span.

use std::sync::Arc;

use crate::check::Decl;
use crate::diagnostic::{Diagnostic, ErrorClass};
use crate::env::GlobalEnv;
use crate::frontend::surface::*;
use crate::hit::{CtorDecl, HitDecl};
use crate::syntax::{name, shift, Level, Name, Span, Term};

pub type EResult<T> = Result<T, Diagnostic>;

fn rc(t: Term) -> Arc<Term> {
    Arc::new(t)
}

fn loc(span: Span, t: Term) -> Term {
    Term::Loc(span, rc(t))
}

/// The type being declared, while its constructors are elaborated.
struct HitScope {
    name: String,
    num_params: usize,
    /// Point constructors seen so far, with their argument counts.
    points: Vec<(String, usize)>,
}

pub struct Elaborator<'g> {
    globals: &'g GlobalEnv,
    locals: Vec<String>,
    hit: Option<HitScope>,
}

/// A built-in taking a fixed number of arguments; `binds[i]` is how many
/// variables argument `i` binds.
struct Builtin {
    binds: &'static [usize],
}

fn builtin(s: &str) -> Option<Builtin> {
    let binds: &'static [usize] = match s {
        "Nat-elim" => &[1, 0, 2, 0],
        "Sum-elim" => &[1, 1, 1, 0],
        "J" => &[3, 1, 0, 0, 0],
        "Sum" => &[0, 0],
        "succ" => &[0],
        _ => return None,
    };
    Some(Builtin { binds })
}

impl<'g> Elaborator<'g> {
    pub fn new(globals: &'g GlobalEnv) -> Self {
        Elaborator {
            globals,
            locals: Vec::new(),
            hit: None,
        }
    }

    fn err(class: ErrorClass, span: Span, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(class, Some(span), msg)
    }

    fn lookup_local(&self, s: &str) -> Option<usize> {
        self.locals.iter().rev().position(|n| n == s)
    }

    fn push(&mut self, s: &str) {
        self.locals.push(s.to_string());
    }

    fn pop(&mut self, k: usize) {
        self.locals.truncate(self.locals.len() - k);
    }

    pub fn term(&mut self, s: &STerm) -> EResult<Term> {
        let t = match &s.kind {
            SKind::Var(x) => return self.var(x, s.span),
            SKind::Hole => Term::Hole,
            SKind::Univ(n) => Term::Univ(Level(*n)),
            SKind::Num(n) => Term::numeral(*n),
            SKind::Prim(p) => {
                return Err(Self::err(
                    ErrorClass::ParseError,
                    s.span,
                    format!("`{}` must be applied to an argument", p.keyword()),
                ))
            }
            SKind::Elim(id) => {
                return Err(Self::err(
                    ErrorClass::ParseError,
                    s.span,
                    format!(
                        "`elim {}` must be applied to a motive, its methods and a target",
                        id.name
                    ),
                ))
            }
            SKind::Fun(names, body) => {
                for n in names {
                    self.push(&n.name);
                }
                let b = self.term(body);
                self.pop(names.len());
                let b = b?;
                names.iter().rev().fold(b, |acc, n| Term::Lam(name(&n.name), rc(acc)))
            }
            SKind::Pi(tele, cod) | SKind::Sigma(tele, cod) => {
                let is_pi = matches!(s.kind, SKind::Pi(..));
                let doms = self.telescope(tele)?;
                let cod = self.term(cod);
                self.pop(doms.len());
                let cod = cod?;
                doms.into_iter().rev().fold(cod, |acc, (h, dom)| {
                    if is_pi {
                        Term::Pi(h, rc(dom), rc(acc))
                    } else {
                        Term::Sigma(h, rc(dom), rc(acc))
                    }
                })
            }
            SKind::Arrow(a, b) | SKind::Prod(a, b) => {
                let a = self.term(a)?;
                self.push("");
                let b = self.term(b);
                self.pop(1);
                let b = b?;
                if matches!(s.kind, SKind::Arrow(..)) {
                    Term::Pi(name("_"), rc(a), rc(b))
                } else {
                    Term::Sigma(name("_"), rc(a), rc(b))
                }
            }
            SKind::App(head, args) => return self.app(head, args, s.span),
            SKind::Pair(a, b) => Term::Pair(rc(self.term(a)?), rc(self.term(b)?)),
            SKind::Eq(a, b, carrier) => {
                let a = self.term(a)?;
                let b = self.term(b)?;
                Term::Id(rc(self.term(carrier)?), rc(a), rc(b))
            }
            SKind::Ann(a, ty) => {
                let a = self.term(a)?;
                Term::Ann(rc(a), rc(self.term(ty)?))
            }
        };
        Ok(loc(s.span, t))
    }

    /// Elaborates binder groups, leaving their names pushed. Each group's
    /// type is elaborated once, before its names are in scope.
    fn telescope(&mut self, tele: &[Binder]) -> EResult<Vec<(Name, Term)>> {
        let mut out = Vec::new();
        for b in tele {
            let ty = match self.term(&b.ty) {
                Ok(t) => t,
                Err(e) => {
                    self.pop(out.len());
                    return Err(e);
                }
            };
            for (j, n) in b.names.iter().enumerate() {
                out.push((name(&n.name), shift(&ty, j, 0)));
                self.push(&n.name);
            }
        }
        Ok(out)
    }

    fn var(&mut self, x: &str, span: Span) -> EResult<Term> {
        if let Some(i) = self.lookup_local(x) {
            return Ok(loc(span, Term::Var(i)));
        }
        if let Some(h) = &self.hit {
            if h.name == x {
                if h.num_params == 0 {
                    return Ok(loc(span, Term::HitForm(name(x), Vec::new())));
                }
                return Err(Self::err(
                    ErrorClass::InvalidHit,
                    span,
                    format!("`{x}` must be applied to its {} parameters here", h.num_params),
                ));
            }
            if let Some((_, n)) = h.points.iter().find(|(c, _)| c == x) {
                if h.num_params + n == 0 {
                    return Ok(loc(span, Term::HitCtor(name(&h.name), name(x), Vec::new())));
                }
                return Err(Self::err(
                    ErrorClass::InvalidHit,
                    span,
                    format!("`{x}` must be applied to the parameters and its arguments here"),
                ));
            }
        }
        if self.globals.lookup(x).is_some() {
            return Ok(loc(span, Term::Const(name(x))));
        }
        match x {
            "Nat" => Ok(loc(span, Term::Nat)),
            "zero" => Ok(loc(span, Term::Zero)),
            "succ" => {
                let f = Term::lam("n", Term::succ(Term::Var(0)));
                let ty = Term::pi("_", Term::Nat, Term::Nat);
                Ok(loc(span, Term::Ann(rc(f), rc(ty))))
            }
            _ if builtin(x).is_some() => Err(Self::err(
                ErrorClass::ParseError,
                span,
                format!("`{x}` must be applied to {} arguments", builtin(x).unwrap().binds.len()),
            )),
            _ => Err(Self::err(ErrorClass::UnboundName, span, format!("unbound name `{x}`"))),
        }
    }

    /// Elaborates an argument that binds `k` variables. A literal `fun` with
    /// enough binders is opened; anything else is applied to the variables.
    fn binding_arg(&mut self, s: &STerm, k: usize) -> EResult<Term> {
        if k == 0 {
            return self.term(s);
        }
        if let SKind::Fun(names, body) = &s.kind {
            let m = k.min(names.len());
            for n in &names[..m] {
                self.push(&n.name);
            }
            let inner = if names.len() > m {
                let rest = STerm::new(SKind::Fun(names[m..].to_vec(), body.clone()), s.span);
                self.term(&rest)
            } else {
                self.binding_arg(body, k - m)
            };
            self.pop(m);
            return Ok(loc(s.span, inner?));
        }
        let t = shift(&self.term(s)?, k, 0);
        Ok((0..k).rev().fold(t, |acc, i| Term::app(acc, Term::Var(i))))
    }

    fn app(&mut self, head: &STerm, args: &[STerm], span: Span) -> EResult<Term> {
        let start = head.span.start;
        let partial = |upto: usize| Span::new(start, args[upto].span.end);
        // (elaborated head, number of arguments it consumed)
        let (core, used): (Term, usize) = match &head.kind {
            SKind::Prim(p) => {
                let a = rc(self.term(&args[0])?);
                let t = match p {
                    Prim::Fst => Term::Fst(a),
                    Prim::Snd => Term::Snd(a),
                    Prim::Inl => Term::Inl(a),
                    Prim::Inr => Term::Inr(a),
                    Prim::Refl => Term::Refl(a),
                };
                (t, 1)
            }
            SKind::Elim(id) => {
                let info = self.globals.hit(&id.name).cloned().ok_or_else(|| {
                    Self::err(
                        ErrorClass::UnboundName,
                        id.span,
                        format!("unknown higher inductive type `{}`", id.name),
                    )
                })?;
                let nm = info.hit.num_methods();
                let need = nm + 2;
                if args.len() < need {
                    return Err(Self::err(
                        ErrorClass::ParseError,
                        span,
                        format!("`elim {}` must be applied to {need} arguments", id.name),
                    ));
                }
                let motive = self.binding_arg(&args[0], 1)?;
                let methods = args[1..=nm]
                    .iter()
                    .map(|m| self.term(m).map(rc))
                    .collect::<EResult<Vec<_>>>()?;
                let scrutinee = self.term(&args[nm + 1])?;
                let t = Term::HitElim {
                    hit: name(&id.name),
                    motive: rc(motive),
                    methods,
                    scrutinee: rc(scrutinee),
                };
                (t, need)
            }
            SKind::Var(x) if self.lookup_local(x).is_none() => match self.special_app(x, args, span)? {
                Some(r) => r,
                None => (self.term(head)?, 0),
            },
            _ => (self.term(head)?, 0),
        };
        let mut t = if used == 0 { core } else { loc(partial(used - 1), core) };
        for (i, arg) in args.iter().enumerate().skip(used) {
            let a = self.term(arg)?;
            t = loc(partial(i), Term::app(t, a));
        }
        Ok(t)
    }

    /// Applications whose head is the type being declared, one of its
    /// constructors, or a built-in.
    fn special_app(&mut self, x: &str, args: &[STerm], span: Span) -> EResult<Option<(Term, usize)>> {
        if let Some(h) = &self.hit {
            let want = if h.name == x {
                Some(h.num_params)
            } else {
                h.points.iter().find(|(c, _)| c == x).map(|(_, n)| h.num_params + n)
            };
            if let Some(want) = want {
                let hit_name = name(&h.name);
                let is_form = h.name == x;
                if args.len() != want {
                    return Err(Self::err(
                        ErrorClass::InvalidHit,
                        span,
                        format!("`{x}` must be applied to exactly {want} arguments here"),
                    ));
                }
                let args = args.iter().map(|a| self.term(a).map(rc)).collect::<EResult<Vec<_>>>()?;
                let t = if is_form {
                    Term::HitForm(hit_name, args)
                } else {
                    Term::HitCtor(hit_name, name(x), args)
                };
                return Ok(Some((t, want)));
            }
        }
        if self.globals.lookup(x).is_some() {
            return Ok(None);
        }
        let Some(b) = builtin(x) else { return Ok(None) };
        let need = b.binds.len();
        if args.len() < need {
            if x == "succ" {
                return Ok(None);
            }
            return Err(Self::err(
                ErrorClass::ParseError,
                span,
                format!("`{x}` must be applied to {need} arguments"),
            ));
        }
        let mut a = Vec::with_capacity(need);
        for (s, &k) in args.iter().zip(b.binds) {
            a.push(rc(self.binding_arg(s, k)?));
        }
        let mut a = a.into_iter();
        let mut next = || a.next().unwrap();
        let t = match x {
            "succ" => Term::Succ(next()),
            "Sum" => Term::Sum(next(), next()),
            "Nat-elim" => Term::NatElim {
                motive: next(),
                zero: next(),
                succ: next(),
                scrutinee: next(),
            },
            "Sum-elim" => Term::SumElim {
                motive: next(),
                left: next(),
                right: next(),
                scrutinee: next(),
            },
            "J" => Term::J {
                motive: next(),
                base: next(),
                lhs: next(),
                rhs: next(),
                proof: next(),
            },
            _ => unreachable!(),
        };
        Ok(Some((t, need)))
    }

    /// Elaborates a declaration against the current global environment.
    pub fn decl(&mut self, d: &SDecl) -> EResult<Decl> {
        self.locals.clear();
        self.hit = None;
        match d {
            SDecl::Def {
                name: n,
                binders,
                ty,
                body,
                span,
            } => {
                let tele = self.telescope(binders)?;
                let ty_core = self.term(ty);
                let body_core = self.term(body);
                self.pop(tele.len());
                let (ty_core, body_core) = (ty_core?, body_core?);
                let ty = tele
                    .iter()
                    .rev()
                    .fold(ty_core, |acc, (h, dom)| Term::Pi(h.clone(), rc(dom.clone()), rc(acc)));
                let body = tele
                    .iter()
                    .rev()
                    .fold(body_core, |acc, (h, _)| Term::Lam(h.clone(), rc(acc)));
                Ok(Decl::Def {
                    name: name(&n.name),
                    span: *span,
                    ty,
                    body,
                })
            }
            SDecl::Postulate {
                name: n,
                binders,
                ty,
                span,
            } => {
                let tele = self.telescope(binders)?;
                let ty_core = self.term(ty);
                self.pop(tele.len());
                let ty = tele
                    .into_iter()
                    .rev()
                    .fold(ty_core?, |acc, (h, dom)| Term::Pi(h, rc(dom), rc(acc)));
                Ok(Decl::Postulate {
                    name: name(&n.name),
                    span: *span,
                    ty,
                })
            }
            SDecl::Hit {
                name: n,
                params,
                ty,
                ctors,
                span,
            } => self.hit_decl(n, params, ty, ctors, *span),
        }
    }

    fn hit_decl(&mut self, n: &Ident, params: &[Binder], ty: &STerm, ctors: &[SCtor], span: Span) -> EResult<Decl> {
        let params = self.telescope(params)?;
        let np = params.len();
        let level = match self.term(ty)?.unloc() {
            Term::Univ(l) => *l,
            _ => {
                return Err(Self::err(
                    ErrorClass::InvalidHit,
                    ty.span,
                    "the type of a higher inductive type must be a universe `U n`",
                ))
            }
        };
        self.hit = Some(HitScope {
            name: n.name.clone(),
            num_params: np,
            points: Vec::new(),
        });
        let mut point_ctors = Vec::new();
        let mut path_ctors = Vec::new();
        for c in ctors {
            let mut t = self.term(&c.ty)?;
            let mut args = Vec::new();
            while let Term::Pi(h, a, b) = t.unloc() {
                args.push((h.clone(), (**a).clone()));
                t = (**b).clone();
            }
            let depth = np + args.len();
            let is_self = match t.unloc() {
                Term::HitForm(h, ps) if **h == *n.name => {
                    let ok = ps
                        .iter()
                        .enumerate()
                        .all(|(p, a)| matches!(a.unloc(), Term::Var(i) if *i == depth - 1 - p));
                    if !ok {
                        return Err(Self::err(
                            ErrorClass::InvalidHit,
                            c.ty.span,
                            format!(
                                "constructor `{}` must return `{}` at its own parameters",
                                c.name.name, n.name
                            ),
                        ));
                    }
                    true
                }
                _ => false,
            };
            let decl = CtorDecl {
                name: name(&c.name.name),
                args,
                target: if is_self { None } else { Some(t) },
            };
            if is_self {
                if let Some(h) = &mut self.hit {
                    h.points.push((c.name.name.clone(), decl.args.len()));
                }
                point_ctors.push(decl);
            } else {
                path_ctors.push(decl);
            }
        }
        self.hit = None;
        self.pop(np);
        Ok(Decl::Hit {
            decl: HitDecl {
                name: name(&n.name),
                params,
                level,
                point_ctors,
                path_ctors,
            },
            span,
        })
    }
}

/// Elaborates a closed expression.
pub fn elab_expr(globals: &GlobalEnv, s: &STerm) -> EResult<Term> {
    Elaborator::new(globals).term(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::parse_expr;
    use crate::syntax::structural_eq;

    fn elab(src: &str) -> Term {
        let g = GlobalEnv::new();
        elab_expr(&g, &parse_expr(src).unwrap()).unwrap().strip_locs()
    }

    #[test]
    fn identity_function() {
        assert!(structural_eq(&elab("fun x. x"), &Term::lam("x", Term::Var(0))));
    }

    #[test]
    fn numerals_are_unary() {
        assert!(structural_eq(&elab("2"), &Term::succ(Term::succ(Term::Zero))));
    }

    #[test]
    fn telescope_types_scope_outside_their_group() {
        // (x y : A x) with the outer A and x free: y's type must skip x.
        let g = GlobalEnv::new();
        let mut e = Elaborator::new(&g);
        e.push("A");
        e.push("x");
        let t = e.term(&parse_expr("(x y : A x) -> Nat").unwrap()).unwrap().strip_locs();
        let ax = |a: usize, x: usize| Term::app(Term::Var(a), Term::Var(x));
        let want = Term::pi("x", ax(1, 0), Term::pi("y", ax(2, 1), Term::Nat));
        assert!(structural_eq(&t, &want), "{t:?}");
    }

    #[test]
    fn eliminator_motive_is_opened() {
        let t = elab("fun n. Nat-elim (fun k. Nat) zero (fun k ih. succ ih) n");
        let Term::Lam(_, body) = t else { panic!() };
        let Term::NatElim { motive, succ, .. } = &*body else {
            panic!()
        };
        assert!(structural_eq(motive, &Term::Nat));
        assert!(structural_eq(succ, &Term::succ(Term::Var(0))));
    }

    #[test]
    fn eliminator_motive_is_eta_expanded() {
        let g = GlobalEnv::new();
        let mut e = Elaborator::new(&g);
        e.push("P");
        e.push("n");
        let t = e
            .term(&parse_expr("Nat-elim P zero (fun k. fun ih. ih) n").unwrap())
            .unwrap()
            .strip_locs();
        let Term::NatElim { motive, succ, .. } = t else {
            panic!()
        };
        assert!(structural_eq(&motive, &Term::app(Term::Var(2), Term::Var(0))));
        // nested `fun`s are opened one binder at a time
        assert!(structural_eq(&succ, &Term::Var(0)));
    }

    #[test]
    fn unbound_names_report_their_span() {
        let g = GlobalEnv::new();
        let e = elab_expr(&g, &parse_expr("fun x. y").unwrap()).unwrap_err();
        assert_eq!(e.class, ErrorClass::UnboundName);
        assert_eq!(e.span, Some(Span::new(7, 8)));
    }
}

//! Higher inductive type declarations and the structural schema check.
//!
//! A declaration is accepted when every constructor argument is either an
//! external type, the HIT itself (simple recursion), or (for identification
//! constructors) an identity type over the HIT whose endpoints are built from
//! constructors and earlier arguments. Identification targets are capped at
//! level 2.

use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{shift, Level, Name, Term};

/// One constructor. Argument `k`'s type is scoped over the parameters
/// followed by arguments `0..k`; the target (identification constructors
/// only) is scoped over the parameters and all arguments.
#[derive(Debug, Clone)]
pub struct CtorDecl {
    pub name: Name,
    pub args: Vec<(Name, Term)>,
    pub target: Option<Term>,
}

#[derive(Debug, Clone)]
pub struct HitDecl {
    pub name: Name,
    /// Parameter telescope; each type is scoped over the earlier parameters.
    pub params: Vec<(Name, Term)>,
    pub level: Level,
    pub point_ctors: Vec<CtorDecl>,
    pub path_ctors: Vec<CtorDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HitError {
    #[error("constructor `{ctor}`: argument {arg} mentions the type under a function type")]
    NegativeOccurrence { ctor: Name, arg: usize },
    #[error("constructor `{ctor}`: argument {arg} uses the type in an unsupported position")]
    UnsupportedArgument { ctor: Name, arg: usize },
    #[error("constructor `{ctor}`: identification targets above level 2 are not supported")]
    LevelTooHigh { ctor: Name },
    #[error("constructor `{ctor}`: {reason}")]
    IllScopedBoundary { ctor: Name, reason: String },
    #[error("constructor `{0}` is declared twice")]
    DuplicateCtor(Name),
    #[error("constructor `{ctor}`: target must be an identification in the type being declared")]
    BadTarget { ctor: Name },
}

/// How a constructor argument relates to the type being declared.
#[derive(Debug, Clone)]
pub enum ArgShape {
    External,
    Recursive,
    /// An identification between two points of the HIT.
    Path {
        lhs: PointExpr,
        rhs: PointExpr,
    },
}

/// A point of the HIT built from constructors and recursive arguments.
#[derive(Debug, Clone)]
pub enum PointExpr {
    /// A recursive argument of the enclosing constructor, by position.
    Arg(usize),
    Ctor {
        ctor: usize,
        args: Vec<CtorArg>,
    },
}

#[derive(Debug, Clone)]
pub enum CtorArg {
    /// An ordinary term together with the number of constructor arguments
    /// it is scoped over (parameters are always in scope).
    External(Term, usize),
    Point(PointExpr),
}

/// A level-1 identification used as an endpoint of a level-2 target.
#[derive(Debug, Clone)]
pub enum PathExpr {
    Arg(usize),
    Refl(PointExpr),
}

#[derive(Debug, Clone)]
pub enum Boundary {
    Level1 {
        lhs: PointExpr,
        rhs: PointExpr,
    },
    Level2 {
        lhs: PointExpr,
        rhs: PointExpr,
        p: PathExpr,
        q: PathExpr,
    },
}

#[derive(Debug, Clone)]
pub struct PointShape {
    pub args: Vec<ArgShape>,
}

#[derive(Debug, Clone)]
pub struct PathShape {
    pub args: Vec<ArgShape>,
    pub boundary: Boundary,
}

/// A declaration that passed the schema check, annotated with the shape of
/// every constructor.
#[derive(Debug, Clone)]
pub struct ValidHit {
    pub decl: HitDecl,
    pub points: Vec<PointShape>,
    pub paths: Vec<PathShape>,
}

impl HitDecl {
    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// Constructors in method order: points first, then identifications.
    pub fn ctors(&self) -> impl Iterator<Item = &CtorDecl> {
        self.point_ctors.iter().chain(self.path_ctors.iter())
    }

    pub fn point_index(&self, ctor: &str) -> Option<usize> {
        self.point_ctors.iter().position(|c| &*c.name == ctor)
    }

    pub fn path_index(&self, ctor: &str) -> Option<usize> {
        self.path_ctors.iter().position(|c| &*c.name == ctor)
    }

    pub fn find_ctor(&self, ctor: &str) -> Option<&CtorDecl> {
        self.ctors().find(|c| &*c.name == ctor)
    }

    /// The HIT applied to its own parameters, in a context where the
    /// parameters are followed by `extra` further variables.
    pub fn self_type(&self, extra: usize) -> Term {
        let np = self.num_params();
        Term::HitForm(
            self.name.clone(),
            (0..np).map(|p| Arc::new(Term::Var(np + extra - 1 - p))).collect(),
        )
    }
}

impl ValidHit {
    pub fn name(&self) -> &Name {
        &self.decl.name
    }

    /// Total number of eliminator methods.
    pub fn num_methods(&self) -> usize {
        self.points.len() + self.paths.len()
    }

    /// Shapes of the arguments of constructor `i` in method order.
    pub fn arg_shapes(&self, i: usize) -> &[ArgShape] {
        if i < self.points.len() {
            &self.points[i].args
        } else {
            &self.paths[i - self.points.len()].args
        }
    }
}

struct Validator<'a> {
    decl: &'a HitDecl,
    np: usize,
    ctor: Name,
}

/// Checks a declaration against the schema. Typing of the telescopes is the
/// typechecker's job; this is the purely syntactic part.
pub fn validate_hit_decl(decl: &HitDecl) -> Result<ValidHit, HitError> {
    let mut seen: Vec<&Name> = Vec::new();
    for c in decl.ctors() {
        if seen.contains(&&c.name) || c.name == decl.name {
            return Err(HitError::DuplicateCtor(c.name.clone()));
        }
        seen.push(&c.name);
    }

    let np = decl.num_params();
    let mut points = Vec::new();
    for c in &decl.point_ctors {
        let v = Validator {
            decl,
            np,
            ctor: c.name.clone(),
        };
        if c.target.is_some() {
            return Err(HitError::BadTarget { ctor: c.name.clone() });
        }
        let args = v.arg_shapes(&c.args, false)?;
        points.push(PointShape { args });
    }

    let mut paths = Vec::new();
    for c in &decl.path_ctors {
        let v = Validator {
            decl,
            np,
            ctor: c.name.clone(),
        };
        let args = v.arg_shapes(&c.args, true)?;
        let target = c
            .target
            .as_ref()
            .ok_or_else(|| HitError::BadTarget { ctor: c.name.clone() })?;
        let boundary = v.boundary(target, &args)?;
        paths.push(PathShape { args, boundary });
    }

    Ok(ValidHit {
        decl: decl.clone(),
        points,
        paths,
    })
}

impl Validator<'_> {
    fn scope_err(&self, reason: impl Into<String>) -> HitError {
        HitError::IllScopedBoundary {
            ctor: self.ctor.clone(),
            reason: reason.into(),
        }
    }

    fn mentions_self(&self, t: &Term) -> bool {
        let mut names = Vec::new();
        crate::syntax::constants(t, &mut names);
        names.contains(&self.decl.name)
    }

    fn under_pi(&self, t: &Term) -> bool {
        match t.unloc() {
            Term::Pi(_, a, b) => self.mentions_self(a) || self.mentions_self(b),
            Term::Sigma(_, a, b) | Term::App(a, b) | Term::Sum(a, b) => self.under_pi(a) || self.under_pi(b),
            Term::Id(a, b, c) => self.under_pi(a) || self.under_pi(b) || self.under_pi(c),
            _ => false,
        }
    }

    /// True if `t` is exactly the HIT applied to its parameters in a context
    /// of `depth` variables.
    fn is_self(&self, t: &Term, depth: usize) -> bool {
        match t.unloc() {
            Term::HitForm(n, args) if *n == self.decl.name && args.len() == self.np => args
                .iter()
                .enumerate()
                .all(|(p, a)| matches!(a.unloc(), Term::Var(i) if *i == depth - 1 - p)),
            _ => false,
        }
    }

    fn arg_shapes(&self, args: &[(Name, Term)], allow_paths: bool) -> Result<Vec<ArgShape>, HitError> {
        let mut shapes: Vec<ArgShape> = Vec::new();
        for (k, (_, ty)) in args.iter().enumerate() {
            let depth = self.np + k;
            if !ty.is_closed_under(depth) {
                return Err(self.scope_err(format!("argument {k} has a free variable")));
            }
            let shape = if self.is_self(ty, depth) {
                ArgShape::Recursive
            } else if !self.mentions_self(ty) {
                ArgShape::External
            } else if self.under_pi(ty) {
                return Err(HitError::NegativeOccurrence {
                    ctor: self.ctor.clone(),
                    arg: k,
                });
            } else {
                match ty.unloc() {
                    Term::Id(a, l, r) if allow_paths && self.is_self(a, depth) => ArgShape::Path {
                        lhs: self.point(l, depth, &shapes)?,
                        rhs: self.point(r, depth, &shapes)?,
                    },
                    _ => {
                        return Err(HitError::UnsupportedArgument {
                            ctor: self.ctor.clone(),
                            arg: k,
                        })
                    }
                }
            };
            shapes.push(shape);
        }
        Ok(shapes)
    }

    /// Reads a point endpoint in a context of `depth` variables whose
    /// constructor arguments so far have the given shapes.
    fn point(&self, t: &Term, depth: usize, shapes: &[ArgShape]) -> Result<PointExpr, HitError> {
        match t.unloc() {
            Term::Var(i) => {
                let level = depth - 1 - i;
                if level < self.np {
                    return Err(self.scope_err("a parameter cannot be an endpoint"));
                }
                let j = level - self.np;
                match shapes.get(j) {
                    Some(ArgShape::Recursive) => Ok(PointExpr::Arg(j)),
                    _ => Err(self.scope_err(format!(
                        "endpoint variable refers to argument {j}, which is not a point of the type"
                    ))),
                }
            }
            Term::HitCtor(n, c, args) if *n == self.decl.name => {
                let ci = self
                    .decl
                    .point_index(c)
                    .ok_or_else(|| self.scope_err(format!("`{c}` is not a point constructor")))?;
                let target = &self.decl.point_ctors[ci];
                if args.len() != self.np + target.args.len() {
                    return Err(self.scope_err(format!("`{c}` applied to the wrong number of arguments")));
                }
                for (p, a) in args[..self.np].iter().enumerate() {
                    if !matches!(a.unloc(), Term::Var(i) if *i == depth - 1 - p) {
                        return Err(self.scope_err("constructor parameters must be passed unchanged"));
                    }
                }
                let mut out = Vec::new();
                for (m, a) in args[self.np..].iter().enumerate() {
                    let (_, aty) = &target.args[m];
                    if self.is_self(aty, self.np + m) {
                        out.push(CtorArg::Point(self.point(a, depth, shapes)?));
                    } else if self.mentions_self(a) {
                        return Err(self.scope_err("an ordinary argument mentions the type"));
                    } else {
                        out.push(CtorArg::External((**a).clone(), depth - self.np));
                    }
                }
                Ok(PointExpr::Ctor { ctor: ci, args: out })
            }
            _ => Err(self.scope_err("endpoints must be built from constructors and arguments")),
        }
    }

    fn path(
        &self,
        t: &Term,
        depth: usize,
        shapes: &[ArgShape],
        lhs: &PointExpr,
        rhs: &PointExpr,
    ) -> Result<PathExpr, HitError> {
        let nargs = depth - self.np;
        match t.unloc() {
            Term::Var(i) => {
                let level = depth - 1 - i;
                let j = level
                    .checked_sub(self.np)
                    .ok_or_else(|| self.scope_err("a parameter cannot be a path endpoint"))?;
                match shapes.get(j) {
                    Some(ArgShape::Path { lhs: l, rhs: r })
                        if same_point(l, lhs, nargs) && same_point(r, rhs, nargs) =>
                    {
                        Ok(PathExpr::Arg(j))
                    }
                    _ => Err(self.scope_err(format!(
                        "argument {j} is not an identification with the target's endpoints"
                    ))),
                }
            }
            Term::Refl(e) => {
                let e = self.point(e, depth, shapes)?;
                if same_point(&e, lhs, nargs) && same_point(&e, rhs, nargs) {
                    Ok(PathExpr::Refl(e))
                } else {
                    Err(self.scope_err("reflexivity endpoint does not match the boundary"))
                }
            }
            _ => Err(self.scope_err("level-2 endpoints must be arguments or reflexivity")),
        }
    }

    fn boundary(&self, target: &Term, shapes: &[ArgShape]) -> Result<Boundary, HitError> {
        let depth = self.np + shapes.len();
        if !target.is_closed_under(depth) {
            return Err(self.scope_err("target has a free variable"));
        }
        let bad = || HitError::BadTarget {
            ctor: self.ctor.clone(),
        };
        let Term::Id(carrier, l, r) = target.unloc() else {
            return Err(bad());
        };
        if self.is_self(carrier, depth) {
            return Ok(Boundary::Level1 {
                lhs: self.point(l, depth, shapes)?,
                rhs: self.point(r, depth, shapes)?,
            });
        }
        let Term::Id(inner, l0, r0) = carrier.unloc() else {
            return Err(bad());
        };
        if self.is_self(inner, depth) {
            let lhs = self.point(l0, depth, shapes)?;
            let rhs = self.point(r0, depth, shapes)?;
            let p = self.path(l, depth, shapes, &lhs, &rhs)?;
            let q = self.path(r, depth, shapes, &lhs, &rhs)?;
            return Ok(Boundary::Level2 { lhs, rhs, p, q });
        }
        if matches!(inner.unloc(), Term::Id(..)) {
            return Err(HitError::LevelTooHigh {
                ctor: self.ctor.clone(),
            });
        }
        Err(bad())
    }
}

/// Compares two point expressions; external terms are compared after moving
/// them into a scope of `nargs` constructor arguments.
fn same_point(a: &PointExpr, b: &PointExpr, nargs: usize) -> bool {
    match (a, b) {
        (PointExpr::Arg(i), PointExpr::Arg(j)) => i == j,
        (PointExpr::Ctor { ctor: c, args: xs }, PointExpr::Ctor { ctor: d, args: ys }) => {
            c == d
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| match (x, y) {
                    (CtorArg::Point(p), CtorArg::Point(q)) => same_point(p, q, nargs),
                    (CtorArg::External(t, s), CtorArg::External(u, r)) => {
                        shift(t, nargs - s, 0) == shift(u, nargs - r, 0)
                    }
                    _ => false,
                })
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::name;

    fn form(n: &str) -> Term {
        Term::HitForm(name(n), vec![])
    }

    fn ctor(n: &str, c: &str, args: Vec<Term>) -> Term {
        Term::HitCtor(name(n), name(c), args.into_iter().map(Arc::new).collect())
    }

    fn circle() -> HitDecl {
        HitDecl {
            name: name("S1"),
            params: vec![],
            level: Level(0),
            point_ctors: vec![CtorDecl {
                name: name("base"),
                args: vec![],
                target: None,
            }],
            path_ctors: vec![CtorDecl {
                name: name("loop"),
                args: vec![],
                target: Some(Term::id(
                    form("S1"),
                    ctor("S1", "base", vec![]),
                    ctor("S1", "base", vec![]),
                )),
            }],
        }
    }

    #[test]
    fn circle_is_valid() {
        let v = validate_hit_decl(&circle()).unwrap();
        assert_eq!(v.num_methods(), 2);
        assert!(matches!(v.paths[0].boundary, Boundary::Level1 { .. }));
    }

    #[test]
    fn naturals_as_hit_are_valid() {
        let d = HitDecl {
            name: name("N"),
            params: vec![],
            level: Level(0),
            point_ctors: vec![
                CtorDecl {
                    name: name("z"),
                    args: vec![],
                    target: None,
                },
                CtorDecl {
                    name: name("s"),
                    args: vec![(name("n"), form("N"))],
                    target: None,
                },
            ],
            path_ctors: vec![],
        };
        let v = validate_hit_decl(&d).unwrap();
        assert!(matches!(v.points[1].args[0], ArgShape::Recursive));
    }

    #[test]
    fn function_argument_is_negative() {
        let d = HitDecl {
            name: name("X"),
            params: vec![],
            level: Level(0),
            point_ctors: vec![CtorDecl {
                name: name("c"),
                args: vec![(name("f"), Term::pi("_", Term::Nat, form("X")))],
                target: None,
            }],
            path_ctors: vec![],
        };
        assert!(matches!(
            validate_hit_decl(&d),
            Err(HitError::NegativeOccurrence { .. })
        ));
    }

    #[test]
    fn duplicate_ctor_rejected() {
        let mut d = circle();
        d.path_ctors[0].name = name("base");
        assert!(matches!(validate_hit_decl(&d), Err(HitError::DuplicateCtor(_))));
    }

    #[test]
    fn level_three_rejected() {
        let mut d = circle();
        let b = ctor("S1", "base", vec![]);
        let l1 = Term::id(form("S1"), b.clone(), b.clone());
        let l2 = Term::id(l1, Term::refl(b.clone()), Term::refl(b.clone()));
        let l3 = Term::id(l2, Term::refl(Term::refl(b.clone())), Term::refl(Term::refl(b)));
        d.path_ctors[0].target = Some(l3);
        assert!(matches!(validate_hit_decl(&d), Err(HitError::LevelTooHigh { .. })));
    }

    #[test]
    fn level_two_sphere() {
        let mut d = circle();
        d.name = name("S2");
        let b = ctor("S2", "base", vec![]);
        let l1 = Term::id(form("S2"), b.clone(), b.clone());
        d.path_ctors[0].name = name("surf");
        d.path_ctors[0].target = Some(Term::id(l1, Term::refl(b.clone()), Term::refl(b)));
        let v = validate_hit_decl(&d).unwrap();
        assert!(matches!(v.paths[0].boundary, Boundary::Level2 { .. }));
    }

    #[test]
    fn endpoint_must_be_constructor() {
        let mut d = circle();
        d.path_ctors[0].target = Some(Term::id(form("S1"), Term::Zero, Term::Zero));
        assert!(matches!(validate_hit_decl(&d), Err(HitError::IllScopedBoundary { .. })));
    }
}

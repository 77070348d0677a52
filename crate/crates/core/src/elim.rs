//! Generation of dependent eliminators and propositional computation rules
//! for validated HIT declarations.
//!
//! Terms are assembled with de Bruijn levels: every generator takes the
//! depth at which its output will live and converts levels to indices on
//! the spot. Transport and dependent application are emitted inline as `J`
//! terms, so the generated types need nothing from the library.

use std::sync::Arc;

use crate::hit::{ArgShape, Boundary, CtorArg, PathExpr, PointExpr, ValidHit};
use crate::syntax::{name, reindex, Level, Name, Term};

type Lvl = usize;

fn v(depth: usize, lvl: Lvl) -> Term {
    Term::Var(depth - 1 - lvl)
}

fn arc(t: Term) -> Arc<Term> {
    Arc::new(t)
}

/// Wraps `body` in Pi binders for a telescope built front to back.
fn close_pis(tele: Vec<(Name, Term)>, body: Term) -> Term {
    tele.into_iter()
        .rev()
        .fold(body, |acc, (h, dom)| Term::Pi(h, arc(dom), arc(acc)))
}

fn close_lams(hints: Vec<Name>, body: Term) -> Term {
    hints.into_iter().rev().fold(body, |acc, h| Term::Lam(h, arc(acc)))
}

/// `transport fam path u`, where `path : lhs = rhs` and `fam d x` builds the
/// family at depth `d` for a point `x` already expressed at that depth.
fn transport(depth: usize, fam: &dyn Fn(usize, Term) -> Term, lhs: Term, rhs: Term, path: Term, u: Term) -> Term {
    let d = depth + 3;
    let motive = Term::Pi(
        name("_"),
        arc(fam(d, v(d, depth))),
        arc(fam(d + 1, v(d + 1, depth + 1))),
    );
    let base = Term::lam("u", Term::Var(0));
    Term::app(
        Term::J {
            motive: arc(motive),
            base: arc(base),
            lhs: arc(lhs),
            rhs: arc(rhs),
            proof: arc(path),
        },
        u,
    )
}

/// How induction hypotheses are supplied while building a type.
enum Hyps {
    /// Bound variables, one per recursive or identification argument.
    Vars(Vec<Option<Lvl>>),
    /// The eliminator itself applied to the argument (used by the
    /// computation rules).
    Elim,
}

struct Scope<'a> {
    hit: &'a ValidHit,
    params: Vec<Lvl>,
    motive: Lvl,
    methods: Vec<Lvl>,
    args: Vec<Lvl>,
    hyps: Hyps,
    /// Shapes of the constructor whose arguments are in `args`.
    shapes: &'a [ArgShape],
}

impl Scope<'_> {
    fn param_vars(&self, depth: usize) -> Vec<Arc<Term>> {
        self.params.iter().map(|&p| arc(v(depth, p))).collect()
    }

    fn motive_at(&self, depth: usize, x: Term) -> Term {
        Term::app(v(depth, self.motive), x)
    }

    /// The eliminator applied to a point.
    fn elim_app(&self, depth: usize, s: Term) -> Term {
        Term::HitElim {
            hit: self.hit.name().clone(),
            motive: arc(Term::app(v(depth + 1, self.motive), Term::Var(0))),
            methods: self.methods.iter().map(|&m| arc(v(depth, m))).collect(),
            scrutinee: arc(s),
        }
    }

    fn ctor_arg_term(&self, depth: usize, a: &CtorArg) -> Term {
        match a {
            CtorArg::External(t, scope) => {
                let table: Vec<Lvl> = self.params.iter().chain(&self.args[..*scope]).copied().collect();
                reindex(t, &table, depth)
            }
            CtorArg::Point(e) => self.point(depth, e),
        }
    }

    /// The point denoted by an endpoint expression.
    fn point(&self, depth: usize, e: &PointExpr) -> Term {
        match e {
            PointExpr::Arg(j) => v(depth, self.args[*j]),
            PointExpr::Ctor { ctor, args } => {
                let decl = &self.hit.decl;
                let mut all = self.param_vars(depth);
                all.extend(args.iter().map(|a| arc(self.ctor_arg_term(depth, a))));
                Term::HitCtor(decl.name.clone(), decl.point_ctors[*ctor].name.clone(), all)
            }
        }
    }

    /// The image of an endpoint under the (hypothetical) eliminator, built
    /// from point methods and induction hypotheses.
    fn lift(&self, depth: usize, e: &PointExpr) -> Term {
        match e {
            PointExpr::Arg(j) => self.hyp(depth, *j),
            PointExpr::Ctor { ctor, args } => {
                let mut out = v(depth, self.methods[*ctor]);
                for a in args {
                    out = Term::app(out, self.ctor_arg_term(depth, a));
                }
                for a in args {
                    if let CtorArg::Point(e) = a {
                        out = Term::app(out, self.lift(depth, e));
                    }
                }
                out
            }
        }
    }

    fn path(&self, depth: usize, p: &PathExpr) -> Term {
        match p {
            PathExpr::Arg(j) => v(depth, self.args[*j]),
            PathExpr::Refl(e) => Term::refl(self.point(depth, e)),
        }
    }

    fn lift_path(&self, depth: usize, p: &PathExpr) -> Term {
        match p {
            PathExpr::Arg(j) => self.hyp(depth, *j),
            PathExpr::Refl(e) => Term::refl(self.lift(depth, e)),
        }
    }

    /// Induction hypothesis for argument `j`.
    fn hyp(&self, depth: usize, j: usize) -> Term {
        match &self.hyps {
            Hyps::Vars(lvls) => v(depth, lvls[j].expect("no hypothesis for an external argument")),
            Hyps::Elim => match &self.shapes[j] {
                ArgShape::Recursive => self.elim_app(depth, v(depth, self.args[j])),
                ArgShape::Path { lhs, rhs } => self.apd(
                    depth,
                    &|d: usize| self.point(d, lhs),
                    &|d: usize| self.point(d, rhs),
                    v(depth, self.args[j]),
                ),
                ArgShape::External => unreachable!("external arguments have no hypothesis"),
            },
        }
    }

    fn transport_motive(&self, depth: usize, lhs: Term, rhs: Term, path: Term, u: Term) -> Term {
        transport(depth, &|d, x| self.motive_at(d, x), lhs, rhs, path, u)
    }

    /// Dependent application of the eliminator to `path : l = r`.
    fn apd(&self, depth: usize, l: &dyn Fn(usize) -> Term, r: &dyn Fn(usize) -> Term, path: Term) -> Term {
        let d = depth + 3;
        let (x, y, p) = (v(d, depth), v(d, depth + 1), v(d, depth + 2));
        let motive = Term::id(
            self.motive_at(d, y.clone()),
            self.transport_motive(d, x.clone(), y.clone(), p, self.elim_app(d, x)),
            self.elim_app(d, y),
        );
        let base = Term::refl(self.elim_app(depth + 1, Term::Var(0)));
        Term::J {
            motive: arc(motive),
            base: arc(base),
            lhs: arc(l(depth)),
            rhs: arc(r(depth)),
            proof: arc(path),
        }
    }

    /// Type of the hypothesis for an identification argument.
    fn path_hyp_type(&self, depth: usize, j: usize, lhs: &PointExpr, rhs: &PointExpr) -> Term {
        Term::id(
            self.motive_at(depth, self.point(depth, rhs)),
            self.transport_motive(
                depth,
                self.point(depth, lhs),
                self.point(depth, rhs),
                v(depth, self.args[j]),
                self.lift(depth, lhs),
            ),
            self.lift(depth, rhs),
        )
    }

    fn ctor_term(&self, depth: usize, ctor: &Name) -> Term {
        let mut all = self.param_vars(depth);
        all.extend(self.args.iter().map(|&a| arc(v(depth, a))));
        Term::HitCtor(self.hit.name().clone(), ctor.clone(), all)
    }

    /// The family over `s : l = r` used for level-2 boundaries:
    /// `transport P s (lift l) = lift r`.
    fn level2_family(&self, depth: usize, l: &PointExpr, r: &PointExpr, s: Term) -> Term {
        Term::id(
            self.motive_at(depth, self.point(depth, r)),
            self.transport_motive(
                depth,
                self.point(depth, l),
                self.point(depth, r),
                s,
                self.lift(depth, l),
            ),
            self.lift(depth, r),
        )
    }

    /// The type a method (or the eliminator's image) must have for an
    /// identification constructor, given the current hypotheses.
    fn path_target(&self, depth: usize, ctor: &Name, boundary: &Boundary) -> Term {
        let c = self.ctor_term(depth, ctor);
        match boundary {
            Boundary::Level1 { lhs, rhs } => Term::id(
                self.motive_at(depth, self.point(depth, rhs)),
                self.transport_motive(
                    depth,
                    self.point(depth, lhs),
                    self.point(depth, rhs),
                    c,
                    self.lift(depth, lhs),
                ),
                self.lift(depth, rhs),
            ),
            Boundary::Level2 { lhs, rhs, p, q } => {
                let fam = |d: usize, s: Term| self.level2_family(d, lhs, rhs, s);
                Term::id(
                    fam(depth, self.path(depth, q)),
                    transport(
                        depth,
                        &fam,
                        self.path(depth, p),
                        self.path(depth, q),
                        c,
                        self.lift_path(depth, p),
                    ),
                    self.lift_path(depth, q),
                )
            }
        }
    }
}

/// Binds the arguments of constructor `i` (method order) starting at
/// `depth`, returning the telescope and the argument levels.
fn bind_args(hit: &ValidHit, params: &[Lvl], i: usize, mut depth: usize) -> (Vec<(Name, Term)>, Vec<Lvl>) {
    let ctor = hit.decl.ctors().nth(i).expect("constructor index");
    let mut tele = Vec::new();
    let mut lvls = Vec::new();
    for (h, ty) in &ctor.args {
        let table: Vec<Lvl> = params.iter().chain(&lvls).copied().collect();
        tele.push((h.clone(), reindex(ty, &table, depth)));
        lvls.push(depth);
        depth += 1;
    }
    (tele, lvls)
}

/// Type of method `i`, scoped over the parameters, the motive and methods
/// `0..i`.
pub fn method_type(hit: &ValidHit, i: usize) -> Term {
    let np = hit.decl.num_params();
    let params: Vec<Lvl> = (0..np).collect();
    let motive = np;
    let methods: Vec<Lvl> = (0..i).map(|k| np + 1 + k).collect();
    let mut depth = np + 1 + i;
    let (mut tele, args) = bind_args(hit, &params, i, depth);
    depth += args.len();

    let shapes = hit.arg_shapes(i);
    let mut hyp_lvls: Vec<Option<Lvl>> = vec![None; shapes.len()];
    let mut scope = Scope {
        hit,
        params,
        motive,
        methods,
        args,
        hyps: Hyps::Vars(Vec::new()),
        shapes,
    };
    for (j, shape) in shapes.iter().enumerate() {
        let arg_hint = &hit.decl.ctors().nth(i).unwrap().args[j].0;
        let dom = match shape {
            ArgShape::External => continue,
            ArgShape::Recursive => scope.motive_at(depth, v(depth, scope.args[j])),
            ArgShape::Path { lhs, rhs } => {
                scope.hyps = Hyps::Vars(hyp_lvls.clone());
                scope.path_hyp_type(depth, j, lhs, rhs)
            }
        };
        tele.push((name(&format!("{arg_hint}-ih")), dom));
        hyp_lvls[j] = Some(depth);
        depth += 1;
    }
    scope.hyps = Hyps::Vars(hyp_lvls);

    let ctor = hit.decl.ctors().nth(i).unwrap();
    let body = if i < hit.points.len() {
        let c = scope.ctor_term(depth, &ctor.name);
        scope.motive_at(depth, c)
    } else {
        let boundary = &hit.paths[i - hit.points.len()].boundary;
        scope.path_target(depth, &ctor.name, boundary)
    };
    close_pis(tele, body)
}

pub fn method_types(hit: &ValidHit) -> Vec<Term> {
    (0..hit.num_methods()).map(|i| method_type(hit, i)).collect()
}

fn param_tele(hit: &ValidHit) -> Vec<(Name, Term)> {
    hit.decl.params.clone()
}

fn motive_type(hit: &ValidHit, level: Level) -> Term {
    Term::pi("x", hit.decl.self_type(0), Term::Univ(level))
}

fn method_hint(hit: &ValidHit, i: usize) -> Name {
    name(&format!("{}-m", hit.decl.ctors().nth(i).unwrap().name))
}

/// The dependent eliminator's type, with the motive landing in `U 0`:
/// `(params) -> (P : X -> U 0) -> (methods) -> (x : X) -> P x`.
pub fn elim_type(hit: &ValidHit) -> Term {
    let np = hit.decl.num_params();
    let mut tele = param_tele(hit);
    tele.push((name("P"), motive_type(hit, Level(0))));
    for (i, mt) in method_types(hit).into_iter().enumerate() {
        tele.push((method_hint(hit, i), mt));
    }
    let depth = np + 1 + hit.num_methods();
    let x_ty = hit.decl.self_type(1 + hit.num_methods());
    let body = Term::pi("x", x_ty, Term::app(v(depth + 1, np), Term::Var(0)));
    close_pis(tele, body)
}

/// Body of the eliminator constant: `fun params P methods x. elim ...`.
pub fn elim_body(hit: &ValidHit) -> Term {
    let np = hit.decl.num_params();
    let nm = hit.num_methods();
    let mut hints: Vec<Name> = hit.decl.params.iter().map(|(h, _)| h.clone()).collect();
    hints.push(name("P"));
    hints.extend((0..nm).map(|i| method_hint(hit, i)));
    hints.push(name("x"));
    let depth = np + nm + 2;
    let body = Term::HitElim {
        hit: hit.name().clone(),
        motive: arc(Term::app(v(depth + 1, np), Term::Var(0))),
        methods: (0..nm).map(|k| arc(v(depth, np + 1 + k))).collect(),
        scrutinee: arc(Term::Var(0)),
    };
    close_lams(hints, body)
}

pub fn beta_name(ctor: &str, level: Level) -> Name {
    match level.0 {
        0 => name(&format!("{ctor}-beta")),
        n => name(&format!("{ctor}-beta{n}")),
    }
}

/// Type of the type-former constant: `(params) -> U level`.
pub fn former_type(hit: &ValidHit) -> Term {
    close_pis(param_tele(hit), Term::Univ(hit.decl.level))
}

pub fn former_body(hit: &ValidHit) -> Term {
    let hints = hit.decl.params.iter().map(|(h, _)| h.clone()).collect();
    close_lams(hints, hit.decl.self_type(0))
}

/// Type and body of the constant for constructor `ctor`.
pub fn ctor_constant(hit: &ValidHit, ctor: &Name) -> (Term, Term) {
    let decl = &hit.decl;
    let c = decl.find_ctor(ctor).expect("constructor");
    let np = decl.num_params();
    let n = c.args.len();
    let mut tele = param_tele(hit);
    tele.extend(c.args.iter().cloned());
    let target = match &c.target {
        Some(t) => t.clone(),
        None => decl.self_type(n),
    };
    let ty = close_pis(tele.clone(), target);
    let args = (0..np + n).map(|k| arc(Term::Var(np + n - 1 - k))).collect();
    let body = close_lams(
        tele.into_iter().map(|(h, _)| h).collect(),
        Term::HitCtor(decl.name.clone(), ctor.clone(), args),
    );
    (ty, body)
}

/// Propositional computation rules: for each identification constructor,
/// a constant stating that the eliminator's dependent action on it equals
/// the supplied method. The motive lands in `U level`; rules at level 0
/// are named `c-beta`, rules at level `n > 0` are named `c-betan`.
pub fn path_beta_constants(hit: &ValidHit, level: Level) -> Vec<(Name, Term)> {
    let np = hit.decl.num_params();
    let nm = hit.num_methods();
    let mut out = Vec::new();
    for (pi, shape) in hit.paths.iter().enumerate() {
        let i = hit.points.len() + pi;
        let ctor = &hit.decl.path_ctors[pi];
        let mut tele = param_tele(hit);
        tele.push((name("P"), motive_type(hit, level)));
        for (k, mt) in method_types(hit).into_iter().enumerate() {
            tele.push((method_hint(hit, k), mt));
        }
        let params: Vec<Lvl> = (0..np).collect();
        let methods: Vec<Lvl> = (0..nm).map(|k| np + 1 + k).collect();
        let mut depth = np + 1 + nm;
        let (arg_tele, args) = bind_args(hit, &params, i, depth);
        depth += args.len();
        tele.extend(arg_tele);

        let scope = Scope {
            hit,
            params,
            motive: np,
            methods,
            args,
            hyps: Hyps::Elim,
            shapes: &shape.args,
        };
        // The method applied to its arguments and hypotheses.
        let mut method_app = v(depth, scope.methods[i]);
        for &a in &scope.args {
            method_app = Term::app(method_app, v(depth, a));
        }
        for (j, s) in shape.args.iter().enumerate() {
            if !matches!(s, ArgShape::External) {
                method_app = Term::app(method_app, scope.hyp(depth, j));
            }
        }
        let c = scope.ctor_term(depth, &ctor.name);
        let body = match &shape.boundary {
            Boundary::Level1 { lhs, rhs } => {
                let carrier = scope.path_target(depth, &ctor.name, &shape.boundary);
                let apd = scope.apd(depth, &|d| scope.point(d, lhs), &|d| scope.point(d, rhs), c);
                Term::id(carrier, apd, method_app)
            }
            Boundary::Level2 { lhs, rhs, p, q } => {
                let g = |d: usize, s: Term| scope.apd(d, &|d2| scope.point(d2, lhs), &|d2| scope.point(d2, rhs), s);
                let fam = |d: usize, s: Term| {
                    Term::id(
                        scope.motive_at(d, scope.point(d, rhs)),
                        scope.transport_motive(
                            d,
                            scope.point(d, lhs),
                            scope.point(d, rhs),
                            s,
                            scope.elim_app(d, scope.point(d, lhs)),
                        ),
                        scope.elim_app(d, scope.point(d, rhs)),
                    )
                };
                let pt = scope.path(depth, p);
                let qt = scope.path(depth, q);
                let carrier = Term::id(
                    fam(depth, qt.clone()),
                    transport(depth, &fam, pt.clone(), qt.clone(), c.clone(), g(depth, pt.clone())),
                    g(depth, qt.clone()),
                );
                let d = depth + 3;
                let (s, s2, w) = (v(d, depth), v(d, depth + 1), v(d, depth + 2));
                let motive = Term::id(
                    fam(d, s2.clone()),
                    transport(d, &fam, s.clone(), s2.clone(), w, g(d, s)),
                    g(d, s2),
                );
                let base = Term::refl(g(depth + 1, Term::Var(0)));
                let apd2 = Term::J {
                    motive: arc(motive),
                    base: arc(base),
                    lhs: arc(pt),
                    rhs: arc(qt),
                    proof: arc(c),
                };
                Term::id(carrier, apd2, method_app)
            }
        };
        out.push((beta_name(&ctor.name, level), close_pis(tele, body)));
    }
    out
}

//! Core syntax: nameless terms and the purely syntactic operations on them.
//!
//! Variables are de Bruijn indices. Binder names are kept only as display
//! hints and are ignored by [`structural_eq`], so structural equality is
//! alpha-equivalence.

use std::fmt;
use std::sync::Arc;

/// Interned-ish identifier used for globals, constructors and binder hints.
pub type Name = Arc<str>;

pub type RcTerm = Arc<Term>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A universe index. Levels compare by integer order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(pub u32);

impl Level {
    pub fn succ(self) -> Level {
        Level(self.0 + 1)
    }

    pub fn max(self, other: Level) -> Level {
        Level(self.0.max(other.0))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Byte range in a source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// Core terms. Fields documented as "binds n" are scoped under that many
/// fresh variables, innermost last (so `Var(0)` is the last one bound).
#[derive(Debug, Clone)]
pub enum Term {
    Var(usize),
    Univ(Level),
    /// Dependent function type; the codomain binds 1.
    Pi(Name, RcTerm, RcTerm),
    /// Binds 1.
    Lam(Name, RcTerm),
    App(RcTerm, RcTerm),
    /// Dependent pair type; the second component binds 1.
    Sigma(Name, RcTerm, RcTerm),
    Pair(RcTerm, RcTerm),
    Fst(RcTerm),
    Snd(RcTerm),
    Sum(RcTerm, RcTerm),
    Inl(RcTerm),
    Inr(RcTerm),
    /// `motive`, `left` and `right` each bind 1.
    SumElim {
        motive: RcTerm,
        left: RcTerm,
        right: RcTerm,
        scrutinee: RcTerm,
    },
    Nat,
    Zero,
    Succ(RcTerm),
    /// `motive` binds 1, `succ` binds 2 (predecessor, then induction hypothesis).
    NatElim {
        motive: RcTerm,
        zero: RcTerm,
        succ: RcTerm,
        scrutinee: RcTerm,
    },
    Id(RcTerm, RcTerm, RcTerm),
    Refl(RcTerm),
    /// `motive` binds 3 (x, y, p : x = y); `base` binds 1.
    J {
        motive: RcTerm,
        base: RcTerm,
        lhs: RcTerm,
        rhs: RcTerm,
        proof: RcTerm,
    },
    HitForm(Name, Vec<RcTerm>),
    /// Constructor applied to the HIT parameters followed by its own arguments.
    HitCtor(Name, Name, Vec<RcTerm>),
    /// `motive` binds 1.
    HitElim {
        hit: Name,
        motive: RcTerm,
        methods: Vec<RcTerm>,
        scrutinee: RcTerm,
    },
    Const(Name),
    /// Type ascription `(t : T)`.
    Ann(RcTerm, RcTerm),
    /// An elaboration hole `_`, solved during checking.
    Hole,
    /// Source location wrapper; transparent to every semantic operation.
    Loc(Span, RcTerm),
}

impl Term {
    /// Strips any source-location wrappers from the head of the term.
    pub fn unloc(&self) -> &Term {
        let mut t = self;
        while let Term::Loc(_, inner) = t {
            t = inner;
        }
        t
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn pi(hint: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(name(hint), Arc::new(dom), Arc::new(cod))
    }

    pub fn lam(hint: &str, body: Term) -> Term {
        Term::Lam(name(hint), Arc::new(body))
    }

    pub fn sigma(hint: &str, dom: Term, cod: Term) -> Term {
        Term::Sigma(name(hint), Arc::new(dom), Arc::new(cod))
    }

    pub fn id(carrier: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id(Arc::new(carrier), Arc::new(lhs), Arc::new(rhs))
    }

    pub fn refl(point: Term) -> Term {
        Term::Refl(Arc::new(point))
    }

    pub fn succ(pred: Term) -> Term {
        Term::Succ(Arc::new(pred))
    }

    pub fn constant(n: &str) -> Term {
        Term::Const(name(n))
    }

    /// The numeral `n` as a chain of successors.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// True if the term mentions the free variable with the given index.
    pub fn has_free_var(&self, index: usize) -> bool {
        let mut found = false;
        visit_vars(self, 0, &mut |i, depth| {
            if i >= depth && i - depth == index {
                found = true;
            }
        });
        found
    }

    /// True if every free variable index is below `len`.
    pub fn is_closed_under(&self, len: usize) -> bool {
        let mut ok = true;
        visit_vars(self, 0, &mut |i, depth| {
            if i >= depth && i - depth >= len {
                ok = false;
            }
        });
        ok
    }

    /// Removes every [`Term::Loc`] wrapper.
    pub fn strip_locs(&self) -> Term {
        map_vars(self, 0, &mut |i, _| Term::Var(i))
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        structural_eq(self, other)
    }
}

impl Eq for Term {}

fn visit_vars(t: &Term, depth: usize, f: &mut impl FnMut(usize, usize)) {
    use Term::*;
    match t {
        Var(i) => f(*i, depth),
        Univ(_) | Nat | Zero | Const(_) | Hole => {}
        Pi(_, a, b) | Sigma(_, a, b) => {
            visit_vars(a, depth, f);
            visit_vars(b, depth + 1, f);
        }
        Lam(_, b) => visit_vars(b, depth + 1, f),
        App(a, b) | Pair(a, b) | Sum(a, b) | Ann(a, b) => {
            visit_vars(a, depth, f);
            visit_vars(b, depth, f);
        }
        Fst(a) | Snd(a) | Inl(a) | Inr(a) | Succ(a) | Refl(a) | Loc(_, a) => visit_vars(a, depth, f),
        SumElim {
            motive,
            left,
            right,
            scrutinee,
        } => {
            visit_vars(motive, depth + 1, f);
            visit_vars(left, depth + 1, f);
            visit_vars(right, depth + 1, f);
            visit_vars(scrutinee, depth, f);
        }
        NatElim {
            motive,
            zero,
            succ,
            scrutinee,
        } => {
            visit_vars(motive, depth + 1, f);
            visit_vars(zero, depth, f);
            visit_vars(succ, depth + 2, f);
            visit_vars(scrutinee, depth, f);
        }
        Id(a, b, c) => {
            visit_vars(a, depth, f);
            visit_vars(b, depth, f);
            visit_vars(c, depth, f);
        }
        J {
            motive,
            base,
            lhs,
            rhs,
            proof,
        } => {
            visit_vars(motive, depth + 3, f);
            visit_vars(base, depth + 1, f);
            visit_vars(lhs, depth, f);
            visit_vars(rhs, depth, f);
            visit_vars(proof, depth, f);
        }
        HitForm(_, args) | HitCtor(_, _, args) => {
            for a in args {
                visit_vars(a, depth, f);
            }
        }
        HitElim {
            motive,
            methods,
            scrutinee,
            ..
        } => {
            visit_vars(motive, depth + 1, f);
            for m in methods {
                visit_vars(m, depth, f);
            }
            visit_vars(scrutinee, depth, f);
        }
    }
}

/// Rebuilds a term, replacing each variable occurrence `Var(i)` found under
/// `depth` extra binders by `f(i, depth)`. `Loc` wrappers are dropped when
/// `keep_locs` is false.
fn map_vars_impl(t: &Term, depth: usize, keep_locs: bool, f: &mut impl FnMut(usize, usize) -> Term) -> Term {
    use Term::*;
    let mut go = |t: &RcTerm, d: usize| Arc::new(map_vars_impl(t, d, keep_locs, f));
    match t {
        Var(i) => f(*i, depth),
        Univ(l) => Univ(*l),
        Nat => Nat,
        Zero => Zero,
        Hole => Hole,
        Const(c) => Const(c.clone()),
        Pi(h, a, b) => {
            let a = go(a, depth);
            Pi(h.clone(), a, go(b, depth + 1))
        }
        Sigma(h, a, b) => {
            let a = go(a, depth);
            Sigma(h.clone(), a, go(b, depth + 1))
        }
        Lam(h, b) => Lam(h.clone(), go(b, depth + 1)),
        App(a, b) => {
            let a = go(a, depth);
            App(a, go(b, depth))
        }
        Pair(a, b) => {
            let a = go(a, depth);
            Pair(a, go(b, depth))
        }
        Sum(a, b) => {
            let a = go(a, depth);
            Sum(a, go(b, depth))
        }
        Ann(a, b) => {
            let a = go(a, depth);
            Ann(a, go(b, depth))
        }
        Fst(a) => Fst(go(a, depth)),
        Snd(a) => Snd(go(a, depth)),
        Inl(a) => Inl(go(a, depth)),
        Inr(a) => Inr(go(a, depth)),
        Succ(a) => Succ(go(a, depth)),
        Refl(a) => Refl(go(a, depth)),
        Loc(s, a) => {
            if keep_locs {
                Loc(*s, go(a, depth))
            } else {
                map_vars_impl(a, depth, keep_locs, f)
            }
        }
        SumElim {
            motive,
            left,
            right,
            scrutinee,
        } => SumElim {
            motive: go(motive, depth + 1),
            left: go(left, depth + 1),
            right: go(right, depth + 1),
            scrutinee: go(scrutinee, depth),
        },
        NatElim {
            motive,
            zero,
            succ,
            scrutinee,
        } => NatElim {
            motive: go(motive, depth + 1),
            zero: go(zero, depth),
            succ: go(succ, depth + 2),
            scrutinee: go(scrutinee, depth),
        },
        Id(a, b, c) => {
            let a = go(a, depth);
            let b = go(b, depth);
            Id(a, b, go(c, depth))
        }
        J {
            motive,
            base,
            lhs,
            rhs,
            proof,
        } => J {
            motive: go(motive, depth + 3),
            base: go(base, depth + 1),
            lhs: go(lhs, depth),
            rhs: go(rhs, depth),
            proof: go(proof, depth),
        },
        HitForm(n, args) => HitForm(n.clone(), args.iter().map(|a| go(a, depth)).collect()),
        HitCtor(n, c, args) => HitCtor(n.clone(), c.clone(), args.iter().map(|a| go(a, depth)).collect()),
        HitElim {
            hit,
            motive,
            methods,
            scrutinee,
        } => HitElim {
            hit: hit.clone(),
            motive: go(motive, depth + 1),
            methods: methods.iter().map(|m| go(m, depth)).collect(),
            scrutinee: go(scrutinee, depth),
        },
    }
}

fn map_vars(t: &Term, depth: usize, f: &mut impl FnMut(usize, usize) -> Term) -> Term {
    map_vars_impl(t, depth, false, f)
}

fn map_vars_keep(t: &Term, depth: usize, f: &mut impl FnMut(usize, usize) -> Term) -> Term {
    map_vars_impl(t, depth, true, f)
}

/// Adds `amount` to every free variable with index at least `cutoff`.
pub fn shift(t: &Term, amount: usize, cutoff: usize) -> Term {
    if amount == 0 {
        return t.clone();
    }
    map_vars_keep(t, 0, &mut |i, depth| {
        if i >= depth + cutoff {
            Term::Var(i + amount)
        } else {
            Term::Var(i)
        }
    })
}

/// Removes `amount` from every free variable with index at least `cutoff`.
///
/// Panics if a free variable in `cutoff..cutoff + amount` occurs, since it
/// would be captured.
pub fn unshift(t: &Term, amount: usize, cutoff: usize) -> Term {
    map_vars_keep(t, 0, &mut |i, depth| {
        if i >= depth + cutoff + amount {
            Term::Var(i - amount)
        } else if i >= depth + cutoff {
            panic!("unshift: variable {i} would escape its scope")
        } else {
            Term::Var(i)
        }
    })
}

/// Substitutes `arg` for `Var(0)` in `body`, decrementing the remaining free
/// variables.
pub fn instantiate(body: &Term, arg: &Term) -> Term {
    map_vars_keep(body, 0, &mut |i, depth| {
        if i < depth {
            Term::Var(i)
        } else if i == depth {
            shift(arg, depth, 0)
        } else {
            Term::Var(i - 1)
        }
    })
}

/// Moves a term between contexts by a level renaming.
///
/// `t` lives in a context of length `table.len()`; its free variable at
/// level `k` is sent to level `table[k]` of a context of length `depth`.
pub fn reindex(t: &Term, table: &[usize], depth: usize) -> Term {
    let src_len = table.len();
    map_vars_keep(t, 0, &mut |i, binders| {
        if i < binders {
            Term::Var(i)
        } else {
            let level = src_len - 1 - (i - binders);
            Term::Var(depth + binders - 1 - table[level])
        }
    })
}

/// Structural equality of terms up to binder hints and source locations.
pub fn structural_eq(t: &Term, u: &Term) -> bool {
    use Term::*;
    let eq = |a: &RcTerm, b: &RcTerm| Arc::ptr_eq(a, b) || structural_eq(a, b);
    let all = |a: &[RcTerm], b: &[RcTerm]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| eq(x, y));
    match (t.unloc(), u.unloc()) {
        (Var(i), Var(j)) => i == j,
        (Univ(a), Univ(b)) => a == b,
        (Nat, Nat) | (Zero, Zero) | (Hole, Hole) => true,
        (Const(a), Const(b)) => a == b,
        (Pi(_, a, b), Pi(_, c, d)) | (Sigma(_, a, b), Sigma(_, c, d)) => eq(a, c) && eq(b, d),
        (Lam(_, a), Lam(_, b)) => eq(a, b),
        (App(a, b), App(c, d)) | (Pair(a, b), Pair(c, d)) | (Sum(a, b), Sum(c, d)) | (Ann(a, b), Ann(c, d)) => {
            eq(a, c) && eq(b, d)
        }
        (Fst(a), Fst(b))
        | (Snd(a), Snd(b))
        | (Inl(a), Inl(b))
        | (Inr(a), Inr(b))
        | (Succ(a), Succ(b))
        | (Refl(a), Refl(b)) => eq(a, b),
        (
            SumElim {
                motive: m1,
                left: l1,
                right: r1,
                scrutinee: s1,
            },
            SumElim {
                motive: m2,
                left: l2,
                right: r2,
                scrutinee: s2,
            },
        ) => eq(m1, m2) && eq(l1, l2) && eq(r1, r2) && eq(s1, s2),
        (
            NatElim {
                motive: m1,
                zero: z1,
                succ: c1,
                scrutinee: s1,
            },
            NatElim {
                motive: m2,
                zero: z2,
                succ: c2,
                scrutinee: s2,
            },
        ) => eq(m1, m2) && eq(z1, z2) && eq(c1, c2) && eq(s1, s2),
        (Id(a, b, c), Id(d, e, f)) => eq(a, d) && eq(b, e) && eq(c, f),
        (
            J {
                motive: m1,
                base: b1,
                lhs: l1,
                rhs: r1,
                proof: p1,
            },
            J {
                motive: m2,
                base: b2,
                lhs: l2,
                rhs: r2,
                proof: p2,
            },
        ) => eq(m1, m2) && eq(b1, b2) && eq(l1, l2) && eq(r1, r2) && eq(p1, p2),
        (HitForm(n, a), HitForm(m, b)) => n == m && all(a, b),
        (HitCtor(n, c, a), HitCtor(m, d, b)) => n == m && c == d && all(a, b),
        (
            HitElim {
                hit: h1,
                motive: m1,
                methods: ms1,
                scrutinee: s1,
            },
            HitElim {
                hit: h2,
                motive: m2,
                methods: ms2,
                scrutinee: s2,
            },
        ) => h1 == h2 && eq(m1, m2) && all(ms1, ms2) && eq(s1, s2),
        _ => false,
    }
}

/// Visits every global constant referenced by the term.
pub fn constants(t: &Term, out: &mut Vec<Name>) {
    use Term::*;
    match t {
        Const(c) => out.push(c.clone()),
        HitForm(n, args) | HitCtor(n, _, args) => {
            out.push(n.clone());
            for a in args {
                constants(a, out);
            }
        }
        HitElim {
            hit,
            motive,
            methods,
            scrutinee,
        } => {
            out.push(hit.clone());
            constants(motive, out);
            for m in methods {
                constants(m, out);
            }
            constants(scrutinee, out);
        }
        Var(_) | Univ(_) | Nat | Zero | Hole => {}
        Pi(_, a, b) | Sigma(_, a, b) | App(a, b) | Pair(a, b) | Sum(a, b) | Ann(a, b) => {
            constants(a, out);
            constants(b, out);
        }
        Lam(_, a) | Fst(a) | Snd(a) | Inl(a) | Inr(a) | Succ(a) | Refl(a) | Loc(_, a) => constants(a, out),
        SumElim {
            motive,
            left,
            right,
            scrutinee,
        } => {
            for x in [motive, left, right, scrutinee] {
                constants(x, out);
            }
        }
        NatElim {
            motive,
            zero,
            succ,
            scrutinee,
        } => {
            for x in [motive, zero, succ, scrutinee] {
                constants(x, out);
            }
        }
        Id(a, b, c) => {
            for x in [a, b, c] {
                constants(x, out);
            }
        }
        J {
            motive,
            base,
            lhs,
            rhs,
            proof,
        } => {
            for x in [motive, base, lhs, rhs, proof] {
                constants(x, out);
            }
        }
    }
}

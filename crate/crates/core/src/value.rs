//! Semantic domain for normalization by evaluation.

use std::sync::Arc;

use crate::syntax::{Level, Name, RcTerm};

pub type Val = Arc<Value>;

/// A de Bruijn level: variables count outward-in from the context root.
pub type Lvl = usize;

#[derive(Debug, Clone)]
pub enum Value {
    Univ(Level),
    Pi(Val, Closure),
    Lam(Closure),
    Sigma(Val, Closure),
    Pair(Val, Val),
    Sum(Val, Val),
    Inl(Val),
    Inr(Val),
    Nat,
    Zero,
    Succ(Val),
    Id(Val, Val, Val),
    Refl(Val),
    HitForm(Name, Vec<Val>),
    /// A point constructor; identification constructors are neutral.
    HitCtor(Name, Name, Vec<Val>),
    Neutral(Neutral),
}

impl Value {
    pub fn var(level: Lvl) -> Val {
        Arc::new(Value::Neutral(Neutral {
            head: Head::Var(level),
            spine: Vec::new(),
        }))
    }

    pub fn as_neutral(&self) -> Option<&Neutral> {
        match self {
            Value::Neutral(n) => Some(n),
            _ => None,
        }
    }
}

/// A term body together with the environment it was evaluated in. The body
/// binds as many variables as the construct it came from requires.
#[derive(Debug, Clone)]
pub struct Closure {
    pub env: Env,
    pub body: RcTerm,
    pub hint: Name,
}

#[derive(Debug, Clone)]
pub enum Head {
    Var(Lvl),
    Postulate(Name),
    /// An identification constructor applied to parameters and arguments.
    PathCtor(Name, Name, Vec<Val>),
}

/// A stuck elimination. `spine` is in application order, outermost last.
#[derive(Debug, Clone)]
pub struct Neutral {
    pub head: Head,
    pub spine: Vec<Frame>,
}

#[derive(Debug, Clone)]
pub enum Frame {
    App(Val),
    Fst,
    Snd,
    SumElim {
        motive: Closure,
        left: Closure,
        right: Closure,
    },
    NatElim {
        motive: Closure,
        zero: Val,
        succ: Closure,
    },
    J {
        motive: Closure,
        base: Closure,
        lhs: Val,
        rhs: Val,
    },
    HitElim {
        hit: Name,
        motive: Closure,
        methods: Vec<Val>,
    },
}

impl Neutral {
    pub fn push(&self, frame: Frame) -> Val {
        let mut spine = self.spine.clone();
        spine.push(frame);
        Arc::new(Value::Neutral(Neutral {
            head: self.head.clone(),
            spine,
        }))
    }
}

/// Persistent environment of values indexed by de Bruijn index.
#[derive(Debug, Clone, Default)]
pub struct Env {
    node: Option<Arc<EnvNode>>,
    len: usize,
}

#[derive(Debug)]
struct EnvNode {
    val: Val,
    next: Option<Arc<EnvNode>>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn extend(&self, val: Val) -> Env {
        Env {
            node: Some(Arc::new(EnvNode {
                val,
                next: self.node.clone(),
            })),
            len: self.len + 1,
        }
    }

    pub fn lookup(&self, index: usize) -> Option<&Val> {
        let mut node = self.node.as_ref();
        for _ in 0..index {
            node = node?.next.as_ref();
        }
        node.map(|n| &n.val)
    }

    /// Values innermost-first.
    pub fn iter(&self) -> impl Iterator<Item = &Val> {
        let mut node = self.node.as_deref();
        std::iter::from_fn(move || {
            let n = node?;
            node = n.next.as_deref();
            Some(&n.val)
        })
    }
}

impl FromIterator<Val> for Env {
    /// Builds an environment from values listed outermost-first.
    fn from_iter<I: IntoIterator<Item = Val>>(iter: I) -> Env {
        iter.into_iter().fold(Env::new(), |env, v| env.extend(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_indexing_is_innermost_first() {
        let env: Env = [Value::var(0), Value::var(1), Value::var(2)].into_iter().collect();
        assert_eq!(env.len(), 3);
        let lvl = |v: &Val| match &**v {
            Value::Neutral(Neutral { head: Head::Var(l), .. }) => *l,
            _ => unreachable!(),
        };
        assert_eq!(lvl(env.lookup(0).unwrap()), 2);
        assert_eq!(lvl(env.lookup(2).unwrap()), 0);
        assert!(env.lookup(3).is_none());
        assert_eq!(env.iter().map(lvl).collect::<Vec<_>>(), vec![2, 1, 0]);
    }
}

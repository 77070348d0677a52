//! Global environment of checked declarations.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::hit::ValidHit;
use crate::syntax::{Name, Term};
use crate::value::Val;

#[derive(Debug, Clone)]
pub enum Entry {
    Def {
        ty: Term,
        body: Term,
        ty_val: Val,
        val: Val,
    },
    Postulate {
        ty: Term,
        ty_val: Val,
    },
}

impl Entry {
    pub fn ty(&self) -> &Term {
        match self {
            Entry::Def { ty, .. } | Entry::Postulate { ty, .. } => ty,
        }
    }

    pub fn ty_val(&self) -> &Val {
        match self {
            Entry::Def { ty_val, .. } | Entry::Postulate { ty_val, .. } => ty_val,
        }
    }
}

/// A checked higher inductive type together with its generated eliminator
/// data.
#[derive(Debug, Clone)]
pub struct HitInfo {
    pub hit: ValidHit,
    /// Method `i`'s type, scoped over the parameters, the motive
    /// `P : X -> U`, and methods `0..i`.
    pub method_types: Vec<Term>,
    pub elim_name: Name,
    pub elim_type: Term,
    /// Names of the propositional computation rules, one per
    /// identification constructor.
    pub beta_names: Vec<Name>,
}

#[derive(Debug, Clone, Default)]
pub struct GlobalEnv {
    consts: IndexMap<Name, Arc<Entry>>,
    hits: IndexMap<Name, Arc<HitInfo>>,
}

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Arc<Entry>> {
        self.consts.get(name)
    }

    pub fn hit(&self, name: &str) -> Option<&Arc<HitInfo>> {
        self.hits.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.consts.contains_key(name) || self.hits.contains_key(name)
    }

    /// Adds a constant. Returns false (leaving the environment unchanged) if
    /// the name is taken.
    pub fn insert(&mut self, name: Name, entry: Entry) -> bool {
        if self.consts.contains_key(&name) {
            return false;
        }
        self.consts.insert(name, Arc::new(entry));
        true
    }

    pub fn insert_shared(&mut self, name: Name, entry: Arc<Entry>) -> bool {
        if self.consts.contains_key(&name) {
            return false;
        }
        self.consts.insert(name, entry);
        true
    }

    pub fn insert_hit(&mut self, info: HitInfo) -> bool {
        let name = info.hit.name().clone();
        if self.hits.contains_key(&name) {
            return false;
        }
        self.hits.insert(name, Arc::new(info));
        true
    }

    pub fn insert_hit_shared(&mut self, info: Arc<HitInfo>) -> bool {
        let name = info.hit.name().clone();
        if self.hits.contains_key(&name) {
            return false;
        }
        self.hits.insert(name, info);
        true
    }

    /// Constants in declaration order.
    pub fn constants(&self) -> impl Iterator<Item = (&Name, &Arc<Entry>)> {
        self.consts.iter()
    }

    pub fn hits(&self) -> impl Iterator<Item = &Arc<HitInfo>> {
        self.hits.values()
    }

    pub fn len(&self) -> usize {
        self.consts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }
}

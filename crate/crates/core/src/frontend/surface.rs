//! Surface syntax: named variables, holes and source spans on every node.

use std::path::PathBuf;

use crate::syntax::Span;

#[derive(Debug, Clone)]
pub struct STerm {
    pub kind: SKind,
    pub span: Span,
}

/// Keyword-headed primitives that take their arguments by application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prim {
    Fst,
    Snd,
    Inl,
    Inr,
    Refl,
}

impl Prim {
    pub fn keyword(self) -> &'static str {
        match self {
            Prim::Fst => "fst",
            Prim::Snd => "snd",
            Prim::Inl => "inl",
            Prim::Inr => "inr",
            Prim::Refl => "refl",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

/// A parenthesised binder group `(x y : A)`.
#[derive(Debug, Clone)]
pub struct Binder {
    pub names: Vec<Ident>,
    pub ty: STerm,
}

#[derive(Debug, Clone)]
pub enum SKind {
    Var(String),
    Hole,
    Univ(u32),
    Num(u64),
    Prim(Prim),
    /// `elim X`: the level-generic eliminator of a higher inductive type.
    Elim(Ident),
    Fun(Vec<Ident>, Box<STerm>),
    Pi(Vec<Binder>, Box<STerm>),
    Arrow(Box<STerm>, Box<STerm>),
    Sigma(Vec<Binder>, Box<STerm>),
    Prod(Box<STerm>, Box<STerm>),
    App(Box<STerm>, Vec<STerm>),
    Pair(Box<STerm>, Box<STerm>),
    /// `a = b in A`
    Eq(Box<STerm>, Box<STerm>, Box<STerm>),
    Ann(Box<STerm>, Box<STerm>),
}

impl STerm {
    pub fn new(kind: SKind, span: Span) -> STerm {
        STerm { kind, span }
    }

    /// Builds a node without a meaningful source position.
    pub fn synth(kind: SKind) -> STerm {
        STerm {
            kind,
            span: Span::default(),
        }
    }

    pub fn var(name: &str) -> STerm {
        STerm::synth(SKind::Var(name.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct SCtor {
    pub name: Ident,
    pub ty: STerm,
}

#[derive(Debug, Clone)]
pub enum SDecl {
    Def {
        name: Ident,
        binders: Vec<Binder>,
        ty: STerm,
        body: STerm,
        span: Span,
    },
    Postulate {
        name: Ident,
        binders: Vec<Binder>,
        ty: STerm,
        span: Span,
    },
    Hit {
        name: Ident,
        params: Vec<Binder>,
        ty: STerm,
        ctors: Vec<SCtor>,
        span: Span,
    },
}

impl SDecl {
    pub fn name(&self) -> &Ident {
        match self {
            SDecl::Def { name, .. } | SDecl::Postulate { name, .. } | SDecl::Hit { name, .. } => name,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            SDecl::Def { span, .. } | SDecl::Postulate { span, .. } | SDecl::Hit { span, .. } => *span,
        }
    }
}

/// A parsed source file. Declaration order is preserved.
#[derive(Debug, Clone)]
pub struct ModuleSource {
    pub path: PathBuf,
    pub source: String,
    pub imports: Vec<Ident>,
    pub decls: Vec<SDecl>,
}

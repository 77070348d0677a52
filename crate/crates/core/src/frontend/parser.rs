//! Recursive-descent parser producing surface syntax.
//!
//! ```text
//! decl   ::= "def" id binder* ":" expr ":=" expr
//!          | "postulate" id binder* ":" expr
//!          | "hit" id binder* ":" expr "where" ("|" id ":" expr)*
//!          | "import" id
//! expr   ::= "fun" name+ "." expr
//!          | binder+ "->" expr
//!          | binder+ "*" prod ("->" expr)?
//!          | prod ("->" expr)?
//! prod   ::= eq ("*" prod)?
//! eq     ::= app ("=" app "in" app)?
//! app    ::= head atom*
//! head   ::= atom | "fst" | "snd" | "inl" | "inr" | "refl"
//! atom   ::= id | "_" | "U" nat | nat | "elim" id
//!          | "(" expr ")" | "(" expr ":" expr ")" | "(" expr "," expr ")"
//!          | "⟨" expr "," expr "⟩"
//! binder ::= "(" name+ ":" expr ")"
//! ```

use std::path::PathBuf;

use crate::diagnostic::{Diagnostic, ErrorClass};
use crate::frontend::lexer::{tokenize, Tok, Token};
use crate::frontend::surface::*;
use crate::syntax::Span;

pub type PResult<T> = Result<T, Diagnostic>;

pub struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    eof: Span,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], src_len: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            eof: Span::new(src_len, src_len),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn span_here(&self) -> Span {
        self.toks.get(self.pos).map_or(self.eof, |t| t.span)
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn since(&self, start: usize) -> Span {
        Span::new(start, self.prev_end().max(start))
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == Some(t)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> Diagnostic {
        let found = match self.toks.get(self.pos) {
            Some(t) => t.tok.describe(),
            None => "end of file".to_string(),
        };
        let expected = match expected {
            [one] => one.to_string(),
            many => format!("one of {}", many.join(", ")),
        };
        Diagnostic::new(
            ErrorClass::ParseError,
            Some(self.span_here()),
            format!("expected {expected}, found {found}"),
        )
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.at(&t) {
            let sp = self.span_here();
            self.pos += 1;
            Ok(sp)
        } else {
            Err(self.error(&[&format!("`{t}`")]))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let id = Ident {
                    name: s.clone(),
                    span: self.span_here(),
                };
                self.pos += 1;
                Ok(id)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    /// A binder name: an identifier or `_`.
    fn binder_name(&mut self) -> PResult<Ident> {
        if self.at(&Tok::Underscore) {
            let span = self.span_here();
            self.pos += 1;
            return Ok(Ident { name: "_".into(), span });
        }
        self.ident()
    }

    fn at_binder_name(&self, k: usize) -> bool {
        matches!(self.peek_at(k), Some(Tok::Ident(_) | Tok::Underscore))
    }

    pub fn module(&mut self) -> PResult<(Vec<Ident>, Vec<SDecl>)> {
        let mut imports = Vec::new();
        let mut decls = Vec::new();
        while self.peek().is_some() {
            match self.peek() {
                Some(Tok::Import) => {
                    self.pos += 1;
                    imports.push(self.ident()?);
                }
                Some(Tok::Def | Tok::Postulate | Tok::Hit) => decls.push(self.decl()?),
                _ => return Err(self.error(&["`def`", "`postulate`", "`hit`", "`import`"])),
            }
        }
        Ok((imports, decls))
    }

    fn binders(&mut self) -> PResult<Vec<Binder>> {
        let mut out = Vec::new();
        while self.at(&Tok::LParen) {
            out.push(self.binder()?);
        }
        Ok(out)
    }

    fn binder(&mut self) -> PResult<Binder> {
        self.expect(Tok::LParen)?;
        let mut names = vec![self.binder_name()?];
        while !self.at(&Tok::Colon) {
            names.push(self.binder_name()?);
        }
        self.expect(Tok::Colon)?;
        let ty = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(Binder { names, ty })
    }

    pub fn decl(&mut self) -> PResult<SDecl> {
        let start = self.span_here().start;
        match self.peek() {
            Some(Tok::Def) => {
                self.pos += 1;
                let name = self.ident()?;
                let binders = self.binders()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                self.expect(Tok::Define)?;
                let body = self.expr()?;
                Ok(SDecl::Def {
                    name,
                    binders,
                    ty,
                    body,
                    span: self.since(start),
                })
            }
            Some(Tok::Postulate) => {
                self.pos += 1;
                let name = self.ident()?;
                let binders = self.binders()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                Ok(SDecl::Postulate {
                    name,
                    binders,
                    ty,
                    span: self.since(start),
                })
            }
            Some(Tok::Hit) => {
                self.pos += 1;
                let name = self.ident()?;
                let params = self.binders()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                self.expect(Tok::Where)?;
                let mut ctors = Vec::new();
                while self.eat(&Tok::Bar) {
                    let name = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.expr()?;
                    ctors.push(SCtor { name, ty });
                }
                Ok(SDecl::Hit {
                    name,
                    params,
                    ty,
                    ctors,
                    span: self.since(start),
                })
            }
            _ => Err(self.error(&["`def`", "`postulate`", "`hit`"])),
        }
    }

    /// True if the tokens ahead look like `( names :`.
    fn looks_like_binder(&self) -> bool {
        if !self.at(&Tok::LParen) || !self.at_binder_name(1) {
            return false;
        }
        let mut k = 1;
        while self.at_binder_name(k) {
            k += 1;
        }
        self.peek_at(k) == Some(&Tok::Colon)
    }

    /// Tries to read a telescope followed by `->` or `*`; restores the
    /// position if the parenthesised groups turn out to be annotations.
    fn telescope(&mut self) -> PResult<Option<(Vec<Binder>, Tok)>> {
        if !self.looks_like_binder() {
            return Ok(None);
        }
        let saved = self.pos;
        let mut tele = Vec::new();
        while self.looks_like_binder() {
            match self.binder() {
                Ok(b) => tele.push(b),
                Err(_) => {
                    self.pos = saved;
                    return Ok(None);
                }
            }
        }
        match self.peek() {
            Some(t @ (Tok::Arrow | Tok::Times)) => {
                let t = t.clone();
                self.pos += 1;
                Ok(Some((tele, t)))
            }
            _ => {
                self.pos = saved;
                Ok(None)
            }
        }
    }

    pub fn expr(&mut self) -> PResult<STerm> {
        let start = self.span_here().start;
        if self.eat(&Tok::Fun) {
            let mut names = vec![self.binder_name()?];
            while !self.at(&Tok::Dot) {
                names.push(self.binder_name()?);
            }
            self.expect(Tok::Dot)?;
            let body = self.expr()?;
            return Ok(STerm::new(SKind::Fun(names, Box::new(body)), self.since(start)));
        }
        let lhs = match self.telescope()? {
            Some((tele, Tok::Arrow)) => {
                let cod = self.expr()?;
                return Ok(STerm::new(SKind::Pi(tele, Box::new(cod)), self.since(start)));
            }
            Some((tele, _)) => {
                let rest = self.prod()?;
                STerm::new(SKind::Sigma(tele, Box::new(rest)), self.since(start))
            }
            None => self.prod()?,
        };
        if self.eat(&Tok::Arrow) {
            let cod = self.expr()?;
            return Ok(STerm::new(
                SKind::Arrow(Box::new(lhs), Box::new(cod)),
                self.since(start),
            ));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> PResult<STerm> {
        let start = self.span_here().start;
        let lhs = self.eq()?;
        if self.eat(&Tok::Times) {
            let rhs = self.prod()?;
            return Ok(STerm::new(SKind::Prod(Box::new(lhs), Box::new(rhs)), self.since(start)));
        }
        Ok(lhs)
    }

    fn eq(&mut self) -> PResult<STerm> {
        let start = self.span_here().start;
        let lhs = self.app()?;
        if self.eat(&Tok::Eq) {
            let rhs = self.app()?;
            self.expect(Tok::In)?;
            let carrier = self.app()?;
            return Ok(STerm::new(
                SKind::Eq(Box::new(lhs), Box::new(rhs), Box::new(carrier)),
                self.since(start),
            ));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::Underscore | Tok::U | Tok::Nat(_) | Tok::Elim | Tok::LParen | Tok::LAngle)
        )
    }

    fn app(&mut self) -> PResult<STerm> {
        let start = self.span_here().start;
        let prim = match self.peek() {
            Some(Tok::Fst) => Some(Prim::Fst),
            Some(Tok::Snd) => Some(Prim::Snd),
            Some(Tok::Inl) => Some(Prim::Inl),
            Some(Tok::Inr) => Some(Prim::Inr),
            Some(Tok::Refl) => Some(Prim::Refl),
            _ => None,
        };
        let head = match prim {
            Some(p) => {
                let span = self.span_here();
                self.pos += 1;
                STerm::new(SKind::Prim(p), span)
            }
            None => self.atom()?,
        };
        let mut args = Vec::new();
        while self.starts_atom() {
            args.push(self.atom()?);
        }
        if args.is_empty() {
            return Ok(head);
        }
        Ok(STerm::new(SKind::App(Box::new(head), args), self.since(start)))
    }

    fn atom(&mut self) -> PResult<STerm> {
        let start = self.span_here().start;
        let span = self.span_here();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(STerm::new(SKind::Var(s), span))
            }
            Some(Tok::Underscore) => {
                self.pos += 1;
                Ok(STerm::new(SKind::Hole, span))
            }
            Some(Tok::Nat(n)) => {
                self.pos += 1;
                Ok(STerm::new(SKind::Num(n), span))
            }
            Some(Tok::U) => {
                self.pos += 1;
                match self.peek() {
                    Some(&Tok::Nat(n)) if n <= u32::MAX as u64 => {
                        self.pos += 1;
                        Ok(STerm::new(SKind::Univ(n as u32), self.since(start)))
                    }
                    _ => Err(self.error(&["universe level"])),
                }
            }
            Some(Tok::Elim) => {
                self.pos += 1;
                let id = self.ident()?;
                Ok(STerm::new(SKind::Elim(id), self.since(start)))
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RAngle)?;
                Ok(STerm::new(SKind::Pair(Box::new(a), Box::new(b)), self.since(start)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                let kind = match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        // Parentheses only group; keep the inner node but
                        // widen its span to cover them.
                        return Ok(STerm::new(e.kind, self.since(start)));
                    }
                    Some(Tok::Colon) => {
                        self.pos += 1;
                        let ty = self.expr()?;
                        SKind::Ann(Box::new(e), Box::new(ty))
                    }
                    Some(Tok::Comma) => {
                        self.pos += 1;
                        let b = self.expr()?;
                        SKind::Pair(Box::new(e), Box::new(b))
                    }
                    _ => return Err(self.error(&["`)`", "`:`", "`,`"])),
                };
                self.expect(Tok::RParen)?;
                Ok(STerm::new(kind, self.since(start)))
            }
            _ => Err(self.error(&["a term"])),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Parses a whole source file.
pub fn parse_module(path: PathBuf, source: &str) -> PResult<ModuleSource> {
    let toks = tokenize(source)?;
    let mut p = Parser::new(&toks, source.len());
    let (imports, decls) = p.module()?;
    Ok(ModuleSource {
        path,
        source: source.to_string(),
        imports,
        decls,
    })
}

/// Parses a single expression spanning the whole input.
pub fn parse_expr(source: &str) -> PResult<STerm> {
    let toks = tokenize(source)?;
    let mut p = Parser::new(&toks, source.len());
    let e = p.expr()?;
    if !p.at_end() {
        return Err(p.error(&["end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(src: &str) -> ModuleSource {
        parse_module(PathBuf::from("t.hott"), src).unwrap()
    }

    #[test]
    fn identity_def() {
        let m = module("def id : (A : U 0) -> A -> A := fun A a. a");
        assert_eq!(m.decls.len(), 1);
        let SDecl::Def { ty, body, .. } = &m.decls[0] else {
            panic!()
        };
        assert!(matches!(ty.kind, SKind::Pi(..)));
        assert!(matches!(&body.kind, SKind::Fun(ns, _) if ns.len() == 2));
    }

    #[test]
    fn circle_declaration() {
        let m = module("hit S1 : U 0 where | base : S1 | loop : base = base in S1");
        let SDecl::Hit { ctors, .. } = &m.decls[0] else {
            panic!()
        };
        assert_eq!(ctors.len(), 2);
        assert!(matches!(ctors[1].ty.kind, SKind::Eq(..)));
    }

    #[test]
    fn missing_type_is_a_parse_error_at_define() {
        let src = "def bad : := x";
        let e = parse_module(PathBuf::from("t.hott"), src).unwrap_err();
        assert_eq!(e.class, ErrorClass::ParseError);
        assert_eq!(e.span, Some(Span::new(10, 12)));
    }

    #[test]
    fn annotation_is_not_a_telescope() {
        let e = parse_expr("(x : A) y").unwrap();
        let SKind::App(head, args) = e.kind else { panic!() };
        assert!(matches!(head.kind, SKind::Ann(..)));
        assert_eq!(args.len(), 1);
    }

    #[test]
    fn sigma_telescope() {
        let e = parse_expr("(x : A) * B x -> C").unwrap();
        let SKind::Arrow(lhs, _) = e.kind else { panic!() };
        assert!(matches!(lhs.kind, SKind::Sigma(..)));
    }

    #[test]
    fn arrows_associate_right() {
        let e = parse_expr("A -> B -> C").unwrap();
        let SKind::Arrow(_, rhs) = e.kind else { panic!() };
        assert!(matches!(rhs.kind, SKind::Arrow(..)));
    }

    #[test]
    fn imports_collected() {
        let m = module("import equality\nimport nat\ndef x : Nat := 0");
        let names: Vec<_> = m.imports.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names, ["equality", "nat"]);
    }

    #[test]
    fn spans_nest() {
        let src = "def f : Nat -> Nat := fun n. succ (succ n)";
        let m = module(src);
        let SDecl::Def { body, span, .. } = &m.decls[0] else {
            panic!()
        };
        assert_eq!(*span, Span::new(0, src.len()));
        fn walk(t: &STerm, parent: Span) {
            assert!(parent.start <= t.span.start && t.span.end <= parent.end);
            match &t.kind {
                SKind::Fun(_, b) => walk(b, t.span),
                SKind::App(h, args) => {
                    walk(h, t.span);
                    args.iter().for_each(|a| walk(a, t.span));
                }
                _ => {}
            }
        }
        walk(body, *span);
    }
}

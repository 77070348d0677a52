//! Tokenizer for `.hott` source files.

use std::fmt;

use crate::diagnostic::{Diagnostic, ErrorClass};
use crate::syntax::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    // reserved words
    Def,
    Postulate,
    Hit,
    Where,
    Import,
    U,
    Fun,
    Fst,
    Snd,
    Inl,
    Inr,
    Refl,
    Elim,
    In,
    // punctuation
    Colon,
    Define,
    Arrow,
    Times,
    Eq,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
    Dot,
    Bar,
    Underscore,
}

impl Tok {
    fn keyword(s: &str) -> Option<Tok> {
        Some(match s {
            "def" => Tok::Def,
            "postulate" => Tok::Postulate,
            "hit" => Tok::Hit,
            "where" => Tok::Where,
            "import" => Tok::Import,
            "U" => Tok::U,
            "fun" => Tok::Fun,
            "fst" => Tok::Fst,
            "snd" => Tok::Snd,
            "inl" => Tok::Inl,
            "inr" => Tok::Inr,
            "refl" => Tok::Refl,
            "elim" => Tok::Elim,
            "in" => Tok::In,
            _ => return None,
        })
    }

    /// How the token is described in "expected ..." messages.
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            other => format!("`{other}`"),
        }
    }
}

pub const RESERVED: &[&str] = &[
    "def",
    "postulate",
    "hit",
    "where",
    "import",
    "U",
    "fun",
    "fst",
    "snd",
    "inl",
    "inr",
    "refl",
    "elim",
    "in",
];

pub fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return f.write_str(s),
            Tok::Nat(n) => return write!(f, "{n}"),
            Tok::Def => "def",
            Tok::Postulate => "postulate",
            Tok::Hit => "hit",
            Tok::Where => "where",
            Tok::Import => "import",
            Tok::U => "U",
            Tok::Fun => "fun",
            Tok::Fst => "fst",
            Tok::Snd => "snd",
            Tok::Inl => "inl",
            Tok::Inr => "inr",
            Tok::Refl => "refl",
            Tok::Elim => "elim",
            Tok::In => "in",
            Tok::Colon => ":",
            Tok::Define => ":=",
            Tok::Arrow => "->",
            Tok::Times => "*",
            Tok::Eq => "=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LAngle => "⟨",
            Tok::RAngle => "⟩",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Bar => "|",
            Tok::Underscore => "_",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_alphabetic()
}

pub fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '\''
}

/// Splits source text into tokens. Whitespace (including CR) and `--`
/// line comments are skipped.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let rest = &src[start..];
        if rest.starts_with("--") {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        if is_ident_start(c) {
            let mut end = start;
            while let Some(&(i, c)) = it.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                // `->` and `--` end an identifier even though `-` may
                // continue one.
                if c == '-' && (src[i..].starts_with("->") || src[i..].starts_with("--")) {
                    break;
                }
                end = i + c.len_utf8();
                it.next();
            }
            let text = &src[start..end];
            let tok = Tok::keyword(text).unwrap_or_else(|| Tok::Ident(text.to_string()));
            out.push(Token {
                tok,
                span: Span::new(start, end),
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, c)) = it.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = i + 1;
                it.next();
            }
            let span = Span::new(start, end);
            let n = src[start..end]
                .parse::<u64>()
                .map_err(|_| Diagnostic::new(ErrorClass::ParseError, Some(span), "numeral is too large"))?;
            if let Some(&(_, c)) = it.peek() {
                if is_ident_start(c) {
                    return Err(Diagnostic::new(
                        ErrorClass::ParseError,
                        Some(span),
                        "identifiers cannot start with a digit",
                    ));
                }
            }
            out.push(Token { tok: Tok::Nat(n), span });
            continue;
        }
        let two = |a: &str| rest.starts_with(a);
        let (tok, len) = if two(":=") {
            (Tok::Define, 2)
        } else if two("->") {
            (Tok::Arrow, 2)
        } else {
            let tok = match c {
                ':' => Tok::Colon,
                '→' => Tok::Arrow,
                '×' | '*' => Tok::Times,
                '=' => Tok::Eq,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '⟨' => Tok::LAngle,
                '⟩' => Tok::RAngle,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '|' => Tok::Bar,
                '_' => Tok::Underscore,
                _ => {
                    return Err(Diagnostic::new(
                        ErrorClass::ParseError,
                        Some(Span::new(start, start + c.len_utf8())),
                        format!("unexpected character `{}`", c.escape_debug()),
                    ))
                }
            };
            (tok, c.len_utf8())
        };
        for _ in 0..len_in_chars(rest, len) {
            it.next();
        }
        out.push(Token {
            tok,
            span: Span::new(start, start + len),
        });
    }
    Ok(out)
}

fn len_in_chars(s: &str, bytes: usize) -> usize {
    s[..bytes].chars().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn def_line() {
        assert_eq!(
            toks("def x : U 0 := x"),
            vec![
                Tok::Def,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::U,
                Tok::Nat(0),
                Tok::Define,
                Tok::Ident("x".into()),
            ]
        );
    }

    #[test]
    fn comments_vanish() {
        assert_eq!(toks("-- comment\n"), vec![]);
        assert_eq!(
            toks("a -- b\r\nc"),
            vec![Tok::Ident("a".into()), Tok::Ident("c".into())]
        );
    }

    #[test]
    fn unicode_identifier() {
        assert_eq!(toks("Ω¹"), vec![Tok::Ident("Ω¹".into())]);
        assert_eq!(toks("Ω2-x'"), vec![Tok::Ident("Ω2-x'".into())]);
    }

    #[test]
    fn arrows_split_identifiers() {
        assert_eq!(
            toks("A->B"),
            vec![Tok::Ident("A".into()), Tok::Arrow, Tok::Ident("B".into())]
        );
        assert_eq!(toks("A→B×C"), toks("A -> B * C"));
        assert_eq!(toks("a-b"), vec![Tok::Ident("a-b".into())]);
    }

    #[test]
    fn spans_are_byte_ranges() {
        let ts = tokenize("⟨a, b⟩").unwrap();
        assert_eq!(ts[0].span, Span::new(0, 3));
        assert_eq!(ts[1].span, Span::new(3, 4));
        assert_eq!(ts.last().unwrap().span, Span::new(7, 10));
    }

    #[test]
    fn illegal_character() {
        let e = tokenize("def x : # := x").unwrap_err();
        assert_eq!(e.class, ErrorClass::ParseError);
        assert_eq!(e.span, Some(Span::new(8, 9)));
    }

    #[test]
    fn digit_led_identifier_rejected() {
        assert!(tokenize("2x").is_err());
    }
}

//! Structured error reports shared by the frontend, the checker and the CLI.

use std::fmt;

use crate::syntax::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorClass {
    UnboundName,
    TypeMismatch,
    UniverseError,
    NotAFunction,
    NotAPair,
    InvalidHit,
    UnsolvedHole,
    ImportCycle,
    ParseError,
    DuplicateName,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 10] = [
        ErrorClass::UnboundName,
        ErrorClass::TypeMismatch,
        ErrorClass::UniverseError,
        ErrorClass::NotAFunction,
        ErrorClass::NotAPair,
        ErrorClass::InvalidHit,
        ErrorClass::UnsolvedHole,
        ErrorClass::ImportCycle,
        ErrorClass::ParseError,
        ErrorClass::DuplicateName,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::UnboundName => "UnboundName",
            ErrorClass::TypeMismatch => "TypeMismatch",
            ErrorClass::UniverseError => "UniverseError",
            ErrorClass::NotAFunction => "NotAFunction",
            ErrorClass::NotAPair => "NotAPair",
            ErrorClass::InvalidHit => "InvalidHit",
            ErrorClass::UnsolvedHole => "UnsolvedHole",
            ErrorClass::ImportCycle => "ImportCycle",
            ErrorClass::ParseError => "ParseError",
            ErrorClass::DuplicateName => "DuplicateName",
        }
    }

    pub fn parse(s: &str) -> Option<ErrorClass> {
        ErrorClass::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A report about one problem. `expected` and `actual` are printed normal
/// forms and are set only for type mismatches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub class: ErrorClass,
    pub file: Option<String>,
    pub span: Option<Span>,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl Diagnostic {
    pub fn new(class: ErrorClass, span: Option<Span>, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            class,
            file: None,
            span,
            message: message.into(),
            expected: None,
            actual: None,
        }
    }

    pub fn mismatch(span: Option<Span>, message: impl Into<String>, expected: String, actual: String) -> Diagnostic {
        Diagnostic {
            class: ErrorClass::TypeMismatch,
            file: None,
            span,
            message: message.into(),
            expected: Some(expected),
            actual: Some(actual),
        }
    }

    pub fn in_file(mut self, file: impl Into<String>) -> Diagnostic {
        if self.file.is_none() {
            self.file = Some(file.into());
        }
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.class, self.message)
    }
}

/// One-based line and column (in characters) of a byte offset.
pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..floor_char_boundary(source, offset)];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let col = before[line_start..].chars().count() + 1;
    (line, col)
}

fn floor_char_boundary(s: &str, mut i: usize) -> usize {
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_names_round_trip() {
        for c in ErrorClass::ALL {
            assert_eq!(ErrorClass::parse(c.as_str()), Some(c));
        }
        assert_eq!(ErrorClass::parse("Nope"), None);
    }

    #[test]
    fn line_col_counts_characters() {
        let src = "ab\ncΩd\r\nx";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 3), (2, 1));
        // 'd' comes after the two-byte Ω
        assert_eq!(line_col(src, 6), (2, 3));
        assert_eq!(line_col(src, src.len() - 1), (3, 1));
    }
}

//! Kernel, evaluator and front end of a batch proof checker for a small
//! homotopy type theory.
//!
//! Source files are parsed and elaborated by [`frontend`], checked
//! declaration by declaration by [`check`], and evaluated by [`eval`].
//! [`driver`] ties these together for whole files and their imports.

// Diagnostics are the error type throughout and are not boxed.
#![allow(clippy::result_large_err)]

pub mod check;
pub mod diagnostic;
pub mod driver;
pub mod elim;
pub mod env;
pub mod eval;
pub mod frontend;
pub mod hit;
pub mod manifest;
pub mod quote;
pub mod syntax;
pub mod value;

pub use check::{check_declaration, Checker, Ctx, Decl};
pub use diagnostic::{Diagnostic, ErrorClass};
pub use driver::{Checked, Failure, Session};
pub use env::GlobalEnv;
pub use syntax::{Level, Name, Span, Term};

//! Surface language: tokens, syntax trees, parsing, printing,
//! elaboration to core terms and import resolution.

pub mod elab;
pub mod imports;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod surface;

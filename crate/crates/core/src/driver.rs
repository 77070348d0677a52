//! Checking files together with their import closures.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::check::{check_declaration, normalize_const, type_of_const};
use crate::diagnostic::{Diagnostic, ErrorClass};
use crate::env::GlobalEnv;
use crate::frontend::elab::Elaborator;
use crate::frontend::imports::{LoadError, Loader, Module};
use crate::frontend::pretty;
use crate::syntax::Name;

/// Why a file could not be checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// A missing or unreadable file.
    Io(String),
    Diag(Diagnostic),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Failure {
        match e {
            LoadError::Io(m) => Failure::Io(m),
            LoadError::Diag(d) => Failure::Diag(d),
        }
    }
}

/// A successfully checked module.
#[derive(Debug)]
pub struct Checked {
    pub display: String,
    /// Everything in scope after the module: its imports and its own
    /// declarations.
    pub globals: Arc<GlobalEnv>,
    /// Names declared by the module itself, in source order.
    pub names: Vec<Name>,
}

impl Checked {
    pub fn num_decls(&self) -> usize {
        self.names.len()
    }
}

/// Adds `from` to `into`, sharing entries. Fails with the first name two
/// different modules both declare.
fn merge(into: &mut GlobalEnv, from: &GlobalEnv) -> Result<(), Name> {
    for (n, e) in from.constants() {
        match into.lookup(n) {
            Some(x) if Arc::ptr_eq(x, e) => {}
            Some(_) => return Err(n.clone()),
            None => {
                into.insert_shared(n.clone(), e.clone());
            }
        }
    }
    for h in from.hits() {
        match into.hit(h.hit.name()) {
            Some(x) if Arc::ptr_eq(x, h) => {}
            Some(_) => return Err(h.hit.name().clone()),
            None => {
                into.insert_hit_shared(h.clone());
            }
        }
    }
    Ok(())
}

pub struct Session {
    loader: Loader,
    checked: HashMap<PathBuf, Result<Arc<Checked>, Failure>>,
    sources: HashMap<String, String>,
}

impl Session {
    pub fn new(search: Vec<PathBuf>) -> Session {
        Session {
            loader: Loader::new(search),
            checked: HashMap::new(),
            sources: HashMap::new(),
        }
    }

    /// Source text of a loaded file, keyed by its display path.
    pub fn source(&self, file: &str) -> Option<&str> {
        self.sources.get(file).map(|s| s.as_str())
    }

    /// Checks `path` and everything it imports.
    pub fn check_file(&mut self, path: &Path) -> Result<Arc<Checked>, Failure> {
        let modules = match self.loader.resolve(path) {
            Ok(ms) => ms,
            Err(e) => {
                if let LoadError::Diag(d) = &e {
                    self.remember_source(d.file.as_deref());
                }
                return Err(e.into());
            }
        };
        let mut last = None;
        for m in modules {
            self.sources
                .entry(m.display.clone())
                .or_insert_with(|| m.source.source.clone());
            let r = match self.checked.get(&m.canonical) {
                Some(r) => r.clone(),
                None => {
                    let r = self.check_module(&m).map(Arc::new);
                    self.checked.insert(m.canonical.clone(), r.clone());
                    r
                }
            };
            last = Some(r?);
        }
        Ok(last.expect("the entry module is always resolved"))
    }

    fn remember_source(&mut self, file: Option<&str>) {
        if let Some(f) = file {
            if !self.sources.contains_key(f) {
                if let Ok(text) = std::fs::read_to_string(f) {
                    self.sources.insert(f.to_string(), text);
                }
            }
        }
    }

    fn check_module(&self, m: &Module) -> Result<Checked, Failure> {
        let mut globals = GlobalEnv::new();
        for ((id, _), dep) in m.imports.iter().zip(&m.deps) {
            let checked = match self.checked.get(dep) {
                Some(Ok(c)) => c.clone(),
                Some(Err(f)) => return Err(f.clone()),
                None => unreachable!("imports are checked first"),
            };
            merge(&mut globals, &checked.globals).map_err(|n| {
                Failure::Diag(
                    Diagnostic::new(
                        ErrorClass::DuplicateName,
                        Some(id.span),
                        format!("`{n}` is declared by two imported modules"),
                    )
                    .in_file(&m.display),
                )
            })?;
        }
        let mut names = Vec::new();
        for d in &m.source.decls {
            let decl = Elaborator::new(&globals)
                .decl(d)
                .map_err(|e| Failure::Diag(e.in_file(&m.display)))?;
            check_declaration(&mut globals, &decl).map_err(|e| Failure::Diag(e.in_file(&m.display)))?;
            names.push(decl.name().clone());
        }
        Ok(Checked {
            display: m.display.clone(),
            globals: Arc::new(globals),
            names,
        })
    }

    fn lookup_failure(file: &Path, target: &str) -> Failure {
        Failure::Diag(
            Diagnostic::new(
                ErrorClass::UnboundName,
                None,
                format!("no declaration named `{target}`"),
            )
            .in_file(file.display().to_string()),
        )
    }

    /// The normalized type of a declaration, printed in surface syntax.
    pub fn type_of(&mut self, file: &Path, target: &str) -> Result<String, Failure> {
        let c = self.check_file(file)?;
        let t = type_of_const(&c.globals, target).ok_or_else(|| Self::lookup_failure(file, target))?;
        Ok(pretty::show(&t, &[]))
    }

    /// The normal form of a declaration's body, printed in surface syntax.
    pub fn normalize(&mut self, file: &Path, target: &str) -> Result<String, Failure> {
        let c = self.check_file(file)?;
        let t = normalize_const(&c.globals, target).ok_or_else(|| Self::lookup_failure(file, target))?;
        Ok(pretty::show(&t, &[]))
    }
}

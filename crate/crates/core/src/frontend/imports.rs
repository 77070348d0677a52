//! Loading source files and resolving their import closure.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::diagnostic::{Diagnostic, ErrorClass};
use crate::frontend::parser::parse_module;
use crate::frontend::surface::{Ident, ModuleSource};

/// A parsed file together with its resolved imports.
#[derive(Debug)]
pub struct Module {
    /// Path as shown to the user.
    pub display: String,
    pub canonical: PathBuf,
    pub source: ModuleSource,
    /// Imports in visiting order, each with the path it resolved to.
    pub imports: Vec<(Ident, PathBuf)>,
    /// Canonical paths of the imports, parallel to `imports`.
    pub deps: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    /// A file that cannot be found or read.
    Io(String),
    /// A parse error or an import cycle.
    Diag(Diagnostic),
}

pub struct Loader {
    search: Vec<PathBuf>,
    modules: HashMap<PathBuf, Arc<Module>>,
}

fn canonical(p: &Path) -> Result<PathBuf, LoadError> {
    fs::canonicalize(p).map_err(|e| LoadError::Io(format!("{}: {e}", p.display())))
}

fn module_name(p: &Path) -> String {
    p.file_stem()
        .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

impl Loader {
    pub fn new(search: Vec<PathBuf>) -> Loader {
        Loader {
            search,
            modules: HashMap::new(),
        }
    }

    /// Finds `name.hott` next to the importing file, then along the search
    /// path.
    fn locate(&self, importer: &Path, name: &str) -> Option<PathBuf> {
        let file = format!("{name}.hott");
        let local = match importer.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.join(&file),
            _ => PathBuf::from(&file),
        };
        std::iter::once(local)
            .chain(self.search.iter().map(|d| d.join(&file)))
            .find(|p| p.is_file())
    }

    fn parse(&self, display: &Path, canonical: PathBuf) -> Result<Module, LoadError> {
        let shown = display.display().to_string();
        let text = fs::read_to_string(display).map_err(|e| LoadError::Io(format!("{shown}: {e}")))?;
        let source = parse_module(display.to_path_buf(), &text).map_err(|d| LoadError::Diag(d.in_file(&shown)))?;
        let mut idents = source.imports.clone();
        idents.sort_by(|a, b| a.name.cmp(&b.name));
        idents.dedup_by(|a, b| a.name == b.name);
        let mut imports = Vec::new();
        for id in idents {
            let path = self
                .locate(display, &id.name)
                .ok_or_else(|| LoadError::Io(format!("{shown}: cannot find module `{}`", id.name)))?;
            imports.push((id, path));
        }
        Ok(Module {
            display: shown,
            canonical,
            source,
            imports,
            deps: Vec::new(),
        })
    }

    /// The import closure of `entry` in dependency order: depth first,
    /// imports visited in lexicographic order, each module listed once.
    pub fn resolve(&mut self, entry: &Path) -> Result<Vec<Arc<Module>>, LoadError> {
        let mut order = Vec::new();
        let mut done = HashSet::new();
        let mut stack = Vec::new();
        self.visit(entry, &mut stack, &mut done, &mut order)?;
        Ok(order)
    }

    fn visit(
        &mut self,
        display: &Path,
        stack: &mut Vec<PathBuf>,
        done: &mut HashSet<PathBuf>,
        order: &mut Vec<Arc<Module>>,
    ) -> Result<PathBuf, LoadError> {
        let canon = canonical(display)?;
        if done.contains(&canon) {
            return Ok(canon);
        }
        let module = match self.modules.get(&canon) {
            Some(m) => m.clone(),
            None => {
                let mut m = self.parse(display, canon.clone())?;
                stack.push(canon.clone());
                for (id, path) in &m.imports {
                    let dep = canonical(path)?;
                    if let Some(pos) = stack.iter().position(|p| *p == dep) {
                        let mut cycle: Vec<String> = stack[pos..].iter().map(|p| module_name(p)).collect();
                        cycle.push(module_name(&dep));
                        return Err(LoadError::Diag(
                            Diagnostic::new(
                                ErrorClass::ImportCycle,
                                Some(id.span),
                                format!("import cycle: {}", cycle.join(" -> ")),
                            )
                            .in_file(&m.display),
                        ));
                    }
                    self.visit(path, stack, done, order)?;
                    m.deps.push(dep);
                }
                stack.pop();
                let m = Arc::new(m);
                self.modules.insert(canon.clone(), m.clone());
                done.insert(canon.clone());
                order.push(m);
                return Ok(canon);
            }
        };
        // A cached module was resolved before, so its closure is acyclic.
        for (_, path) in &module.imports {
            self.visit(path, stack, done, order)?;
        }
        done.insert(canon.clone());
        order.push(module);
        Ok(canon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn names(ms: &[Arc<Module>]) -> Vec<String> {
        ms.iter().map(|m| module_name(&m.canonical)).collect()
    }

    #[test]
    fn diamond_lists_each_module_once() {
        let d = tempfile::tempdir().unwrap();
        write(d.path(), "base.hott", "");
        write(d.path(), "left.hott", "import base");
        write(d.path(), "right.hott", "import base");
        let top = write(d.path(), "top.hott", "import right\nimport left");
        let order = Loader::new(vec![]).resolve(&top).unwrap();
        assert_eq!(names(&order), ["base", "left", "right", "top"]);
    }

    #[test]
    fn mutual_imports_are_a_cycle() {
        let d = tempfile::tempdir().unwrap();
        let a = write(d.path(), "a.hott", "import b");
        write(d.path(), "b.hott", "import a");
        match Loader::new(vec![]).resolve(&a) {
            Err(LoadError::Diag(e)) => {
                assert_eq!(e.class, ErrorClass::ImportCycle);
                assert!(e.message.contains("a -> b -> a"), "{}", e.message);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn search_path_is_a_fallback() {
        let lib = tempfile::tempdir().unwrap();
        let src = tempfile::tempdir().unwrap();
        write(lib.path(), "equality.hott", "");
        let circle = write(src.path(), "circle.hott", "import equality");
        let order = Loader::new(vec![lib.path().to_path_buf()]).resolve(&circle).unwrap();
        assert_eq!(names(&order), ["equality", "circle"]);
    }

    #[test]
    fn missing_files_are_io_errors() {
        let d = tempfile::tempdir().unwrap();
        let a = write(d.path(), "a.hott", "import nowhere");
        assert!(matches!(Loader::new(vec![]).resolve(&a), Err(LoadError::Io(_))));
        assert!(matches!(
            Loader::new(vec![]).resolve(&d.path().join("missing.hott")),
            Err(LoadError::Io(_))
        ));
    }
}

//! The `hott` command line: `check`, `typeof` and `normalize`.

#![allow(clippy::result_large_err)]

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hott_core::diagnostic::{line_col, Diagnostic};
use hott_core::{Failure, Session};
use serde_json::{json, Map, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DIAGNOSTICS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "hott", about = "Batch proof checker for a small homotopy type theory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Print diagnostics as a JSON array.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory searched for imports. Repeatable; falls back to HOTT_PATH.
    #[arg(long = "path", value_name = "DIR", global = true)]
    pub path: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check files and their imports.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the normalized type of a declaration.
    Typeof {
        file: PathBuf,
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the normal form of a declaration.
    Normalize {
        file: PathBuf,
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

fn search_path(flags: &[PathBuf]) -> Vec<PathBuf> {
    if !flags.is_empty() {
        return flags.to_vec();
    }
    match std::env::var_os("HOTT_PATH") {
        Some(v) => std::env::split_paths(&v)
            .filter(|p| !p.as_os_str().is_empty())
            .collect(),
        None => Vec::new(),
    }
}

/// Human rendering: `file:line:col: Class: message`, then the expected and
/// actual types for mismatches.
pub fn render_human(session: &Session, d: &Diagnostic) -> String {
    let mut out = String::new();
    if let Some(file) = &d.file {
        out.push_str(file);
        if let (Some(span), Some(src)) = (d.span, session.source(file)) {
            let (line, col) = line_col(src, span.start);
            out.push_str(&format!(":{line}:{col}"));
        }
        out.push_str(": ");
    }
    out.push_str(&format!("{}: {}\n", d.class, d.message));
    if let Some(e) = &d.expected {
        out.push_str(&format!("  expected: {e}\n"));
    }
    if let Some(a) = &d.actual {
        out.push_str(&format!("  actual:   {a}\n"));
    }
    out
}

pub fn diagnostic_json(d: &Diagnostic) -> Value {
    let mut m = Map::new();
    m.insert("file".into(), json!(d.file));
    m.insert("start".into(), json!(d.span.map(|s| s.start)));
    m.insert("end".into(), json!(d.span.map(|s| s.end)));
    m.insert("class".into(), json!(d.class.as_str()));
    m.insert("message".into(), json!(d.message));
    if let Some(e) = &d.expected {
        m.insert("expected".into(), json!(e));
    }
    if let Some(a) = &d.actual {
        m.insert("actual".into(), json!(a));
    }
    Value::Object(m)
}

/// JSON rendering: an array with one object per diagnostic.
pub fn render_json(ds: &[Diagnostic]) -> String {
    let arr = Value::Array(ds.iter().map(diagnostic_json).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("json values always serialize");
    s.push('\n');
    s
}

struct Report {
    json: bool,
    diags: Vec<Diagnostic>,
    io_error: bool,
}

impl Report {
    fn new(json: bool) -> Report {
        Report {
            json,
            diags: Vec::new(),
            io_error: false,
        }
    }

    fn fail(&mut self, session: &Session, f: Failure, err: &mut dyn Write) {
        match f {
            Failure::Io(m) => {
                self.io_error = true;
                let _ = writeln!(err, "error: {m}");
            }
            Failure::Diag(d) => {
                if !self.json {
                    let _ = write!(err, "{}", render_human(session, &d));
                }
                self.diags.push(d);
            }
        }
    }

    fn finish(self, out: &mut dyn Write) -> u8 {
        if self.json {
            let _ = write!(out, "{}", render_json(&self.diags));
        }
        if self.io_error {
            EXIT_USAGE
        } else if !self.diags.is_empty() {
            EXIT_DIAGNOSTICS
        } else {
            EXIT_OK
        }
    }
}

/// Runs the command line and returns the exit code. Results go to `out`;
/// human-readable diagnostics and I/O errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Check { files, common } => {
            let mut session = Session::new(search_path(&common.path));
            let mut report = Report::new(common.json);
            for f in &files {
                match session.check_file(f) {
                    Ok(c) => {
                        if !common.json {
                            let _ = writeln!(out, "ok {} ({} declarations)", f.display(), c.num_decls());
                        }
                    }
                    Err(e) => report.fail(&session, e, err),
                }
            }
            report.finish(out)
        }
        Command::Typeof { file, name, common } => query(&common, out, err, |s| s.type_of(&file, &name)),
        Command::Normalize { file, name, common } => query(&common, out, err, |s| s.normalize(&file, &name)),
    }
}

fn query(
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
    f: impl FnOnce(&mut Session) -> Result<String, Failure>,
) -> u8 {
    let mut session = Session::new(search_path(&common.path));
    let mut report = Report::new(common.json);
    match f(&mut session) {
        Ok(text) => {
            if common.json {
                let _ = writeln!(out, "{}", json!({ "result": text }));
                return EXIT_OK;
            }
            let _ = writeln!(out, "{text}");
        }
        Err(e) => report.fail(&session, e, err),
    }
    report.finish(out)
}

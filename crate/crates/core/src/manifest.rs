//! The corpus manifest: one `<path> ok` or `<path> err:<Class>` per line.

use crate::diagnostic::ErrorClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Ok,
    Err(ErrorClass),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub expect: Expect,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Parses a manifest. Blank lines and lines starting with `#` are
    /// ignored.
    pub fn parse(text: &str) -> Result<Manifest, String> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(path), Some(tag), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(format!("line {}: expected `<path> ok` or `<path> err:<class>`", i + 1));
            };
            let expect = match tag {
                "ok" => Expect::Ok,
                _ => match tag.strip_prefix("err:").and_then(ErrorClass::parse) {
                    Some(c) => Expect::Err(c),
                    None => return Err(format!("line {}: unknown expectation `{tag}`", i + 1)),
                },
            };
            entries.push(ManifestEntry {
                path: path.to_string(),
                expect,
            });
        }
        Ok(Manifest { entries })
    }

    pub fn positive(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.expect == Expect::Ok)
    }

    pub fn negative(&self) -> impl Iterator<Item = (&ManifestEntry, ErrorClass)> {
        self.entries.iter().filter_map(|e| match e.expect {
            Expect::Err(c) => Some((e, c)),
            Expect::Ok => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_kinds() {
        let m = Manifest::parse("# corpus\nstdlib/a.hott ok\n\ntests/neg/u.hott err:UniverseError\n").unwrap();
        assert_eq!(m.positive().count(), 1);
        let neg: Vec<_> = m.negative().collect();
        assert_eq!(neg[0].1, ErrorClass::UniverseError);
    }

    #[test]
    fn rejects_unknown_classes() {
        assert!(Manifest::parse("x.hott err:Oops").is_err());
        assert!(Manifest::parse("x.hott").is_err());
    }
}

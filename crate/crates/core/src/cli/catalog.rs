//! Named systems: a permutation with optional lengths.

use std::collections::BTreeSet;
use std::path::Path;

use crate::perm::Permutation;
use crate::scalar::Scalar;

pub const BUNDLED: &str = include_str!("catalog.txt");

/// Environment variable naming the default catalog file.
pub const CATALOG_ENV: &str = "IETLAB_CATALOG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub perm: Permutation,
    pub lengths: Option<Vec<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    /// `bundled` or the path the entries were read from.
    pub source: String,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn bundled() -> Catalog {
        Catalog::parse(BUNDLED, "bundled").expect("bundled catalog parses")
    }

    pub fn load(path: &Path) -> Result<Catalog, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read catalog {}: {e}", path.display()))?;
        Catalog::parse(&text, &path.display().to_string())
    }

    /// Parses catalog text. Errors carry the 1-based line number.
    pub fn parse(text: &str, source: &str) -> Result<Catalog, String> {
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| format!("{source}: line {line_no}: {msg}");
            let (name, rest) = line
                .split_once(':')
                .ok_or_else(|| err("expected `name: permutation [; lengths]`".into()))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(err(format!("invalid name {name:?}")));
            }
            if !seen.insert(name.to_string()) {
                return Err(err(format!("duplicate name {name:?}")));
            }
            let (perm_text, lengths_text) = match rest.split_once(';') {
                Some((p, l)) => (p, Some(l)),
                None => (rest, None),
            };
            let perm: Permutation = perm_text.parse().map_err(|e| err(format!("{e}")))?;
            let lengths = match lengths_text {
                Some(text) => {
                    let lengths = parse_lengths(text).map_err(err)?;
                    if lengths.len() != perm.d() {
                        return Err(err(format!(
                            "{} lengths for a permutation of {} symbols",
                            lengths.len(),
                            perm.d()
                        )));
                    }
                    Some(lengths)
                }
                None => None,
            };
            entries.push(CatalogEntry {
                name: name.to_string(),
                perm,
                lengths,
            });
        }
        Ok(Catalog {
            source: source.to_string(),
            entries,
        })
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Comma-separated exact scalars.
pub fn parse_lengths(text: &str) -> Result<Vec<Scalar>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<Scalar>().map_err(|e| format!("bad length {t:?}: {e}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_has_required_entries() {
        let cat = Catalog::bundled();
        assert!(cat.entries.len() >= 3);
        for name in ["third", "golden", "fhz"] {
            assert!(cat.get(name).and_then(|e| e.lengths.as_ref()).is_some(), "{name}");
        }
        assert!(cat.get("fhz").unwrap().perm.is_type_w());
        assert!(cat.get("rev4").unwrap().lengths.is_none());
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = Catalog::parse("# c\na: 2 1\na: 1\n", "x").unwrap_err();
        assert_eq!(err, "x: line 3: duplicate name \"a\"");
        let err = Catalog::parse("a: 2 1\n\nb 2 1\n", "x").unwrap_err();
        assert!(err.starts_with("x: line 3:"), "{err}");
        let err = Catalog::parse("a: 2 1 ; 1/2\n", "x").unwrap_err();
        assert!(err.contains("1 lengths"), "{err}");
        let err = Catalog::parse("a: 2 2\n", "x").unwrap_err();
        assert!(err.starts_with("x: line 1:"), "{err}");
    }
}

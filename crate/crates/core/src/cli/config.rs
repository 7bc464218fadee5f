//! Configuration merging and validation.
//!
//! Settings come from an optional config file (key=value lines or a JSON
//! object) overridden by command-line flags. Every key is validated before
//! any computation starts and all problems are reported together.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::catalog::{parse_lengths, Catalog};
use crate::iet::Iet;
use crate::perm::Permutation;
use crate::scalar::Scalar;

pub const KEYS: &[&str] = &[
    "perm",
    "lengths",
    "normalize",
    "N",
    "eps",
    "threshold",
    "delta",
    "b",
    "out",
    "format",
    "seed",
    "sample",
    "catalog",
];

/// Raw merged settings, keyed as in [`KEYS`].
pub type RawConfig = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Perm,
    Analyze,
    Catalog,
    Eps,
    Tower,
    Rigidity,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Perm => "perm",
            CommandKind::Analyze => "analyze",
            CommandKind::Catalog => "catalog",
            CommandKind::Eps => "eps",
            CommandKind::Tower => "tower",
            CommandKind::Rigidity => "rigidity",
        }
    }

    fn needs_perm(self) -> bool {
        self != CommandKind::Catalog
    }

    fn needs_lengths(self) -> bool {
        !matches!(self, CommandKind::Catalog | CommandKind::Perm)
    }

    fn default_horizon(self) -> usize {
        match self {
            CommandKind::Tower => 20,
            _ => 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// The system under study and where it came from.
#[derive(Debug, Clone)]
pub struct System {
    pub name: Option<String>,
    pub source: String,
    pub perm: Permutation,
    /// Lengths as given, before normalization.
    pub lengths_input: Option<Vec<Scalar>>,
    pub normalize: bool,
    pub iet: Option<Iet>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub command: CommandKind,
    pub system: Option<System>,
    pub horizon: usize,
    pub eps: Scalar,
    pub threshold: Scalar,
    pub delta: Option<Scalar>,
    pub b: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub catalog: Catalog,
}

/// Reads a config file: a JSON object if the first non-blank character is
/// `{`, otherwise `key = value` lines with `#` comments.
pub fn read_config_file(text: &str) -> Result<RawConfig, Vec<String>> {
    let mut raw = RawConfig::new();
    let mut errors = Vec::new();
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return Err(vec![format!("config: invalid JSON: {e}")]),
        };
        let Some(object) = value.as_object() else {
            return Err(vec!["config: JSON config must be an object".into()]);
        };
        for (key, value) in object {
            let text = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|v| v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()))
                    .collect::<Vec<_>>()
                    .join(","),
                other => {
                    errors.push(format!("config: unsupported value for {key}: {other}"));
                    continue;
                }
            };
            raw.insert(key.clone(), text);
        }
    } else {
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    raw.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => errors.push(format!("config: line {}: expected key=value", idx + 1)),
            }
        }
    }
    for key in raw.keys() {
        if !KEYS.contains(&key.as_str()) {
            errors.push(format!("config: unknown key {key:?}"));
        }
    }
    if errors.is_empty() {
        Ok(raw)
    } else {
        Err(errors)
    }
}

fn parse_bool(key: &str, text: &str, errors: &mut Vec<String>) -> bool {
    match text {
        "true" | "1" | "yes" => true,
        "false" | "0" | "no" | "" => false,
        _ => {
            errors.push(format!("{key}: expected true or false, got {text:?}"));
            false
        }
    }
}

fn positive_scalar(key: &str, text: &str, errors: &mut Vec<String>) -> Option<Scalar> {
    match text.parse::<Scalar>() {
        Ok(s) if s.is_positive() => Some(s),
        Ok(s) => {
            errors.push(format!("{key}: must be positive, got {s}"));
            None
        }
        Err(e) => {
            errors.push(format!("{key}: {e}"));
            None
        }
    }
}

/// Draws `d` lengths as integers in `1..=1000` from a seeded generator.
pub fn sample_lengths(d: usize, seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..d).map(|_| Scalar::from_integer(rng.gen_range(1..=1000))).collect()
}

/// Validates the merged configuration for `command`. `env_catalog` is the
/// value of the catalog environment variable, if set.
pub fn resolve(
    command: CommandKind,
    raw: &RawConfig,
    env_catalog: Option<String>,
) -> Result<Settings, Vec<String>> {
    let mut errors = Vec::new();
    let get = |k: &str| raw.get(k).map(String::as_str);

    let catalog_path = get("catalog").map(str::to_string).or(env_catalog);
    let catalog = match &catalog_path {
        Some(path) => Catalog::load(path.as_ref()).unwrap_or_else(|e| {
            errors.push(format!("catalog: {e}"));
            Catalog::bundled()
        }),
        None => Catalog::bundled(),
    };

    let format = match get("format").unwrap_or("json") {
        "json" => Format::Json,
        "csv" if command == CommandKind::Analyze => {
            errors.push("format: analyze writes JSON; CSV side files go next to --out".into());
            Format::Json
        }
        "csv" => Format::Csv,
        other => {
            errors.push(format!("format: expected json or csv, got {other:?}"));
            Format::Json
        }
    };

    let horizon = match get("N") {
        None => command.default_horizon(),
        Some(text) => match text.parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                errors.push(format!("N: expected an integer >= 1, got {text:?}"));
                1
            }
        },
    };
    let eps = match get("eps") {
        None => Scalar::ratio(1, 100),
        Some(text) => positive_scalar("eps", text, &mut errors).unwrap_or_else(Scalar::one),
    };
    let threshold = match get("threshold") {
        None => eps.clone(),
        Some(text) => positive_scalar("threshold", text, &mut errors).unwrap_or_else(Scalar::one),
    };
    let delta = get("delta").and_then(|text| positive_scalar("delta", text, &mut errors));
    let b = match get("b") {
        None => 1,
        Some(text) => text.parse::<usize>().unwrap_or_else(|_| {
            errors.push(format!("b: expected a nonnegative integer, got {text:?}"));
            0
        }),
    };
    let normalize = get("normalize").is_some_and(|t| parse_bool("normalize", t, &mut errors));
    let sample = get("sample").is_some_and(|t| parse_bool("sample", t, &mut errors));
    let seed = get("seed").and_then(|text| match text.parse::<u64>() {
        Ok(s) => Some(s),
        Err(_) => {
            errors.push(format!("seed: expected a nonnegative integer, got {text:?}"));
            None
        }
    });
    if seed.is_some() && !sample {
        errors.push("seed: only meaningful with --sample".into());
    }
    if sample && seed.is_none() && get("seed").is_none() {
        errors.push("sample: requires --seed".into());
    }
    if sample && get("lengths").is_some() {
        errors.push("sample: conflicts with explicit lengths".into());
    }

    let system = if command.needs_perm() {
        resolve_system(command, get("perm"), get("lengths"), normalize, sample, seed, &catalog, &mut errors)
    } else {
        None
    };

    if errors.is_empty() {
        Ok(Settings {
            command,
            system,
            horizon,
            eps,
            threshold,
            delta,
            b,
            out: get("out").map(PathBuf::from),
            format,
            catalog,
        })
    } else {
        Err(errors)
    }
}

#[allow(clippy::too_many_arguments)]
fn resolve_system(
    command: CommandKind,
    perm_text: Option<&str>,
    lengths_text: Option<&str>,
    normalize: bool,
    sample: bool,
    seed: Option<u64>,
    catalog: &Catalog,
    errors: &mut Vec<String>,
) -> Option<System> {
    let Some(perm_text) = perm_text else {
        errors.push("perm: missing (give a permutation such as \"3 2 1\" or a catalog name)".into());
        return None;
    };
    let (name, source, perm, catalog_lengths) = match catalog.get(perm_text.trim()) {
        Some(entry) => (
            Some(entry.name.clone()),
            format!("catalog:{}", catalog.source),
            entry.perm.clone(),
            entry.lengths.clone(),
        ),
        None => match perm_text.parse::<Permutation>() {
            Ok(p) => (None, "command line".to_string(), p, None),
            Err(e) => {
                errors.push(format!(
                    "perm: {perm_text:?} is neither a catalog name nor a permutation ({e})"
                ));
                return None;
            }
        },
    };

    let (lengths, source) = match (lengths_text, sample, seed) {
        (Some(text), _, _) => match parse_lengths(text) {
            Ok(l) => (Some(l), source),
            Err(e) => {
                errors.push(format!("lengths: {e}"));
                return None;
            }
        },
        (None, true, Some(seed)) => (
            Some(sample_lengths(perm.d(), seed)),
            format!("sample(seed={seed})"),
        ),
        (None, _, _) => (catalog_lengths, source),
    };
    let normalize = normalize || sample;

    let iet = match &lengths {
        None if command.needs_lengths() => {
            errors.push("lengths: missing (give --lengths, a catalog entry with lengths, or --sample)".into());
            return None;
        }
        None => None,
        Some(lengths) => {
            let mut ok = true;
            if lengths.len() != perm.d() {
                errors.push(format!(
                    "lengths: {} given for a permutation of {} symbols",
                    lengths.len(),
                    perm.d()
                ));
                ok = false;
            }
            if ok && !normalize {
                let total = lengths.iter().try_fold(Scalar::zero(), |acc, l| acc.checked_add(l));
                if let Ok(total) = total {
                    if total != Scalar::one() {
                        errors.push(format!("lengths: sum is {total}, not 1 (pass --normalize to rescale)"));
                        ok = false;
                    }
                }
            }
            if ok {
                match Iet::new(lengths.clone(), perm.clone()) {
                    Ok(iet) => Some(iet),
                    Err(e) => {
                        errors.push(format!("lengths: {e}"));
                        None
                    }
                }
            } else {
                None
            }
        }
    };

    Some(System {
        name,
        source,
        perm,
        lengths_input: lengths,
        normalize,
        iet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> RawConfig {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn catalog_names_resolve_with_lengths() {
        let s = resolve(CommandKind::Analyze, &raw(&[("perm", "golden")]), None).unwrap();
        let system = s.system.unwrap();
        assert_eq!(system.name.as_deref(), Some("golden"));
        assert_eq!(system.iet.unwrap().d(), 2);
        assert_eq!(s.horizon, 100);
        assert_eq!(s.threshold, s.eps);
    }

    #[test]
    fn errors_are_aggregated() {
        let errs = resolve(
            CommandKind::Analyze,
            &raw(&[("perm", "3 2 1"), ("N", "0"), ("eps", "-1"), ("format", "xml")]),
            None,
        )
        .unwrap_err();
        assert_eq!(errs.len(), 4, "{errs:?}");
        assert!(errs.iter().any(|e| e.starts_with("lengths: missing")));
    }

    #[test]
    fn missing_lengths_is_single_error() {
        let errs = resolve(CommandKind::Analyze, &raw(&[("perm", "3 2 1")]), None).unwrap_err();
        assert_eq!(errs.len(), 1);
    }

    #[test]
    fn sum_must_be_one_unless_normalized() {
        let r = raw(&[("perm", "2 1"), ("lengths", "1,2")]);
        assert!(resolve(CommandKind::Eps, &r, None).is_err());
        let mut r = r;
        r.insert("normalize".into(), "true".into());
        let s = resolve(CommandKind::Eps, &r, None).unwrap();
        assert_eq!(s.system.unwrap().iet.unwrap().lengths()[0], Scalar::ratio(1, 3));
    }

    #[test]
    fn sampling_is_seeded() {
        assert_eq!(sample_lengths(4, 7), sample_lengths(4, 7));
        assert_ne!(sample_lengths(4, 7), sample_lengths(4, 8));
        let r = raw(&[("perm", "3 2 1"), ("sample", "true"), ("seed", "7")]);
        let s = resolve(CommandKind::Eps, &r, None).unwrap();
        assert!(s.system.unwrap().iet.is_some());
        let r = raw(&[("perm", "3 2 1"), ("seed", "7")]);
        assert!(resolve(CommandKind::Eps, &r, None).is_err());
    }

    #[test]
    fn config_file_formats() {
        let kv = read_config_file("# c\nperm = 3 2 1\nN=50\n").unwrap();
        assert_eq!(kv["perm"], "3 2 1");
        let js = read_config_file(r#"{"perm": "2 1", "lengths": ["1/2", "1/2"], "N": 5}"#).unwrap();
        assert_eq!(js["lengths"], "1/2,1/2");
        assert_eq!(js["N"], "5");
        assert!(read_config_file("bogus = 1\n").is_err());
    }
}

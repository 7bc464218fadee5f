//! Batch front-end: `ietlab <command> [SYSTEM] [flags]`.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for computation
//! or output failures.

pub mod catalog;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use config::{CommandKind, Format, RawConfig, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ietlab", version, about = "Exact-arithmetic analysis of interval exchange transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Permutation facts: irreducibility, sigma, orbits, type W.
    Perm(Target),
    /// Full report: idoc, eps_n statistics, bad approximation, rigidity.
    Analyze(Target),
    /// List the entries of the catalog.
    Catalog(Flags),
    /// The table of eps_n and n * eps_n.
    Eps(Target),
    /// Towers over the smallest partition cells and over the loop through 0.
    Tower(Target),
    /// Rigidity profile and, with --delta, an invariance-window measure.
    Rigidity(Target),
}

#[derive(Args, Debug)]
struct Target {
    /// Permutation text such as "3 2 1" or a catalog name.
    system: Option<String>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Permutation text or catalog name.
    #[arg(long)]
    perm: Option<String>,
    /// Comma-separated exact lengths, e.g. "1/2,sqrt(2)-1".
    #[arg(long, allow_hyphen_values = true)]
    lengths: Option<String>,
    /// Rescale lengths by their sum.
    #[arg(long)]
    normalize: bool,
    /// Horizon.
    #[arg(long = "N", value_name = "N")]
    horizon: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    /// Candidate threshold for rigid times (defaults to eps).
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// Window half-width for the invariance-window measure.
    #[arg(long)]
    b: Option<String>,
    /// Output file; analyze also writes CSV side files next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Draw rational lengths from a seeded generator.
    #[arg(long)]
    sample: bool,
    /// Seed for --sample.
    #[arg(long)]
    seed: Option<String>,
    /// Config file: key=value lines or a JSON object.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog file (default: $IETLAB_CATALOG, then the bundled catalog).
    #[arg(long)]
    catalog: Option<PathBuf>,
}

impl Flags {
    fn into_raw(self, system: Option<String>, errors: &mut Vec<String>) -> RawConfig {
        let mut raw = RawConfig::new();
        if let Some(path) = &self.config {
            match std::fs::read_to_string(path) {
                Ok(text) => match config::read_config_file(&text) {
                    Ok(file) => raw.extend(file),
                    Err(errs) => errors.extend(errs),
                },
                Err(e) => errors.push(format!("config: cannot read {}: {e}", path.display())),
            }
        }
        if system.is_some() && self.perm.is_some() {
            errors.push("perm: given both positionally and with --perm".into());
        }
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                raw.insert(key.to_string(), v);
            }
        };
        set("perm", system.or(self.perm));
        set("lengths", self.lengths);
        set("N", self.horizon);
        set("eps", self.eps);
        set("threshold", self.threshold);
        set("delta", self.delta);
        set("b", self.b);
        set("out", self.out.map(|p| p.display().to_string()));
        set("format", self.format);
        set("seed", self.seed);
        set("catalog", self.catalog.map(|p| p.display().to_string()));
        set("normalize", self.normalize.then(|| "true".to_string()));
        set("sample", self.sample.then(|| "true".to_string()));
        raw
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (kind, system, flags) = match cli.command {
        Command::Perm(t) => (CommandKind::Perm, t.system, t.flags),
        Command::Analyze(t) => (CommandKind::Analyze, t.system, t.flags),
        Command::Catalog(f) => (CommandKind::Catalog, None, f),
        Command::Eps(t) => (CommandKind::Eps, t.system, t.flags),
        Command::Tower(t) => (CommandKind::Tower, t.system, t.flags),
        Command::Rigidity(t) => (CommandKind::Rigidity, t.system, t.flags),
    };

    let mut errors = Vec::new();
    let raw = flags.into_raw(system, &mut errors);
    let env_catalog = std::env::var(catalog::CATALOG_ENV).ok().filter(|s| !s.is_empty());
    let settings = match config::resolve(kind, &raw, env_catalog) {
        Ok(s) if errors.is_empty() => s,
        Ok(_) => return config_error(err, &errors),
        Err(more) => {
            errors.extend(more);
            return config_error(err, &errors);
        }
    };

    match execute(&settings, out) {
        Ok(()) => EXIT_OK,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_COMPUTE
        }
    }
}

fn config_error(err: &mut dyn Write, errors: &[String]) -> i32 {
    let _ = writeln!(err, "configuration error ({} problem{}):", errors.len(), if errors.len() == 1 { "" } else { "s" });
    for e in errors {
        let _ = writeln!(err, "  - {e}");
    }
    EXIT_CONFIG
}

fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn emit(settings: &Settings, out: &mut dyn Write, json: &Value, csv: &str) -> Result<(), String> {
    let body = match settings.format {
        Format::Json => render_json(json),
        Format::Csv => csv.to_string(),
    };
    write_target(settings.out.as_deref(), out, &body)
}

fn write_target(path: Option<&Path>, out: &mut dyn Write, body: &str) -> Result<(), String> {
    match path {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(body.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    }
}

/// `dir/report.json` gives `dir/report.<suffix>.csv`.
pub fn side_file(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn execute(settings: &Settings, out: &mut dyn Write) -> Result<(), String> {
    if settings.command == CommandKind::Catalog {
        let (json, csv) = report::catalog_report(settings);
        return emit(settings, out, &json, &csv);
    }
    let system = settings.system.as_ref().expect("validated system");
    if settings.command == CommandKind::Perm {
        let (json, csv) = report::perm_report(system);
        return emit(settings, out, &json, &csv);
    }
    let iet = system.iet.as_ref().expect("validated lengths");
    match settings.command {
        CommandKind::Analyze => {
            let mut result = report::analyze(settings, system, iet);
            if let Some(path) = &settings.out {
                let lin_rec = side_file(path, "linrec");
                let rigidity = side_file(path, "rigidity");
                result.json["side_files"] = serde_json::json!({
                    "linear_recurrence": lin_rec.display().to_string(),
                    "rigidity": rigidity.display().to_string(),
                });
                write_target(Some(&lin_rec), out, &result.lin_rec_csv)?;
                write_target(Some(&rigidity), out, &result.rigidity_csv)?;
            }
            write_target(settings.out.as_deref(), out, &render_json(&result.json))
        }
        CommandKind::Eps => {
            let (json, csv) = report::eps_report(settings, system, iet);
            emit(settings, out, &json, &csv)
        }
        CommandKind::Tower => {
            let (json, csv) = report::tower_report(settings, system, iet).map_err(|e| e.to_string())?;
            emit(settings, out, &json, &csv)
        }
        CommandKind::Rigidity => {
            let (json, csv) = report::rigidity_report(settings, system, iet);
            emit(settings, out, &json, &csv)
        }
        CommandKind::Perm | CommandKind::Catalog => unreachable!(),
    }
}

//! The `tstrat` command-line front end.
//!
//! Exit codes: 0 when every command produced a solution, 1 when some
//! command produced none, 2 on usage, model or parse errors, 3 when a run
//! hit a state, round or time limit.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, ValueEnum};

use crate::analysis::{run_command, Limits};
use crate::builtin::builtin_source;
use crate::lang::parse_commands;
use crate::model::{load_model, Model};
use crate::report::{render_json, render_text, ReportOptions, SolutionOrder};

pub const MODEL_PATH_VAR: &str = "TSTRAT_MODEL_PATH";

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NONE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum SeedOrder {
    /// Sorted by clock, then configuration.
    Canonical,
    /// In the order the exploration found them.
    #[default]
    Discovery,
}

/// Run timed strategies on real-time rewrite models.
#[derive(Debug, Parser)]
#[command(name = "tstrat", version)]
pub struct CliConfig {
    /// Model file, or the name of a bundled model or of a `.rtmod` file on
    /// the model search path. Defaults to the model each command names.
    #[arg(short, long)]
    pub model: Option<String>,

    /// Command text, e.g. `tsearch [1] in rtt : init => ... using ... with sampling ...`.
    #[arg(short = 'e', long = "command", value_name = "TEXT", required_unless_present = "command_file")]
    pub command: Option<String>,

    /// File of commands, run in order.
    #[arg(short = 'f', long, value_name = "PATH", conflicts_with = "command")]
    pub command_file: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,

    /// Stop after visiting this many distinct states.
    #[arg(long, value_name = "N")]
    pub max_states: Option<u64>,

    /// Stop exploring paths longer than this many strategy rounds.
    #[arg(long, value_name = "N")]
    pub max_rounds: Option<u64>,

    /// Wall-clock limit per command: `500ms`, `30s` or plain seconds.
    #[arg(long, value_name = "DURATION", value_parser = parse_duration)]
    pub timeout: Option<Duration>,

    /// Print state counts and timing.
    #[arg(long)]
    pub stats: bool,

    /// Order of the reported solutions.
    #[arg(long, value_enum, default_value_t)]
    pub seed_order: SeedOrder,

    /// Worker threads for breadth-first exploration.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub parallel: Option<u64>,

    /// Directories searched for `<name>.rtmod`, before the bundled models.
    #[arg(long, env = MODEL_PATH_VAR, hide_env_values = true, value_name = "DIRS")]
    pub model_path: Option<OsString>,
}

fn parse_duration(s: &str) -> Result<Duration, String> {
    let (num, scale) = if let Some(n) = s.strip_suffix("ms") {
        (n, 0.001)
    } else if let Some(n) = s.strip_suffix('s') {
        (n, 1.0)
    } else {
        (s, 1.0)
    };
    let v: f64 = num.trim().parse().map_err(|_| format!("invalid duration `{s}`"))?;
    if !v.is_finite() || v < 0.0 {
        return Err(format!("invalid duration `{s}`"));
    }
    Ok(Duration::from_secs_f64(v * scale))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("model {origin}: {message}")]
    Model { origin: String, message: String },
    #[error("no model named `{0}`: not a file, not on the model path, and not bundled")]
    UnknownModel(String),
    #[error("command: {0}")]
    Command(String),
}

impl CliConfig {
    fn limits(&self) -> Limits {
        Limits {
            max_states: self.max_states,
            max_rounds: self.max_rounds,
            timeout: self.timeout,
            parallel: self.parallel.map(|n| n as usize),
        }
    }

    fn report_options(&self) -> ReportOptions {
        ReportOptions {
            order: match self.seed_order {
                SeedOrder::Canonical => SolutionOrder::Canonical,
                SeedOrder::Discovery => SolutionOrder::Discovery,
            },
            stats: self.stats,
        }
    }

    fn command_text(&self) -> Result<(String, String), CliError> {
        match (&self.command, &self.command_file) {
            (Some(t), _) => Ok(("<command>".to_string(), t.clone())),
            (None, Some(p)) => Ok((p.display().to_string(), read(p)?)),
            (None, None) => unreachable!("clap requires a command source"),
        }
    }

    fn search_dirs(&self) -> Vec<PathBuf> {
        self.model_path.as_ref().map(|p| std::env::split_paths(p).collect()).unwrap_or_default()
    }

    /// A file path, a `.rtmod` on the search path, or a bundled model.
    fn resolve_model(&self, name: &str) -> Result<Model, CliError> {
        let path = Path::new(name);
        if path.is_file() {
            return load(&path.display().to_string(), &read(path)?);
        }
        for dir in self.search_dirs() {
            let candidate = dir.join(format!("{name}.rtmod"));
            if candidate.is_file() {
                return load(&candidate.display().to_string(), &read(&candidate)?);
            }
        }
        match builtin_source(name) {
            Some(src) => load(&format!("`{name}` (bundled)"), src),
            None => Err(CliError::UnknownModel(name.to_string())),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(origin: &str, text: &str) -> Result<Model, CliError> {
    load_model(text).map_err(|e| CliError::Model { origin: origin.to_string(), message: e.to_string() })
}

/// Parses `args` (including the program name) and runs every command,
/// writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cfg, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (origin, text) = cfg.command_text()?;
    let commands = parse_commands(&text).map_err(|e| CliError::Command(format!("{origin}:{e}")))?;
    if commands.is_empty() {
        return Err(CliError::Command(format!("{origin}: no commands")));
    }
    let fixed = cfg.model.as_deref().map(|m| cfg.resolve_model(m)).transpose()?;
    let mut cache: HashMap<String, Model> = HashMap::new();
    let limits = cfg.limits();
    let opts = cfg.report_options();
    let many = commands.len() > 1;
    let mut code = EXIT_FOUND;
    for cmd in &commands {
        let model = match &fixed {
            Some(m) => m,
            None => {
                let key = cmd.model.to_ascii_lowercase();
                if !cache.contains_key(&key) {
                    cache.insert(key.clone(), cfg.resolve_model(&cmd.model)?);
                }
                &cache[&key]
            }
        };
        let result = run_command(cmd, model, &limits).map_err(|e| CliError::Command(e.to_string()))?;
        let rendered = match cfg.format {
            Format::Text => {
                let body = render_text(&result, &opts);
                if many {
                    format!("==> {}\n{body}\n", cmd)
                } else {
                    body
                }
            }
            Format::Json => format!("{}\n", render_json(&cmd.to_string(), &result, &opts)),
        };
        write_out(out, &rendered)?;
        if result.status.is_incomplete() {
            let _ = writeln!(err, "warning: {}: {:?}", cmd, result.status);
            code = EXIT_BUDGET;
        } else if result.solutions.is_empty() && code == EXIT_FOUND {
            code = EXIT_NONE;
        }
    }
    Ok(code)
}

fn write_out(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    out.write_all(s.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".to_string(), source })
}

//! Rendering run results as text or JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{RunResult, RunStats, Solution, Status};
use crate::config::History;
use crate::time::Time;

pub const SCHEMA_VERSION: u32 = 1;

/// Order in which solutions are listed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SolutionOrder {
    /// As the exploration found them.
    #[default]
    Discovery,
    /// Sorted by clock, then by configuration.
    Canonical,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub order: SolutionOrder,
    /// Include run statistics, whose wall time varies between runs.
    pub stats: bool,
}

fn ordered(r: &RunResult, order: SolutionOrder) -> Vec<&Solution> {
    let mut sols: Vec<&Solution> = r.solutions.iter().collect();
    if order == SolutionOrder::Canonical {
        sols.sort_by(|a, b| (a.clock(), &a.state.config).cmp(&(b.clock(), &b.state.config)));
    }
    sols
}

pub fn stats_line(s: &RunStats) -> String {
    format!("states: {}  rule-apps: {}  time: {}ms", s.states_explored, s.rule_apps, s.wall_time.as_millis())
}

fn status_note(status: Status) -> Option<&'static str> {
    match status {
        Status::BudgetExhausted => Some("budget exhausted; results may be incomplete"),
        Status::TimedOut => Some("timed out; results may be incomplete"),
        Status::Complete | Status::SolutionLimit => None,
    }
}

pub fn render_text(r: &RunResult, opts: &ReportOptions) -> String {
    let mut out = String::new();
    let sols = ordered(r, opts.order);
    if sols.is_empty() {
        out.push_str("no solutions\n");
    }
    for (i, s) in sols.iter().enumerate() {
        let _ = write!(out, "Solution {} (rounds: {}", i + 1, s.rounds);
        if s.stuck {
            out.push_str(", stuck");
        }
        out.push_str(")\n");
        let _ = writeln!(out, "{}", s.state);
        if !s.history.is_empty() {
            let _ = writeln!(out, "history: {}", crate::config::fmt_history(&s.history));
        }
        out.push('\n');
    }
    if let Some(note) = status_note(r.status) {
        let _ = writeln!(out, "status: {note}");
    }
    if opts.stats {
        let _ = writeln!(out, "{}", stats_line(&r.stats));
    }
    out
}

#[derive(Debug, Serialize)]
struct JsonSolution<'a> {
    clock: Time,
    entities: Vec<String>,
    history: &'a History,
    stuck: bool,
    rounds: u64,
}

#[derive(Debug, Serialize)]
struct JsonStats {
    states_explored: u64,
    rule_apps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u64>,
}

#[derive(Debug, Serialize)]
struct JsonReport<'a> {
    schema: u32,
    command: &'a str,
    status: Status,
    solutions: Vec<JsonSolution<'a>>,
    stats: JsonStats,
}

/// One JSON object per command. The wall time is only present when
/// statistics were requested, so that the default output is reproducible.
pub fn render_json(command: &str, r: &RunResult, opts: &ReportOptions) -> String {
    let report = JsonReport {
        schema: SCHEMA_VERSION,
        command,
        status: r.status,
        solutions: ordered(r, opts.order)
            .into_iter()
            .map(|s| JsonSolution {
                clock: s.clock(),
                entities: s.state.config.entities().iter().map(ToString::to_string).collect(),
                history: &s.history,
                stuck: s.stuck,
                rounds: s.rounds,
            })
            .collect(),
        stats: JsonStats {
            states_explored: r.stats.states_explored,
            rule_apps: r.stats.rule_apps,
            wall_time_ms: opts.stats.then_some(r.stats.wall_time.as_millis() as u64),
        },
    };
    serde_json::to_string(&report).expect("report serialization cannot fail")
}

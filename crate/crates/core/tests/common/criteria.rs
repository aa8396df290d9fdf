//! The acceptance criteria as plain functions: `Ok` carries a one-line
//! summary, `Err` says what went wrong.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use tstrat::analysis::{Limits, RunResult};
use tstrat::config::{Configuration, StratState};
use tstrat::model::Model;

use super::*;

pub type Outcome = Result<String, String>;

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

const RTT20: &str = "matches {CONF < S : Sender | rtt : 20, ATTS >} in time R";
const RTT50: &str = "matches {CONF < S : Sender | rtt : 50, ATTS >} in time R";
const MAX4: &str = "using delay or action with sampling max-time with default 4";
const SWITCH: &str = "using delay or action with sampling \
    switch when matches {CONF dly(M, T1, T2)} in time R do fixed-time 1 otherwise max-time with default 1";

/// The recorded outputs of the RTT case study. Every line is checked; all
/// mismatches are reported together.
pub fn golden() -> Outcome {
    let m = model("rtt");
    let cases: Vec<(String, Vec<u64>)> = vec![
        (
            format!("tsearch [2] in rtt : init => {RTT20} using delay or action with sampling fixed-time 1"),
            vec![20, 21],
        ),
        (format!("tsearch [2] in rtt : init => {RTT50} {MAX4}"), vec![50, 5000]),
        (format!("tsearch in rtt : init => {RTT20} {MAX4} in time [5000, 10000]"), vec![]),
        (format!("tsearch [2] in rtt : init => {RTT50} {MAX4} in time [5000, 10000]"), vec![5000, 5000]),
        (format!("tsearch [2] in rtt : init => {RTT20} {SWITCH}"), vec![20, 5000]),
        (format!("tsim [1] in rtt : init {MAX4} until 10000"), vec![10000]),
        (
            format!("find earliest in rtt : init => {RECORDED} using action or delay with sampling fixed-time 1"),
            vec![12],
        ),
        (format!("find latest in rtt : init => {RECORDED} using action or delay with sampling fixed-time 1"), vec![50]),
        (format!("find latest in rtt : init => {RECORDED} using eager with sampling fixed-time 1"), vec![12]),
    ];
    let mut failures = Vec::new();
    for (cmd, want) in &cases {
        let mut got = clocks(&run(&m, cmd));
        got.sort();
        if &got != want {
            let head: String = cmd.chars().take(60).collect();
            failures.push(format!("`{head}...` gave {got:?}, want {want:?}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} commands match", cases.len()))
    } else {
        Err(format!("{}/{} commands differ: {}", failures.len(), cases.len(), failures.join("; ")))
    }
}

pub const IDLE_BOUND: u64 = 100_000;

fn idle_search(strategy: &str) -> String {
    format!(
        "tsearch in rtt-idle : init => matches {{STATE}} in time T2 using {strategy} \
         with sampling max-time with default 4 in time [0, {IDLE_BOUND}]"
    )
}

/// Solution counts on the idling model, for the history strategy and for
/// `action or delay`, and the same count on the plain model.
pub fn idle_counts() -> (usize, usize, usize) {
    let idle = model("rtt-idle");
    let history = run(&idle, &idle_search(IDLE_HISTORY_STRATEGY)).solutions.len();
    let free = run(&idle, &idle_search("action or delay")).solutions.len();
    let plain_cmd = idle_search("action or delay").replace("rtt-idle", "rtt");
    let plain = run(&model("rtt"), &plain_cmd).solutions.len();
    (history, free, plain)
}

/// Exact 126/162 when reachable; otherwise both engine counts must equal
/// the independent oracle's.
pub fn state_counts() -> Outcome {
    let (history, free, plain) = idle_counts();
    if (history, free) == (126, 162) {
        return Ok("126 / 162 exactly".to_string());
    }
    let p = RttParams { idle: true, ..RttParams::new(5000) };
    let oracle_history = oracle_idle_count(&p, 4, IDLE_BOUND, true);
    let oracle_free = oracle_idle_count(&p, 4, IDLE_BOUND, false);
    expect("history strategy vs oracle", history, oracle_history)?;
    expect("`action or delay` vs oracle", free, oracle_free)?;
    Ok(format!(
        "126/162 not reproduced; engine matches oracle on rtt-idle ({history} history, {free} unrestricted); \
         plain rtt gives {plain}"
    ))
}

pub const SCALED_PERIOD: u64 = 100;
pub const SCALED_BOUND: u64 = 200;

/// Every state of the scaled model reachable with unit ticks up to the
/// clock bound, by the engine and by the hand-written simulator.
pub fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let m = rtt_with_period(SCALED_PERIOD);
    let r = run(
        &m,
        &format!(
            "tsearch in rtt : init => matches {{C}} in time T using action or delay \
             with sampling fixed-time 1 in time [0, {SCALED_BOUND}]"
        ),
    );
    let engine: BTreeSet<OState> = r.solutions.iter().map(|s| OState::from_engine(&s.state)).collect();
    expect("distinct solutions", engine.len(), r.solutions.len())?;
    let oracle = oracle_reachable_unit_ticks(&RttParams::new(SCALED_PERIOD), SCALED_BOUND);
    if engine != oracle {
        let missing = oracle.difference(&engine).count();
        let extra = engine.difference(&oracle).count();
        return Err(format!(
            "engine {} states, oracle {}; {missing} missing, {extra} extra",
            engine.len(),
            oracle.len()
        ));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("sets agree but took {elapsed:?}"));
    }
    Ok(format!("{} states, equal sets, {} ms", engine.len(), elapsed.as_millis()))
}

/// Earliest and latest first-recording clocks on the scaled model against
/// the simulator.
pub fn find_earliest_minimal() -> Outcome {
    let m = rtt_with_period(SCALED_PERIOD);
    let recorded = |s: &OState| s.rtt.is_some_and(|x| x != 0);
    let oracle_min = oracle_reachable_unit_ticks(&RttParams::new(SCALED_PERIOD), SCALED_BOUND)
        .into_iter()
        .filter(recorded)
        .map(|s| s.clock)
        .min()
        .ok_or("oracle found no recorded state")?;
    let r =
        run(&m, &format!("find earliest in rtt : init => {RECORDED} using action or delay with sampling fixed-time 1"));
    expect("find earliest", clocks(&r), vec![oracle_min])?;
    Ok(format!("earliest {oracle_min} on both routes"))
}

/// Latest clock at which some path first satisfies "recorded".
pub fn oracle_latest_first_record(p: &RttParams) -> u64 {
    let mut seen = HashSet::from([OState::init()]);
    let mut queue = VecDeque::from([OState::init()]);
    let mut latest = 0;
    while let Some(s) = queue.pop_front() {
        if s.rtt.is_some_and(|x| x != 0) {
            latest = latest.max(s.clock);
            continue;
        }
        for x in s.steps(p).into_iter().map(|(_, x)| x).chain(s.tick(1)) {
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    latest
}

pub const AGREEMENT_DEPTH: u64 = 40;

fn configs(r: &RunResult) -> BTreeSet<Configuration> {
    r.solutions.iter().map(|s| s.state.config.clone()).collect()
}

/// Depth-bounded timed and untimed searches reach the same configurations
/// under a strategy that never looks at the clock.
pub fn usearch_agreement_on(m: &Model, strategy: &str, sampling: &str, depth: u64) -> Result<usize, String> {
    let body =
        format!("[1000000000, {depth}] in rtt : init => matches {{C}} using {strategy} with sampling {sampling}");
    let timed = run(m, &format!("tsearch {body}"));
    let untimed = run(m, &format!("usearch {body}"));
    let (a, b) = (configs(&timed), configs(&untimed));
    if untimed.solutions.iter().any(|s| s.clock() != 0) {
        return Err("usearch returned a nonzero clock".into());
    }
    if a != b {
        return Err(format!("{strategy} / {sampling}: tsearch {} configurations, usearch {}", a.len(), b.len()));
    }
    Ok(a.len())
}

pub fn usearch_agreement() -> Outcome {
    let m = rtt_with_period(SCALED_PERIOD);
    let mut sizes = Vec::new();
    for (strategy, sampling) in [
        ("action or delay", "fixed-time 1"),
        ("action or delay", "max-time with default 4"),
        ("eager", "fixed-time 3"),
        ("apply send or apply respond or apply [recordRTT deliver] or delay", "fixed-time 2"),
    ] {
        sizes.push(usearch_agreement_on(&m, strategy, sampling, AGREEMENT_DEPTH)?);
    }
    Ok(format!("equal configuration sets at depth {AGREEMENT_DEPTH}: {sizes:?}"))
}

pub const CASH_BUDGET: Duration = Duration::from_secs(120);

/// Deadline misses within [0, 12] on cash-lite: found by both orders, with
/// equal solution sets.
pub fn cash_lite() -> Outcome {
    let m = model("cash-lite");
    let body = "in cash-lite : init => matches {CONF deadlineMiss(S)} in time T \
                using action or delay with sampling fixed-time 1 in time [0, 12]";
    let limits = Limits { timeout: Some(CASH_BUDGET), ..Default::default() };
    let mut lines = Vec::new();
    let mut sets = Vec::new();
    for cmd in ["tsearch", "dtsearch"] {
        let r = run_with(&m, &format!("{cmd} {body}"), &limits);
        if r.status.is_incomplete() || r.stats.wall_time >= CASH_BUDGET {
            return Err(format!("{cmd} did not finish within {CASH_BUDGET:?}: {:?}", r.status));
        }
        if r.solutions.is_empty() {
            return Err(format!("{cmd} found no deadline miss"));
        }
        lines.push(format!("{cmd}: {} solutions, {}", r.solutions.len(), tstrat::report::stats_line(&r.stats)));
        sets.push(r.solutions.iter().map(|s| s.state.clone()).collect::<HashSet<_>>());
    }
    if sets[0] != sets[1] {
        return Err(format!("solution sets differ: {}", lines.join("; ")));
    }
    Ok(lines.join("; "))
}

/// Applies `f` to every state reachable from `init` by rounds of the
/// plan's strategy, computing successors one round at a time.
pub fn worklist<F>(init: &StratState, mut successors: F) -> HashSet<StratState>
where
    F: FnMut(&StratState) -> Vec<StratState>,
{
    let mut seen = HashSet::from([init.clone()]);
    let mut stack = vec![init.clone()];
    while let Some(s) = stack.pop() {
        for x in successors(&s) {
            if seen.insert(x.clone()) {
                stack.push(x);
            }
        }
    }
    seen
}

//! Analysis commands: simulation, rewriting up to a depth, timed and untimed
//! reachability, and earliest/latest search.
//!
//! Every command becomes a [`Plan`]: a per-round strategy `< μ , τ >`, a
//! goal, and exploration bounds. The explorer treats one evaluation of the
//! round strategy as one edge and keeps a visited set keyed on the full
//! strategy state (configuration, clock and history).

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ClockedState, History, StratState, Sym};
use crate::lang::{Command, CommandKind, DStrat, Exploration, SCond, TStrat};
use crate::model::Model;
use crate::semantics::{eval_cond, Counters, Evaluator, Exhausted, ResultSet};
use crate::time::{Time, TimeInf};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub state: ClockedState,
    pub history: History,
    /// Strategy rounds from the initial state.
    pub rounds: u64,
    /// The round strategy failed before the goal condition held.
    pub stuck: bool,
}

impl Solution {
    pub fn clock(&self) -> Time {
        self.state.clock
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub states_explored: u64,
    pub rule_apps: u64,
    #[serde(serialize_with = "millis")]
    pub wall_time: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl RunStats {
    fn absorb(&mut self, o: RunStats) {
        self.states_explored += o.states_explored;
        self.rule_apps += o.rule_apps;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// The search space was exhausted.
    Complete,
    /// Stopped after the requested number of solutions.
    SolutionLimit,
    /// A state or round limit was hit; results may be incomplete.
    BudgetExhausted,
    TimedOut,
}

impl Status {
    pub fn is_incomplete(self) -> bool {
        matches!(self, Status::BudgetExhausted | Status::TimedOut)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub solutions: Vec<Solution>,
    pub stats: RunStats,
    pub status: Status,
}

/// Safety limits for a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    /// Maximal number of distinct states visited, also applied to each
    /// closure inside a strategy round.
    pub max_states: Option<u64>,
    /// Maximal number of strategy rounds along any path.
    pub max_rounds: Option<u64>,
    pub timeout: Option<Duration>,
    /// Worker threads for breadth-first frontiers; `None` or 1 is sequential.
    pub parallel: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("strategy uses rule `{0}`, which model `{1}` does not define")]
    UnknownLabel(Sym, String),
    #[error("command refers to model `{command}` but the loaded model is `{loaded}`")]
    ModelMismatch { command: String, loaded: String },
    #[error("could not build a thread pool: {0}")]
    ThreadPool(String),
}

/// What the explorer reports as solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    /// `repeat μ ; check φ`: every reachable state satisfying the condition.
    Reach(SCond),
    /// `until φ do μ`: states where the condition holds or the round fails.
    /// With `check` set, only the former (`until φ do μ ; check φ`).
    Until { cond: SCond, check: bool },
    /// `d steps with μ`: states reached after exactly `d` rounds.
    Exactly(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub round: DStrat,
    pub sampling: TStrat,
    pub goal: Goal,
    pub order: Exploration,
    pub n: Option<u64>,
    /// At most this many rounds (for [`Goal::Reach`]).
    pub depth: Option<u64>,
}

impl Plan {
    /// The plan for a simulation, rewrite or search command. `find`
    /// commands run several plans; see [`run_command`].
    pub fn for_command(cmd: &Command) -> Plan {
        let base = |goal| Plan {
            round: cmd.strategy.clone(),
            sampling: cmd.sampling.clone(),
            goal,
            order: Exploration::BreadthFirst,
            n: None,
            depth: None,
        };
        match &cmd.kind {
            CommandKind::Tsim { n, until } => {
                Plan { n: *n, ..base(Goal::Until { cond: SCond::AfterEq(*until), check: false }) }
            }
            CommandKind::Trew { steps, n } => Plan { n: *n, ..base(Goal::Exactly(*steps)) },
            CommandKind::Search { untimed, order, n, depth, cond, interval } => {
                let mut plan = base(Goal::Reach(cond.clone()));
                if let Some(iv) = interval {
                    if let TimeInf::Finite(b) = iv.upper() {
                        plan.round = DStrat::if_then_else(SCond::After(b), DStrat::Stop, plan.round);
                    }
                    plan.goal = Goal::Reach(SCond::and(cond.clone(), SCond::In(*iv)));
                }
                if *untimed {
                    plan.sampling = TStrat::untime(plan.sampling);
                }
                Plan { order: *order, n: *n, depth: *depth, ..plan }
            }
            CommandKind::FindEarliest { cond } | CommandKind::FindLatest { cond } => {
                base(Goal::Until { cond: cond.clone(), check: true })
            }
        }
    }

    /// The single discrete strategy whose result set, evaluated from the
    /// initial state, is the plan's solution set.
    pub fn strategy(&self) -> DStrat {
        let mu = self.round.clone();
        match &self.goal {
            Goal::Reach(c) => {
                let reach = match self.depth {
                    None => DStrat::repeat(mu),
                    Some(d) => (0..d).fold(DStrat::steps(d, mu.clone()), |acc, i| {
                        DStrat::or(acc, DStrat::steps(d - 1 - i, mu.clone()))
                    }),
                };
                DStrat::seq(reach, DStrat::Check(c.clone()))
            }
            Goal::Until { cond, check: false } => DStrat::until_do(cond.clone(), mu),
            Goal::Until { cond, check: true } => {
                DStrat::seq(DStrat::until_do(cond.clone(), mu), DStrat::Check(cond.clone()))
            }
            Goal::Exactly(d) => DStrat::steps(*d, mu),
        }
    }
}

/// Rejects strategies that name rules the model does not have.
pub fn check_labels(strategy: &DStrat, model: &Model) -> Result<(), AnalysisError> {
    match strategy.labels().into_iter().find(|l| !model.has_label(l)) {
        Some(l) => Err(AnalysisError::UnknownLabel(l, model.name.clone())),
        None => Ok(()),
    }
}

pub fn run_command(cmd: &Command, model: &Model, limits: &Limits) -> Result<RunResult, AnalysisError> {
    if !cmd.model.eq_ignore_ascii_case(&model.name) {
        return Err(AnalysisError::ModelMismatch { command: cmd.model.clone(), loaded: model.name.clone() });
    }
    check_labels(&cmd.strategy, model)?;
    let plan = Plan::for_command(cmd);
    match &cmd.kind {
        CommandKind::FindEarliest { cond } => find_earliest(&plan, cond, model, limits),
        CommandKind::FindLatest { .. } => find_latest(&plan, model, limits),
        _ => explore(&plan, model, limits),
    }
}

/// Branch and bound: find a solution, then look for one strictly earlier,
/// until none is left.
fn find_earliest(plan: &Plan, cond: &SCond, model: &Model, limits: &Limits) -> Result<RunResult, AnalysisError> {
    let start = Instant::now();
    let mut stats = RunStats::default();
    let mut best: Option<Solution> = None;
    let mut status = Status::Complete;
    loop {
        let mut p = Plan { n: Some(1), ..plan.clone() };
        if let Some(b) = &best {
            let t = b.clock();
            p.round = DStrat::if_then_else(SCond::After(t), DStrat::Stop, plan.round.clone());
            p.goal = Goal::Until { cond: SCond::and(cond.clone(), SCond::Before(t)), check: true };
        }
        let mut lim = *limits;
        if let Some(t) = limits.timeout {
            lim.timeout = Some(t.saturating_sub(start.elapsed()));
        }
        let r = explore(&p, model, &lim)?;
        stats.absorb(r.stats);
        match r.solutions.into_iter().next() {
            Some(s) => best = Some(s),
            None => {
                if r.status.is_incomplete() {
                    status = r.status;
                }
                break;
            }
        }
        if r.status.is_incomplete() {
            status = r.status;
            break;
        }
    }
    stats.wall_time = start.elapsed();
    Ok(RunResult { solutions: best.into_iter().collect(), stats, status })
}

/// All first condition-satisfying states; keeps those with the greatest
/// clock.
fn find_latest(plan: &Plan, model: &Model, limits: &Limits) -> Result<RunResult, AnalysisError> {
    let mut r = explore(plan, model, limits)?;
    if let Some(max) = r.solutions.iter().map(Solution::clock).max() {
        r.solutions.retain(|s| s.clock() == max);
    }
    Ok(r)
}

struct Explorer<'a> {
    plan: &'a Plan,
    model: &'a Model,
    limits: Limits,
    start: Instant,
    stats: RunStats,
    solutions: Vec<Solution>,
    solution_keys: HashSet<ClockedState>,
    /// Set when the solution limit, state budget or timeout stops the run.
    status: Option<Status>,
    /// Some state was left unexpanded because of the round limit.
    truncated: bool,
}

/// What processing one state produced.
enum Outcome {
    /// Expand to these successors.
    Expand(ResultSet),
    /// Leaf; record as a solution when the flag says so.
    Leaf {
        solution: bool,
        stuck: bool,
    },
    /// Neither expanded nor recorded.
    Skip,
    Exhausted,
}

impl<'a> Explorer<'a> {
    fn new(plan: &'a Plan, model: &'a Model, limits: &Limits) -> Explorer<'a> {
        Explorer {
            plan,
            model,
            limits: *limits,
            start: Instant::now(),
            stats: RunStats::default(),
            solutions: Vec::new(),
            solution_keys: HashSet::new(),
            status: None,
            truncated: false,
        }
    }

    fn evaluator(&self) -> Evaluator<'a> {
        Evaluator::new(self.model).with_budget(self.limits.max_states)
    }

    /// Whether a state at `level` may be expanded further.
    fn may_expand(&mut self, level: u64) -> bool {
        if self.plan.depth.is_some_and(|d| level >= d) {
            return false;
        }
        if self.limits.max_rounds.is_some_and(|r| level >= r) {
            self.truncated = true;
            return false;
        }
        true
    }

    fn round(&self, ev: &mut Evaluator<'_>, s: &StratState) -> Result<ResultSet, Exhausted> {
        ev.eval_round(&self.plan.round, &self.plan.sampling, s)
    }

    /// Condition check and successor computation for one state. Pure apart
    /// from the evaluator's counters, so it can run on worker threads.
    fn outcome(&self, ev: &mut Evaluator<'_>, s: &StratState, expand: bool) -> (Option<bool>, Outcome) {
        match &self.plan.goal {
            Goal::Reach(c) => {
                let hit = eval_cond(c, s);
                let out = if !expand {
                    Outcome::Skip
                } else {
                    match self.round(ev, s) {
                        Ok(r) => Outcome::Expand(r),
                        Err(_) => Outcome::Exhausted,
                    }
                };
                (Some(hit), out)
            }
            Goal::Until { cond, check } => {
                if eval_cond(cond, s) {
                    return (None, Outcome::Leaf { solution: true, stuck: false });
                }
                if !expand {
                    return (None, Outcome::Skip);
                }
                match self.round(ev, s) {
                    Ok(r) if r.is_empty() => (None, Outcome::Leaf { solution: !check, stuck: true }),
                    Ok(r) => (None, Outcome::Expand(r)),
                    Err(_) => (None, Outcome::Exhausted),
                }
            }
            Goal::Exactly(_) => unreachable!("handled by exact_levels"),
        }
    }

    fn add_solution(&mut self, s: &StratState, rounds: u64, stuck: bool) {
        if self.solution_keys.insert(s.clocked.clone()) {
            self.solutions.push(Solution { state: s.clocked.clone(), history: s.history.clone(), rounds, stuck });
            if self.plan.n.is_some_and(|n| self.solutions.len() as u64 >= n) {
                self.status = Some(Status::SolutionLimit);
            }
        }
    }

    fn over_budget(&mut self, visited: usize) -> bool {
        if self.limits.max_states.is_some_and(|m| visited as u64 > m) {
            self.status = Some(Status::BudgetExhausted);
            return true;
        }
        if let Some(t) = self.limits.timeout {
            if self.start.elapsed() > t {
                self.status = Some(Status::TimedOut);
                return true;
            }
        }
        false
    }

    /// Applies an outcome; returns the successors to schedule.
    fn apply(&mut self, s: &StratState, level: u64, hit: Option<bool>, out: Outcome) -> Option<ResultSet> {
        self.stats.states_explored += 1;
        if hit == Some(true) {
            self.add_solution(s, level, false);
        }
        match out {
            Outcome::Expand(r) => Some(r),
            Outcome::Leaf { solution, stuck } => {
                if solution {
                    self.add_solution(s, level, stuck);
                }
                None
            }
            Outcome::Skip => None,
            Outcome::Exhausted => {
                self.status = Some(Status::BudgetExhausted);
                None
            }
        }
    }

    fn finish(mut self, counters: Counters) -> RunResult {
        self.stats.rule_apps += counters.rule_apps;
        self.stats.wall_time = self.start.elapsed();
        let status = match self.status {
            Some(s) => s,
            None if self.truncated => Status::BudgetExhausted,
            None => Status::Complete,
        };
        RunResult { solutions: self.solutions, stats: self.stats, status }
    }

    fn stopped(&self) -> bool {
        self.status.is_some()
    }
}

pub fn explore(plan: &Plan, model: &Model, limits: &Limits) -> Result<RunResult, AnalysisError> {
    let threads = limits.parallel.unwrap_or(1);
    if threads > 1 && plan.order == Exploration::BreadthFirst {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| AnalysisError::ThreadPool(e.to_string()))?;
        return Ok(pool.install(|| run(plan, model, limits, true)));
    }
    Ok(run(plan, model, limits, false))
}

fn run(plan: &Plan, model: &Model, limits: &Limits, parallel: bool) -> RunResult {
    let ex = Explorer::new(plan, model, limits);
    match (&plan.goal, plan.order) {
        (Goal::Exactly(d), _) => exact_levels(ex, *d, parallel),
        (_, Exploration::BreadthFirst) => bfs(ex, parallel),
        (_, Exploration::DepthFirst) => dfs(ex),
    }
}

fn chunk_size(parallel: bool) -> usize {
    if parallel {
        rayon::current_num_threads().max(1) * 16
    } else {
        1
    }
}

/// Computes outcomes for a slice of states, on worker threads when asked.
/// Results come back in input order, each with the work it took, so merging
/// is identical either way.
fn outcomes(
    ex: &Explorer<'_>,
    states: &[StratState],
    expand: bool,
    parallel: bool,
) -> Vec<((Option<bool>, Outcome), Counters)> {
    let one = |s: &StratState| {
        let mut ev = ex.evaluator();
        let o = ex.outcome(&mut ev, s, expand);
        (o, ev.counters())
    };
    if parallel {
        states.par_iter().map(one).collect()
    } else {
        states.iter().map(one).collect()
    }
}

fn bfs(mut ex: Explorer<'_>, parallel: bool) -> RunResult {
    let mut counters = Counters::default();
    let init = ex.model.init.clone();
    let mut visited: HashSet<StratState> = HashSet::from([init.clone()]);
    let mut frontier = vec![init];
    let mut level = 0u64;
    let chunk = chunk_size(parallel);
    'levels: while !frontier.is_empty() {
        let expand = ex.may_expand(level);
        let mut next = Vec::new();
        for states in frontier.chunks(chunk) {
            for (s, ((hit, out), c)) in states.iter().zip(outcomes(&ex, states, expand, parallel)) {
                counters += c;
                if let Some(succ) = ex.apply(s, level, hit, out) {
                    for y in succ {
                        if visited.insert(y.clone()) {
                            next.push(y);
                        }
                    }
                }
                if ex.stopped() || ex.over_budget(visited.len()) {
                    break 'levels;
                }
            }
        }
        frontier = next;
        level += 1;
    }
    ex.finish(counters)
}

fn dfs(mut ex: Explorer<'_>) -> RunResult {
    let mut ev = ex.evaluator();
    let bounded = ex.plan.depth.is_some();
    // Shallowest level at which each state was expanded. With a depth bound a
    // state reached again at a smaller level is expanded again, since it may
    // now reach further.
    let mut best: HashMap<StratState, u64> = HashMap::new();
    let mut stack = vec![(ex.model.init.clone(), 0u64)];
    while let Some((s, level)) = stack.pop() {
        if best.get(&s).is_some_and(|&d| !bounded || d <= level) {
            continue;
        }
        best.insert(s.clone(), level);
        if ex.over_budget(best.len()) {
            break;
        }
        let expand = ex.may_expand(level);
        let (hit, out) = ex.outcome(&mut ev, &s, expand);
        if let Some(succ) = ex.apply(&s, level, hit, out) {
            for y in succ.into_vec().into_iter().rev() {
                if best.get(&y).is_none_or(|&d| bounded && d > level + 1) {
                    stack.push((y, level + 1));
                }
            }
        }
        if ex.stopped() {
            break;
        }
    }
    let counters = ev.counters();
    ex.finish(counters)
}

/// States reached after exactly `d` rounds; each level is deduplicated on
/// its own.
fn exact_levels(mut ex: Explorer<'_>, d: u64, parallel: bool) -> RunResult {
    let mut counters = Counters::default();
    let mut frontier = vec![ex.model.init.clone()];
    let chunk = chunk_size(parallel);
    for level in 0..d {
        if frontier.is_empty() || !ex.may_expand(level) {
            frontier.clear();
            break;
        }
        let mut next = ResultSet::new();
        for states in frontier.chunks(chunk) {
            let one = |s: &StratState| {
                let mut ev = ex.evaluator();
                let r = ev.eval_round(&ex.plan.round, &ex.plan.sampling, s);
                (r, ev.counters())
            };
            let results: Vec<_> =
                if parallel { states.par_iter().map(one).collect() } else { states.iter().map(one).collect() };
            for (r, c) in results {
                counters += c;
                ex.stats.states_explored += 1;
                match r {
                    Ok(r) => next.extend(r),
                    Err(_) => ex.status = Some(Status::BudgetExhausted),
                }
                if ex.stopped() || ex.over_budget(next.len()) {
                    return ex.finish(counters);
                }
            }
        }
        frontier = next.into_vec();
    }
    for s in &frontier {
        ex.stats.states_explored += 1;
        ex.add_solution(s, d, false);
        if ex.stopped() {
            break;
        }
    }
    ex.finish(counters)
}

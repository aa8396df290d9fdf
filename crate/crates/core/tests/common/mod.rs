//! Shared helpers for integration tests, including a hand-written
//! simulator of the RTT protocol that does not go through the rewriting
//! engine at all.

#![allow(dead_code)]

pub mod criteria;
pub mod gen;
pub mod props;

use std::collections::{BTreeSet, HashSet, VecDeque};

use tstrat::analysis::{run_command, Limits, RunResult};
use tstrat::builtin::{builtin_model, RTT, RTT_IDLE};
use tstrat::config::{ClockedState, Entity, Msg, Value};
use tstrat::lang::parse_command;
use tstrat::model::{load_model, Model};
use tstrat::time::TimeInf;

pub fn model(name: &str) -> Model {
    builtin_model(name).unwrap()
}

/// The RTT model with a shorter period.
pub fn rtt_with_period(period: u64) -> Model {
    let src = RTT.replace("period : 5000", &format!("period : {period}"));
    assert_ne!(src, RTT);
    load_model(&src).unwrap()
}

pub fn rtt_idle_with_period(period: u64) -> Model {
    let src = RTT_IDLE.replace("period : 5000", &format!("period : {period}"));
    load_model(&src).unwrap()
}

pub fn run(m: &Model, command: &str) -> RunResult {
    run_with(m, command, &Limits::default())
}

pub fn run_with(m: &Model, command: &str, limits: &Limits) -> RunResult {
    let cmd = parse_command(command).unwrap_or_else(|e| panic!("{command}: {e}"));
    run_command(&cmd, m, limits).unwrap()
}

pub fn clocks(r: &RunResult) -> Vec<u64> {
    r.solutions.iter().map(|s| s.clock()).collect()
}

pub const RECORDED: &str = "(matches {< snd : Sender | rtt : X, ATTS > CONF} s.t. X =/= 0 and X =/= INF)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Req,
    Resp,
}

/// A message with its timestamp; `window` is `Some((lower, upper))` while
/// it is still delayed, `upper == None` meaning unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OMsg {
    pub kind: Kind,
    pub stamp: u64,
    pub window: Option<(u64, Option<u64>)>,
}

/// One RTT (or RTT-with-idling) state, as plain data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OState {
    pub clock: u64,
    pub sender_clock: u64,
    pub timer: u64,
    /// `None` is INF.
    pub rtt: Option<u64>,
    pub msgs: Vec<OMsg>,
}

#[derive(Debug, Clone, Copy)]
pub struct RttParams {
    pub period: u64,
    pub send_dly: (u64, u64),
    pub resp_dly: (u64, u64),
    /// Whether the sender may skip a round.
    pub idle: bool,
}

impl RttParams {
    pub fn new(period: u64) -> RttParams {
        RttParams { period, send_dly: (5, 20), resp_dly: (7, 30), idle: false }
    }
}

/// Which instantaneous step produced a successor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Deliver,
    Send,
    Respond,
    Record,
    Skip,
}

impl OState {
    pub fn init() -> OState {
        OState { clock: 0, sender_clock: 0, timer: 0, rtt: None, msgs: Vec::new() }
    }

    fn with_msgs(&self, msgs: Vec<OMsg>) -> OState {
        let mut msgs = msgs;
        msgs.sort();
        OState { msgs, ..self.clone() }
    }

    /// `None` is unbounded.
    pub fn mte(&self) -> Option<u64> {
        let mut m = Some(self.timer);
        for msg in &self.msgs {
            let bound = match msg.window {
                None => Some(0),
                Some((_, upper)) => upper,
            };
            m = match (m, bound) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, None) => a,
                (None, b) => b,
            };
        }
        m
    }

    pub fn tick(&self, d: u64) -> Option<OState> {
        if d == 0 || self.mte().is_some_and(|m| d > m) {
            return None;
        }
        let msgs = self
            .msgs
            .iter()
            .map(|m| OMsg {
                window: m.window.map(|(l, u)| (l.saturating_sub(d), u.map(|u| u.saturating_sub(d)))),
                ..*m
            })
            .collect();
        Some(OState {
            clock: self.clock + d,
            sender_clock: self.sender_clock + d,
            timer: self.timer.saturating_sub(d),
            ..self.with_msgs(msgs)
        })
    }

    pub fn steps(&self, p: &RttParams) -> Vec<(Step, OState)> {
        let mut out = Vec::new();
        for (i, m) in self.msgs.iter().enumerate() {
            let mut rest = self.msgs.clone();
            rest.remove(i);
            match m.window {
                Some((0, _)) => {
                    rest.push(OMsg { window: None, ..*m });
                    out.push((Step::Deliver, self.with_msgs(rest)));
                }
                Some(_) => {}
                None => match m.kind {
                    Kind::Req => {
                        rest.push(OMsg {
                            kind: Kind::Resp,
                            stamp: m.stamp,
                            window: Some((p.resp_dly.0, Some(p.resp_dly.1))),
                        });
                        out.push((Step::Respond, self.with_msgs(rest)));
                    }
                    Kind::Resp => {
                        let rtt = Some(self.sender_clock.saturating_sub(m.stamp));
                        out.push((Step::Record, OState { rtt, ..self.with_msgs(rest) }));
                    }
                },
            }
        }
        if self.timer == 0 {
            let mut msgs = self.msgs.clone();
            msgs.push(OMsg {
                kind: Kind::Req,
                stamp: self.sender_clock,
                window: Some((p.send_dly.0, Some(p.send_dly.1))),
            });
            out.push((Step::Send, OState { timer: p.period, ..self.with_msgs(msgs) }));
            if p.idle {
                out.push((Step::Skip, OState { timer: p.period, ..self.clone() }));
            }
        }
        let mut seen = HashSet::new();
        out.retain(|(_, s)| seen.insert(s.clone()));
        out
    }

    /// Reads an engine state of the RTT models.
    pub fn from_engine(c: &ClockedState) -> OState {
        let num = |v: &Value| match v {
            Value::Num(TimeInf::Finite(n)) => Some(*n),
            Value::Num(TimeInf::Inf) => None,
            other => panic!("expected a number, got {other}"),
        };
        let snd = c.config.object("snd").expect("sender present");
        let mut msgs = Vec::new();
        for e in c.config.entities() {
            let (m, window): (&Msg, _) = match e {
                Entity::Object(_) => continue,
                Entity::Msg(m) => (m, None),
                Entity::Dly(d) => (&d.msg, Some((d.lower, d.upper.finite()))),
            };
            let kind = match &*m.name {
                "rttReq" => Kind::Req,
                "rttResp" => Kind::Resp,
                other => panic!("unexpected message {other}"),
            };
            msgs.push(OMsg { kind, stamp: num(&m.args[0]).unwrap(), window });
        }
        msgs.sort();
        OState {
            clock: c.clock,
            sender_clock: num(snd.attr("clock").unwrap()).unwrap(),
            timer: num(snd.attr("timer").unwrap()).unwrap(),
            rtt: num(snd.attr("rtt").unwrap()),
            msgs,
        }
    }
}

/// Every state reachable by single instantaneous steps and unit ticks from
/// states whose clock is at most `bound`, restricted to clock `<= bound`.
pub fn oracle_reachable_unit_ticks(p: &RttParams, bound: u64) -> BTreeSet<OState> {
    let mut seen: HashSet<OState> = HashSet::from([OState::init()]);
    let mut queue = VecDeque::from([OState::init()]);
    while let Some(s) = queue.pop_front() {
        if s.clock > bound {
            continue;
        }
        let next = s.steps(p).into_iter().map(|(_, x)| x).chain(s.tick(1));
        for x in next {
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    seen.into_iter().filter(|s| s.clock <= bound).collect()
}

/// Tick by the maximal time elapse, or by `default` when it is unbounded.
pub fn max_time_tick(s: &OState, default: u64) -> Option<OState> {
    match s.mte() {
        Some(0) => None,
        Some(m) => s.tick(m),
        None => s.tick(default),
    }
}

/// Distinct clocked states with clock in `[0, bound]` under max-time
/// sampling, for `action or delay` (`history == false`) or for the strategy
/// that skips at most two rounds in a row, tracked by a counter.
pub fn oracle_idle_count(p: &RttParams, default: u64, bound: u64, history: bool) -> usize {
    let mut seen: HashSet<(OState, u64)> = HashSet::from([(OState::init(), 0)]);
    let mut queue = VecDeque::from([(OState::init(), 0u64)]);
    while let Some((s, counter)) = queue.pop_front() {
        if s.clock > bound {
            continue;
        }
        let mut next: Vec<(OState, u64)> = max_time_tick(&s, default).map(|x| (x, counter)).into_iter().collect();
        let steps = s.steps(p);
        if history && s.timer == 0 {
            let (wanted, counter) = if counter <= 1 { (Step::Skip, counter + 1) } else { (Step::Send, 0) };
            next.extend(steps.into_iter().filter(|(k, _)| *k == wanted).map(|(_, x)| (x, counter)));
        } else {
            next.extend(steps.into_iter().map(|(_, x)| (x, counter)));
        }
        for x in next {
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    let states: HashSet<&OState> = seen.iter().map(|(s, _)| s).filter(|s| s.clock <= bound).collect();
    states.len()
}

pub const IDLE_HISTORY_STRATEGY: &str = "delay or \
    if matches {< S : Sender | timer : 0, ATTS > CONF} in time T \
    then if (matches ('C |-> N) s.t. N <= 1) \
         then apply skipRound ; (get ('C |-> N) and set ('C |-> N + 1)) \
         else apply send ; (get ('C |-> N) and set ('C |-> 0)) \
    else action";

/// Proptest settings without the regression file, which integration test
/// crates have no source root for.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases: n, failure_persistence: None, ..Default::default() }
}

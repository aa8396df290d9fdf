//! Proptest generators: time values, RTT configurations, reachable states,
//! strategy and command syntax trees.

use proptest::prelude::*;
use proptest::strategy::BoxedStrategy;

use tstrat::config::{sym, Configuration, DlyMsg, Entity, Msg, Object, StratState, Value};
use tstrat::lang::{parse_condition, parse_dstrat, Command, CommandKind, DStrat, Exploration, SCond, TStrat};
use tstrat::model::Model;
use tstrat::time::{Interval, TimeInf};

pub fn time_inf() -> impl Strategy<Value = TimeInf> {
    prop_oneof![
        4 => (0u64..1_000_000).prop_map(TimeInf::Finite),
        1 => Just(TimeInf::Inf),
    ]
}

fn stamp_msg(name: &str, stamp: u64, flip: bool) -> Msg {
    let (a, b) = if flip { ("rcv", "snd") } else { ("snd", "rcv") };
    Msg::new(name, vec![Value::num(stamp), Value::id(a), Value::id(b)])
}

fn message() -> impl Strategy<Value = Entity> {
    let upper = prop_oneof![4 => (0u64..500).prop_map(TimeInf::Finite), 1 => Just(TimeInf::Inf)];
    prop_oneof![
        1 => (0u64..1000, any::<bool>()).prop_map(|(t, f)| Entity::Msg(stamp_msg(if f { "rttResp" } else { "rttReq" }, t, f))),
        4 => (0u64..1000, any::<bool>(), 0u64..500, upper).prop_map(|(t, f, lower, upper)| {
            let lower = match upper {
                TimeInf::Finite(u) => lower.min(u),
                TimeInf::Inf => lower,
            };
            Entity::Dly(DlyMsg { msg: stamp_msg(if f { "rttResp" } else { "rttReq" }, t, f), lower, upper })
        }),
    ]
}

/// Configurations over the RTT classes: a sender with arbitrary clock,
/// timer and rtt, an optional receiver, and a few messages.
pub fn rtt_config() -> impl Strategy<Value = Configuration> {
    let rtt = prop_oneof![(0u64..100).prop_map(Value::num), Just(Value::Num(TimeInf::Inf))];
    (0u64..100_000, 0u64..10_000, rtt, any::<bool>(), prop::collection::vec(message(), 0..4)).prop_map(
        |(clock, timer, rtt, with_rcv, msgs)| {
            let snd = Object::new(
                "snd",
                "Sender",
                [
                    ("clock", Value::num(clock)),
                    ("timer", Value::num(timer)),
                    ("period", Value::num(5000)),
                    ("lowerDly", Value::num(5)),
                    ("upperDly", Value::num(20)),
                    ("rtt", rtt),
                    ("receiver", Value::id("rcv")),
                ],
            );
            let mut es = vec![Entity::Object(snd)];
            if with_rcv {
                es.push(Entity::Object(Object::new(
                    "rcv",
                    "Receiver",
                    [("lowerDly", Value::num(7)), ("upperDly", Value::num(30))],
                )));
            }
            es.extend(msgs);
            Configuration::new(es).unwrap()
        },
    )
}

/// Follows `choices` through instantaneous steps and ticks of 1, of the
/// maximal time elapse, or of 3.
pub fn walk(m: &Model, choices: &[u16]) -> StratState {
    let mut s = m.init.clone();
    for &c in choices {
        let mut next: Vec<StratState> = m.inst_successors(&s, None).into_iter().map(|(_, x)| x).collect();
        let mte = m.mte(s.config());
        let mut ds = vec![1, 3];
        if let TimeInf::Finite(e) = mte {
            ds.push(e);
        }
        for d in ds {
            if d > 0 {
                if let Ok(Some(x)) = m.tick(&s, d) {
                    next.push(x);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        s = next.swap_remove(c as usize % next.len());
    }
    s
}

pub fn reachable_state(m: Model, max_steps: usize) -> impl Strategy<Value = StratState> {
    prop::collection::vec(any::<u16>(), 0..max_steps).prop_map(move |cs| walk(&m, &cs))
}

const PATTERNS: &[&str] = &[
    "matches {C}",
    "matches {CONF dly(M, T1, T2)} in time R",
    "matches {< S : Sender | rtt : 20, ATTS > CONF} in time R",
    "matches {< snd : Sender | timer : 0, ATTS >}",
    "(matches {< snd : Sender | rtt : X, ATTS > CONF} s.t. X =/= 0 and X =/= INF)",
    "matches {CONF rttReq(T, S, R)}",
    "matches {CONF dly(rttResp(T, R, S), 0, U)} in time 12",
    "(matches ('C |-> N) s.t. N <= 1)",
    "matches {CONF} in time T | 'C |-> 2",
    "(matches {CONF < S : Sender | clock : K >} in time T s.t. K == T)",
    "matches {_}",
    "(matches {CONF dly(M, L, U)} s.t. if U == INF then true else L < U fi)",
];

const GET_SETS: &[&str] = &[
    "get ('C |-> N) and set ('C |-> N + 1)",
    "get ('C |-> N) and set ('C |-> 0)",
    "get ('C |-> N, 'D |-> B) and set ('D |-> min(N, 3))",
    "get ('k |-> X) and set ('k |-> X, 'seen |-> true)",
];

const LABELS: &[&str] = &["send", "respond", "recordRTT", "deliver", "skipRound"];

pub fn time() -> impl Strategy<Value = u64> {
    prop_oneof![0u64..20, 0u64..100_000]
}

pub fn interval() -> impl Strategy<Value = Interval> {
    (time(), prop::option::of(0u64..50_000)).prop_map(|(a, w)| match w {
        Some(w) => Interval::new(a, TimeInf::Finite(a + w)).unwrap(),
        None => Interval::new(a, TimeInf::Inf).unwrap(),
    })
}

pub fn cond() -> BoxedStrategy<SCond> {
    let patterns: Vec<SCond> = PATTERNS.iter().map(|p| parse_condition(p).unwrap()).collect();
    let leaf = prop_oneof![
        3 => prop::sample::select(patterns),
        1 => interval().prop_map(SCond::In),
        1 => time().prop_map(SCond::After),
        1 => time().prop_map(SCond::Before),
        1 => time().prop_map(SCond::AfterEq),
        1 => time().prop_map(SCond::BeforeEq),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SCond::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SCond::or(a, b)),
            inner.prop_map(SCond::negate),
        ]
    })
    .boxed()
}

fn labels() -> impl Strategy<Value = Vec<tstrat::config::Sym>> {
    prop::collection::vec(prop::sample::select(LABELS).prop_map(sym), 0..4)
}

pub fn dstrat() -> BoxedStrategy<DStrat> {
    let get_sets: Vec<DStrat> = GET_SETS.iter().map(|g| parse_dstrat(g).unwrap()).collect();
    let leaf = prop_oneof![
        prop::sample::select(LABELS).prop_map(|l| DStrat::Apply(sym(l))),
        labels().prop_map(DStrat::ApplyFirst),
        Just(DStrat::Eager),
        labels().prop_map(DStrat::EagerOf),
        Just(DStrat::Action),
        Just(DStrat::Delay),
        Just(DStrat::Stop),
        Just(DStrat::Skip),
        prop::sample::select(get_sets),
        cond().prop_map(DStrat::Check),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DStrat::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DStrat::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DStrat::or_else(a, b)),
            (cond(), inner.clone(), inner.clone()).prop_map(|(c, a, b)| DStrat::if_then_else(c, a, b)),
            (cond(), inner.clone()).prop_map(|(c, a)| DStrat::until_do(c, a)),
            inner.clone().prop_map(DStrat::repeat),
            (0u64..6, inner).prop_map(|(n, a)| DStrat::steps(n, a)),
        ]
    })
    .boxed()
}

pub fn tstrat() -> BoxedStrategy<TStrat> {
    let leaf = prop_oneof![(1u64..100).prop_map(TStrat::FixedTime), (1u64..100).prop_map(TStrat::MaxTime)];
    leaf.prop_recursive(3, 8, 3, |inner| {
        prop_oneof![
            (prop::collection::vec((cond(), inner.clone()), 1..3), inner.clone())
                .prop_map(|(cases, o)| TStrat::Switch { cases, otherwise: Box::new(o) }),
            inner.prop_map(TStrat::untime),
        ]
    })
    .boxed()
}

fn kind() -> impl Strategy<Value = CommandKind> {
    let pos = || prop::option::of(1u64..50);
    let order = prop_oneof![Just(Exploration::BreadthFirst), Just(Exploration::DepthFirst)];
    prop_oneof![
        (pos(), time()).prop_map(|(n, until)| CommandKind::Tsim { n, until }),
        (0u64..20, pos()).prop_map(|(steps, n)| CommandKind::Trew { steps, n }),
        (any::<bool>(), order, pos(), prop::option::of(0u64..20), cond(), prop::option::of(interval())).prop_map(
            |(untimed, order, n, depth, cond, interval)| CommandKind::Search {
                untimed,
                order,
                // A depth bound is written `[n, d]`, so it needs a count.
                n: if depth.is_some() { Some(n.unwrap_or(1)) } else { n },
                depth,
                cond,
                interval: if untimed { None } else { interval },
            }
        ),
        cond().prop_map(|cond| CommandKind::FindEarliest { cond }),
        cond().prop_map(|cond| CommandKind::FindLatest { cond }),
    ]
}

pub fn command() -> impl Strategy<Value = Command> {
    let model = prop::sample::select(&["rtt", "rtt-idle", "cash-lite", "RTT"][..]).prop_map(String::from);
    (kind(), model, dstrat(), tstrat()).prop_map(|(kind, model, strategy, sampling)| Command {
        kind,
        model,
        strategy,
        sampling,
    })
}

/// Strategies that terminate on any RTT state: no unbounded iteration.
pub fn finite_dstrat() -> BoxedStrategy<DStrat> {
    let leaf = prop_oneof![
        prop::sample::select(&["send", "respond", "recordRTT", "deliver"][..]).prop_map(|l| DStrat::Apply(sym(l))),
        Just(DStrat::ApplyFirst(vec![sym("recordRTT"), sym("deliver")])),
        Just(DStrat::Eager),
        Just(DStrat::Action),
        Just(DStrat::Delay),
        Just(DStrat::Stop),
        Just(DStrat::Skip),
        (0u64..60).prop_map(|t| DStrat::Check(SCond::After(t))),
        Just(DStrat::Check(parse_condition("matches {CONF dly(M, T1, T2)}").unwrap())),
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DStrat::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DStrat::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DStrat::or_else(a, b)),
            ((0u64..60), inner.clone(), inner.clone()).prop_map(|(t, a, b)| DStrat::if_then_else(
                SCond::Before(t),
                a,
                b
            )),
            (0u64..3, inner).prop_map(|(n, a)| DStrat::steps(n, a)),
        ]
    })
    .boxed()
}

pub fn sampling() -> impl Strategy<Value = TStrat> {
    prop_oneof![
        (1u64..5).prop_map(TStrat::FixedTime),
        (1u64..5).prop_map(TStrat::MaxTime),
        (1u64..5, 1u64..5).prop_map(|(a, b)| TStrat::Switch {
            cases: vec![(parse_condition("matches {CONF dly(M, T1, T2)}").unwrap(), TStrat::FixedTime(a))],
            otherwise: Box::new(TStrat::MaxTime(b)),
        }),
    ]
}

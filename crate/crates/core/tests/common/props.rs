//! Property bodies shared by the property suites and the acceptance run.

use std::collections::HashSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use tstrat::config::{Configuration, StratState};
use tstrat::lang::{parse_command, parse_condition, parse_dstrat, parse_tstrat, Command, DStrat, SCond, TStrat};
use tstrat::model::Model;
use tstrat::semantics::{delay_step, eval_round};
use tstrat::time::{Time, TimeInf};

pub type Check = Result<(), TestCaseError>;

pub fn monus_composition(x: TimeInf, a: Time, b: Time) -> Check {
    prop_assert_eq!(x.monus(a).monus(b), x.monus(a + b));
    Ok(())
}

/// Picks a duration in `[0, bound]` from a fraction in thousandths.
pub fn scaled(bound: TimeInf, permille: u64, fallback: Time) -> Time {
    match bound {
        TimeInf::Finite(e) => e * permille / 1000,
        TimeInf::Inf => fallback,
    }
}

pub fn mte_shift(m: &Model, c: &Configuration, permille: u64) -> Check {
    let e = m.mte(c);
    let d = scaled(e, permille, permille);
    prop_assert_eq!(m.mte(&m.time_effect(c, d)), e.monus(d));
    Ok(())
}

pub fn time_effect_composition(m: &Model, c: &Configuration, p1: u64, p2: u64) -> Check {
    let total = scaled(m.mte(c), p1, p1);
    let d1 = total * p2 / 1000;
    let d2 = total - d1;
    prop_assert_eq!(m.time_effect(&m.time_effect(c, d1), d2), m.time_effect(c, d1 + d2));
    Ok(())
}

fn object_ids(c: &Configuration) -> Vec<String> {
    c.objects().map(|o| o.oid.to_string()).collect()
}

/// A tick either is refused (exactly when `d` exceeds the maximal time
/// elapse) or advances the clock by `d` and keeps every entity.
pub fn tick_monotone(m: &Model, s: &StratState, d: Time) -> Check {
    let allowed = TimeInf::Finite(d) <= m.mte(s.config());
    match m.tick(s, d).unwrap() {
        None => prop_assert!(!allowed),
        Some(t) => {
            prop_assert!(allowed);
            prop_assert_eq!(t.clock(), s.clock() + d);
            prop_assert!(t.clock() > s.clock());
            prop_assert_eq!(t.config().len(), s.config().len());
            prop_assert_eq!(object_ids(t.config()), object_ids(s.config()));
            prop_assert_eq!(&t.history, &s.history);
        }
    }
    Ok(())
}

fn results(m: &Model, mu: &DStrat, tau: &TStrat, s: &StratState) -> HashSet<StratState> {
    eval_round(mu, tau, s, m).to_set()
}

pub fn or_commutative(m: &Model, s: &StratState, tau: &TStrat, a: &DStrat, b: &DStrat) -> Check {
    let ab = results(m, &DStrat::or(a.clone(), b.clone()), tau, s);
    let ba = results(m, &DStrat::or(b.clone(), a.clone()), tau, s);
    prop_assert_eq!(ab, ba);
    Ok(())
}

pub fn or_associative(m: &Model, s: &StratState, tau: &TStrat, a: &DStrat, b: &DStrat, c: &DStrat) -> Check {
    let left = DStrat::or(DStrat::or(a.clone(), b.clone()), c.clone());
    let right = DStrat::or(a.clone(), DStrat::or(b.clone(), c.clone()));
    prop_assert_eq!(results(m, &left, tau, s), results(m, &right, tau, s));
    Ok(())
}

/// `stop` is the unit of `or`, `skip` the unit of `;`.
pub fn identities(m: &Model, s: &StratState, tau: &TStrat, a: &DStrat) -> Check {
    let plain = eval_round(a, tau, s, m);
    for variant in [
        DStrat::or(a.clone(), DStrat::Stop),
        DStrat::or(DStrat::Stop, a.clone()),
        DStrat::seq(DStrat::Skip, a.clone()),
        DStrat::seq(a.clone(), DStrat::Skip),
    ] {
        prop_assert_eq!(eval_round(&variant, tau, s, m).to_set(), plain.to_set(), "{}", variant);
    }
    prop_assert!(eval_round(&DStrat::seq(DStrat::Stop, a.clone()), tau, s, m).is_empty());
    Ok(())
}

pub fn seq_distributes(m: &Model, s: &StratState, tau: &TStrat, a: &DStrat, b: &DStrat, c: &DStrat) -> Check {
    let left = DStrat::seq(DStrat::or(a.clone(), b.clone()), c.clone());
    let right = DStrat::or(DStrat::seq(a.clone(), c.clone()), DStrat::seq(b.clone(), c.clone()));
    prop_assert_eq!(results(m, &left, tau, s), results(m, &right, tau, s));
    Ok(())
}

/// Normal forms by plain closure over instantaneous successors.
pub fn normal_forms(m: &Model, s: &StratState) -> HashSet<StratState> {
    let mut seen: HashSet<StratState> = HashSet::from([s.clone()]);
    let mut stack = vec![s.clone()];
    let mut out = HashSet::new();
    while let Some(x) = stack.pop() {
        let next = m.inst_successors(&x, None);
        if next.is_empty() {
            out.insert(x);
        }
        for (_, y) in next {
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    out
}

/// `eager` yields each normal form, ticked once when the sampling strategy
/// allows it, and nothing else.
pub fn eager_normal_forms(m: &Model, s: &StratState, tau: &TStrat) -> Check {
    let mut expected = HashSet::new();
    for n in normal_forms(m, s) {
        prop_assert!(m.inst_successors(&n, None).is_empty());
        let ticked = delay_step(tau, &n, m);
        if ticked.is_empty() {
            expected.insert(n);
        } else {
            expected.extend(ticked.into_vec());
        }
    }
    let got = eval_round(&DStrat::Eager, tau, s, m);
    prop_assert!(!got.is_empty());
    for r in got.iter() {
        let unticked = r.clock() == s.clock();
        prop_assert!(!unticked || m.inst_successors(r, None).is_empty(), "{} has a successor", r);
    }
    prop_assert_eq!(got.to_set(), expected);
    Ok(())
}

/// Sampling strictly advances the clock and yields at most one state.
pub fn delay_step_shape(m: &Model, s: &StratState, tau: &TStrat) -> Check {
    let r = delay_step(tau, s, m);
    prop_assert!(r.len() <= 1);
    for x in r.iter() {
        prop_assert!(x.clock() > s.clock());
    }
    let untimed = delay_step(&TStrat::untime(tau.clone()), s, m);
    prop_assert_eq!(untimed.len(), r.len());
    for x in untimed.iter() {
        prop_assert_eq!(x.clock(), 0);
    }
    Ok(())
}

pub fn command_round_trip(c: &Command) -> Check {
    let printed = c.to_string();
    let parsed = parse_command(&printed).map_err(|e| TestCaseError::fail(format!("{printed}\n{e}")))?;
    prop_assert_eq!(&parsed, c, "{}", printed);
    Ok(())
}

pub fn dstrat_round_trip(d: &DStrat) -> Check {
    let printed = d.to_string();
    let parsed = parse_dstrat(&printed).map_err(|e| TestCaseError::fail(format!("{printed}\n{e}")))?;
    prop_assert_eq!(&parsed, d, "{}", printed);
    Ok(())
}

pub fn tstrat_round_trip(t: &TStrat) -> Check {
    let printed = t.to_string();
    let parsed = parse_tstrat(&printed).map_err(|e| TestCaseError::fail(format!("{printed}\n{e}")))?;
    prop_assert_eq!(&parsed, t, "{}", printed);
    Ok(())
}

pub fn cond_round_trip(c: &SCond) -> Check {
    let printed = c.to_string();
    let parsed = parse_condition(&printed).map_err(|e| TestCaseError::fail(format!("{printed}\n{e}")))?;
    prop_assert_eq!(&parsed, c, "{}", printed);
    Ok(())
}

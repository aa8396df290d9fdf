//! Native evaluation of timed strategies.
//!
//! A discrete strategy applied to a state yields a [`ResultSet`]: the
//! duplicate-free, ordered collection of states it can end in. Closures
//! (`repeat`, `until .. do`, the normalization inside `eager`) are computed
//! with a visited set and stop on cycles.

use std::collections::{HashSet, VecDeque};

use crate::config::StratState;
use crate::lang::{DStrat, SCond, TStrat};
use crate::model::Model;
use crate::time::TimeInf;

/// Ordered set of states; insertion order is kept, duplicates are dropped.
#[derive(Debug, Clone, Default)]
pub struct ResultSet {
    items: Vec<StratState>,
    seen: HashSet<StratState>,
}

impl ResultSet {
    pub fn new() -> ResultSet {
        ResultSet::default()
    }

    pub fn singleton(s: StratState) -> ResultSet {
        let mut r = ResultSet::new();
        r.insert(s);
        r
    }

    /// Returns whether `s` was new.
    pub fn insert(&mut self, s: StratState) -> bool {
        if self.seen.contains(&s) {
            return false;
        }
        self.seen.insert(s.clone());
        self.items.push(s);
        true
    }

    pub fn extend(&mut self, other: ResultSet) {
        for s in other.items {
            self.insert(s);
        }
    }

    pub fn contains(&self, s: &StratState) -> bool {
        self.seen.contains(s)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, StratState> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[StratState] {
        &self.items
    }

    pub fn into_vec(self) -> Vec<StratState> {
        self.items
    }

    /// Order-insensitive view, for comparing results as sets.
    pub fn to_set(&self) -> HashSet<StratState> {
        self.seen.clone()
    }
}

impl FromIterator<StratState> for ResultSet {
    fn from_iter<I: IntoIterator<Item = StratState>>(iter: I) -> Self {
        let mut r = ResultSet::new();
        for s in iter {
            r.insert(s);
        }
        r
    }
}

impl IntoIterator for ResultSet {
    type Item = StratState;
    type IntoIter = std::vec::IntoIter<StratState>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

impl<'a> IntoIterator for &'a ResultSet {
    type Item = &'a StratState;
    type IntoIter = std::slice::Iter<'a, StratState>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// A closure inside a strategy visited more states than allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("strategy evaluation exceeded the budget of {0} states")]
pub struct Exhausted(pub u64);

/// Work done by an [`Evaluator`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// Successful instantaneous rule applications and ticks.
    pub rule_apps: u64,
    /// States visited inside strategy closures.
    pub closure_states: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.rule_apps += o.rule_apps;
        self.closure_states += o.closure_states;
    }
}

pub fn eval_cond(c: &SCond, s: &StratState) -> bool {
    let t = s.clock();
    match c {
        SCond::Matches(p) => p.matches(s),
        SCond::In(iv) => iv.contains(t),
        SCond::After(u) => t > *u,
        SCond::Before(u) => t < *u,
        SCond::AfterEq(u) => t >= *u,
        SCond::BeforeEq(u) => t <= *u,
        SCond::And(a, b) => eval_cond(a, s) && eval_cond(b, s),
        SCond::Or(a, b) => eval_cond(a, s) || eval_cond(b, s),
        SCond::Not(a) => !eval_cond(a, s),
    }
}

/// One delay step with sampling strategy `tau` and no budget.
pub fn delay_step(tau: &TStrat, s: &StratState, m: &Model) -> ResultSet {
    Evaluator::new(m).delay_step(tau, s)
}

/// One round of `< mu , tau >` from `s` with no budget.
pub fn eval_round(mu: &DStrat, tau: &TStrat, s: &StratState, m: &Model) -> ResultSet {
    Evaluator::new(m).eval_round(mu, tau, s).expect("unbounded evaluation cannot exhaust")
}

enum Collect {
    /// Every reachable state.
    All,
    /// Only states where the step fails.
    NormalForms,
}

pub struct Evaluator<'m> {
    model: &'m Model,
    budget: Option<u64>,
    counters: Counters,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Evaluator<'m> {
        Evaluator { model, budget: None, counters: Counters::default() }
    }

    /// Caps the number of states any single closure may visit.
    pub fn with_budget(mut self, budget: Option<u64>) -> Evaluator<'m> {
        self.budget = budget;
        self
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn take_counters(&mut self) -> Counters {
        std::mem::take(&mut self.counters)
    }

    fn tick(&mut self, s: &StratState, d: u64) -> ResultSet {
        match self.model.tick(s, d) {
            Ok(Some(next)) => {
                self.counters.rule_apps += 1;
                ResultSet::singleton(next)
            }
            _ => ResultSet::new(),
        }
    }

    pub fn delay_step(&mut self, tau: &TStrat, s: &StratState) -> ResultSet {
        match tau {
            TStrat::FixedTime(t) => self.tick(s, *t),
            TStrat::MaxTime(default) => match self.model.mte(s.config()) {
                TimeInf::Finite(0) => ResultSet::new(),
                TimeInf::Finite(e) => self.tick(s, e),
                TimeInf::Inf => self.tick(s, *default),
            },
            TStrat::Switch { cases, otherwise } => {
                let chosen = cases.iter().find(|(c, _)| eval_cond(c, s)).map_or(&**otherwise, |(_, t)| t);
                self.delay_step(chosen, s)
            }
            TStrat::Untime(inner) => self
                .delay_step(inner, s)
                .into_iter()
                .map(|mut x| {
                    x.clocked.clock = 0;
                    x
                })
                .collect(),
        }
    }

    fn successors(&mut self, s: &StratState, labels: Option<&[crate::config::Sym]>) -> ResultSet {
        let succ = self.model.inst_successors(s, labels);
        self.counters.rule_apps += succ.len() as u64;
        succ.into_iter().map(|(_, x)| x).collect()
    }

    fn apply_first(&mut self, labels: &[crate::config::Sym], s: &StratState) -> ResultSet {
        for l in labels {
            let r = self.successors(s, Some(std::slice::from_ref(l)));
            if !r.is_empty() {
                return r;
            }
        }
        ResultSet::new()
    }

    fn try_delay(&mut self, tau: &TStrat, states: ResultSet) -> ResultSet {
        let mut out = ResultSet::new();
        for x in states {
            let d = self.delay_step(tau, &x);
            if d.is_empty() {
                out.insert(x);
            } else {
                out.extend(d);
            }
        }
        out
    }

    pub fn eval_round(&mut self, mu: &DStrat, tau: &TStrat, s: &StratState) -> Result<ResultSet, Exhausted> {
        Ok(match mu {
            DStrat::Stop => ResultSet::new(),
            DStrat::Skip => ResultSet::singleton(s.clone()),
            DStrat::Apply(l) => self.successors(s, Some(std::slice::from_ref(l))),
            DStrat::Action => self.successors(s, None),
            DStrat::Delay => self.delay_step(tau, s),
            DStrat::ApplyFirst(ls) => self.apply_first(ls, s),
            DStrat::Eager => {
                let nf = self.closure(s, Collect::NormalForms, |ev, x| Ok(ev.successors(x, None)))?;
                self.try_delay(tau, nf)
            }
            DStrat::EagerOf(ls) => {
                let nf = self.closure(s, Collect::NormalForms, |ev, x| Ok(ev.apply_first(ls, x)))?;
                self.try_delay(tau, nf)
            }
            DStrat::Seq(a, b) => {
                let mut out = ResultSet::new();
                for x in self.eval_round(a, tau, s)? {
                    out.extend(self.eval_round(b, tau, &x)?);
                }
                out
            }
            DStrat::Or(a, b) => {
                let mut out = self.eval_round(a, tau, s)?;
                out.extend(self.eval_round(b, tau, s)?);
                out
            }
            DStrat::OrElse(a, b) => {
                let out = self.eval_round(a, tau, s)?;
                if out.is_empty() {
                    self.eval_round(b, tau, s)?
                } else {
                    out
                }
            }
            DStrat::If(c, a, b) => {
                if eval_cond(c, s) {
                    self.eval_round(a, tau, s)?
                } else {
                    self.eval_round(b, tau, s)?
                }
            }
            DStrat::GetSet { get, set } => {
                let Some(env) = get.match_history(&s.history) else { return Ok(ResultSet::new()) };
                let mut history = s.history.clone();
                for k in get.keys() {
                    history.remove(k);
                }
                for (k, e) in set {
                    match e.eval(&env) {
                        Ok(v) => history.insert(k.clone(), v),
                        Err(_) => return Ok(ResultSet::new()),
                    };
                }
                ResultSet::singleton(StratState { clocked: s.clocked.clone(), history })
            }
            DStrat::Check(c) => {
                if eval_cond(c, s) {
                    ResultSet::singleton(s.clone())
                } else {
                    ResultSet::new()
                }
            }
            DStrat::UntilDo(c, body) => self.closure(s, Collect::NormalForms, |ev, x| {
                if eval_cond(c, x) {
                    Ok(ResultSet::new())
                } else {
                    ev.eval_round(body, tau, x)
                }
            })?,
            DStrat::Repeat(body) => self.closure(s, Collect::All, |ev, x| ev.eval_round(body, tau, x))?,
            DStrat::Steps(n, body) => {
                let mut cur = ResultSet::singleton(s.clone());
                for _ in 0..*n {
                    let mut next = ResultSet::new();
                    for x in &cur {
                        next.extend(self.eval_round(body, tau, x)?);
                    }
                    cur = next;
                }
                cur
            }
        })
    }

    /// Breadth-first closure of `step` from `s`.
    fn closure<F>(&mut self, s: &StratState, collect: Collect, mut step: F) -> Result<ResultSet, Exhausted>
    where
        F: FnMut(&mut Self, &StratState) -> Result<ResultSet, Exhausted>,
    {
        let mut visited: HashSet<StratState> = HashSet::new();
        let mut queue: VecDeque<StratState> = VecDeque::new();
        let mut out = ResultSet::new();
        visited.insert(s.clone());
        queue.push_back(s.clone());
        while let Some(x) = queue.pop_front() {
            self.counters.closure_states += 1;
            if let Some(b) = self.budget {
                if visited.len() as u64 > b {
                    return Err(Exhausted(b));
                }
            }
            let next = step(self, &x)?;
            match collect {
                Collect::All => {
                    out.insert(x);
                }
                Collect::NormalForms if next.is_empty() => {
                    out.insert(x);
                }
                Collect::NormalForms => {}
            }
            for y in next {
                if visited.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }
}

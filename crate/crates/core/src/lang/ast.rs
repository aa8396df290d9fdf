use crate::config::{ConfigPattern, Expr, MapPattern, Sym};
use crate::time::{Interval, Time};

/// State conditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SCond {
    Matches(ConfigPattern),
    In(Interval),
    /// clock > t
    After(Time),
    /// clock < t
    Before(Time),
    /// clock >= t
    AfterEq(Time),
    /// clock <= t
    BeforeEq(Time),
    And(Box<SCond>, Box<SCond>),
    Or(Box<SCond>, Box<SCond>),
    Not(Box<SCond>),
}

impl SCond {
    pub fn and(a: SCond, b: SCond) -> SCond {
        SCond::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: SCond, b: SCond) -> SCond {
        SCond::Or(Box::new(a), Box::new(b))
    }

    pub fn negate(a: SCond) -> SCond {
        SCond::Not(Box::new(a))
    }

    /// Whether evaluating the condition can depend on the global clock.
    pub fn mentions_clock(&self) -> bool {
        match self {
            SCond::Matches(p) => p.clock.is_some(),
            SCond::In(_) | SCond::After(_) | SCond::Before(_) | SCond::AfterEq(_) | SCond::BeforeEq(_) => true,
            SCond::And(a, b) | SCond::Or(a, b) => a.mentions_clock() || b.mentions_clock(),
            SCond::Not(a) => a.mentions_clock(),
        }
    }
}

/// Discrete strategies, including the analysis-level constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DStrat {
    Apply(Sym),
    /// `apply [l1 l2 ...]`: the first label that applies.
    ApplyFirst(Vec<Sym>),
    Eager,
    EagerOf(Vec<Sym>),
    Action,
    Delay,
    Stop,
    Skip,
    Seq(Box<DStrat>, Box<DStrat>),
    Or(Box<DStrat>, Box<DStrat>),
    OrElse(Box<DStrat>, Box<DStrat>),
    If(SCond, Box<DStrat>, Box<DStrat>),
    /// `get (M) and set (M')`: the matched history entries are replaced by
    /// the evaluated `set` entries.
    GetSet {
        get: MapPattern,
        set: Vec<(Sym, Expr)>,
    },
    Check(SCond),
    UntilDo(SCond, Box<DStrat>),
    Repeat(Box<DStrat>),
    Steps(u64, Box<DStrat>),
}

impl DStrat {
    pub fn seq(a: DStrat, b: DStrat) -> DStrat {
        DStrat::Seq(Box::new(a), Box::new(b))
    }

    pub fn or(a: DStrat, b: DStrat) -> DStrat {
        DStrat::Or(Box::new(a), Box::new(b))
    }

    pub fn or_else(a: DStrat, b: DStrat) -> DStrat {
        DStrat::OrElse(Box::new(a), Box::new(b))
    }

    pub fn if_then_else(c: SCond, a: DStrat, b: DStrat) -> DStrat {
        DStrat::If(c, Box::new(a), Box::new(b))
    }

    pub fn until_do(c: SCond, a: DStrat) -> DStrat {
        DStrat::UntilDo(c, Box::new(a))
    }

    pub fn repeat(a: DStrat) -> DStrat {
        DStrat::Repeat(Box::new(a))
    }

    pub fn steps(n: u64, a: DStrat) -> DStrat {
        DStrat::Steps(n, Box::new(a))
    }

    /// Every rule label the strategy refers to.
    pub fn labels(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<Sym>) {
        match self {
            DStrat::Apply(l) => out.push(l.clone()),
            DStrat::ApplyFirst(ls) | DStrat::EagerOf(ls) => out.extend(ls.iter().cloned()),
            DStrat::Seq(a, b) | DStrat::Or(a, b) | DStrat::OrElse(a, b) | DStrat::If(_, a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
            DStrat::UntilDo(_, a) | DStrat::Repeat(a) | DStrat::Steps(_, a) => a.collect_labels(out),
            _ => {}
        }
    }

    /// Conditions appearing anywhere in the strategy.
    pub fn conditions(&self) -> Vec<&SCond> {
        let mut out = Vec::new();
        self.collect_conditions(&mut out);
        out
    }

    fn collect_conditions<'a>(&'a self, out: &mut Vec<&'a SCond>) {
        match self {
            DStrat::If(c, a, b) => {
                out.push(c);
                a.collect_conditions(out);
                b.collect_conditions(out);
            }
            DStrat::Check(c) => out.push(c),
            DStrat::UntilDo(c, a) => {
                out.push(c);
                a.collect_conditions(out);
            }
            DStrat::Seq(a, b) | DStrat::Or(a, b) | DStrat::OrElse(a, b) => {
                a.collect_conditions(out);
                b.collect_conditions(out);
            }
            DStrat::Repeat(a) | DStrat::Steps(_, a) => a.collect_conditions(out),
            _ => {}
        }
    }
}

/// Time sampling strategies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TStrat {
    FixedTime(Time),
    /// Advance by the maximal time elapse, or by the default when that is
    /// infinite.
    MaxTime(Time),
    Switch {
        cases: Vec<(SCond, TStrat)>,
        otherwise: Box<TStrat>,
    },
    /// Sample with the inner strategy, then reset the global clock to 0.
    Untime(Box<TStrat>),
}

impl TStrat {
    pub fn untime(t: TStrat) -> TStrat {
        TStrat::Untime(Box::new(t))
    }

    pub fn conditions(&self) -> Vec<&SCond> {
        match self {
            TStrat::Switch { cases, otherwise } => {
                let mut out: Vec<&SCond> = Vec::new();
                for (c, t) in cases {
                    out.push(c);
                    out.extend(t.conditions());
                }
                out.extend(otherwise.conditions());
                out
            }
            TStrat::Untime(t) => t.conditions(),
            _ => Vec::new(),
        }
    }
}

/// `< μ , τ >`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub discrete: DStrat,
    pub sampling: TStrat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exploration {
    BreadthFirst,
    DepthFirst,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CommandKind {
    Tsim {
        n: Option<u64>,
        until: Time,
    },
    Trew {
        steps: u64,
        n: Option<u64>,
    },
    Search {
        untimed: bool,
        order: Exploration,
        n: Option<u64>,
        depth: Option<u64>,
        cond: SCond,
        interval: Option<Interval>,
    },
    FindEarliest {
        cond: SCond,
    },
    FindLatest {
        cond: SCond,
    },
}

/// An analysis command. The initial state is always the model's `init`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Command {
    pub kind: CommandKind,
    pub model: String,
    pub strategy: DStrat,
    pub sampling: TStrat,
}

use std::fmt;

use super::ast::{Command, CommandKind, DStrat, Exploration, SCond, Strategy, TStrat};

fn cond_level(c: &SCond) -> u8 {
    match c {
        SCond::Or(..) => 0,
        SCond::And(..) => 1,
        _ => 2,
    }
}

fn cond_at(f: &mut fmt::Formatter<'_>, c: &SCond, min: u8) -> fmt::Result {
    if cond_level(c) < min {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for SCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // A guard would otherwise swallow a following `and`/`or`.
            SCond::Matches(p) if p.guard.is_some() => write!(f, "(matches {p})"),
            SCond::Matches(p) => write!(f, "matches {p}"),
            SCond::In(iv) => write!(f, "in {iv}"),
            SCond::After(t) => write!(f, "after {t}"),
            SCond::Before(t) => write!(f, "before {t}"),
            SCond::AfterEq(t) => write!(f, "after= {t}"),
            SCond::BeforeEq(t) => write!(f, "before= {t}"),
            SCond::Or(a, b) => {
                cond_at(f, a, 0)?;
                f.write_str(" \\/ ")?;
                cond_at(f, b, 1)
            }
            SCond::And(a, b) => {
                cond_at(f, a, 1)?;
                f.write_str(" /\\ ")?;
                cond_at(f, b, 2)
            }
            SCond::Not(a) => {
                f.write_str("not ")?;
                cond_at(f, a, 2)
            }
        }
    }
}

fn level(d: &DStrat) -> u8 {
    match d {
        DStrat::Or(..) => 0,
        DStrat::OrElse(..) => 1,
        DStrat::Seq(..) => 2,
        // Open-ended on the right: only safe where nothing follows.
        DStrat::If(..) => 0,
        _ => 3,
    }
}

fn at(f: &mut fmt::Formatter<'_>, d: &DStrat, min: u8) -> fmt::Result {
    if level(d) < min {
        write!(f, "({d})")
    } else {
        write!(f, "{d}")
    }
}

fn labels(ls: &[crate::config::Sym]) -> String {
    let parts: Vec<&str> = ls.iter().map(|l| &**l).collect();
    format!("[{}]", parts.join(" "))
}

impl fmt::Display for DStrat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DStrat::Apply(l) => write!(f, "apply {l}"),
            DStrat::ApplyFirst(ls) => write!(f, "apply {}", labels(ls)),
            DStrat::Eager => f.write_str("eager"),
            DStrat::EagerOf(ls) => write!(f, "eager {}", labels(ls)),
            DStrat::Action => f.write_str("action"),
            DStrat::Delay => f.write_str("delay"),
            DStrat::Stop => f.write_str("stop"),
            DStrat::Skip => f.write_str("skip"),
            DStrat::Or(a, b) => {
                at(f, a, 1)?;
                f.write_str(" or ")?;
                at(f, b, 1)
            }
            DStrat::OrElse(a, b) => {
                at(f, a, 2)?;
                f.write_str(" or-else ")?;
                at(f, b, 2)
            }
            DStrat::Seq(a, b) => {
                at(f, a, 3)?;
                f.write_str(" ; ")?;
                at(f, b, 3)
            }
            DStrat::If(c, a, b) => write!(f, "if {c} then {a} else {b}"),
            DStrat::GetSet { get, set } => {
                let parts: Vec<String> = set.iter().map(|(k, e)| format!("'{k} |-> {e}")).collect();
                write!(f, "get {get} and set ({})", parts.join(", "))
            }
            DStrat::Check(c) => write!(f, "check {c}"),
            DStrat::UntilDo(c, a) => {
                write!(f, "until {c} do ")?;
                at(f, a, 3)
            }
            DStrat::Repeat(a) => {
                f.write_str("repeat ")?;
                at(f, a, 3)
            }
            DStrat::Steps(n, a) => {
                write!(f, "{n} steps with ")?;
                at(f, a, 3)
            }
        }
    }
}

fn nested(f: &mut fmt::Formatter<'_>, t: &TStrat) -> fmt::Result {
    match t {
        TStrat::Switch { .. } => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

impl fmt::Display for TStrat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TStrat::FixedTime(t) => write!(f, "fixed-time {t}"),
            TStrat::MaxTime(t) => write!(f, "max-time with default {t}"),
            TStrat::Switch { cases, otherwise } => {
                f.write_str("switch")?;
                for (c, t) in cases {
                    write!(f, " when {c} do ")?;
                    nested(f, t)?;
                }
                f.write_str(" otherwise ")?;
                nested(f, otherwise)
            }
            TStrat::Untime(t) => {
                f.write_str("untime ")?;
                nested(f, t)
            }
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} , {} >", self.discrete, self.sampling)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = |f: &mut fmt::Formatter<'_>| write!(f, "using {} with sampling {}", self.strategy, self.sampling);
        let m = &self.model;
        match &self.kind {
            CommandKind::Tsim { n, until } => {
                f.write_str("tsim ")?;
                if let Some(n) = n {
                    write!(f, "[{n}] ")?;
                }
                write!(f, "in {m} : init ")?;
                tail(f)?;
                write!(f, " until {until}")
            }
            CommandKind::Trew { steps, n } => {
                match n {
                    Some(n) => write!(f, "trew [{steps}, {n}] ")?,
                    None => write!(f, "trew [{steps}] ")?,
                }
                write!(f, "in {m} : init ")?;
                tail(f)
            }
            CommandKind::Search { untimed, order, n, depth, cond, interval } => {
                if *order == Exploration::DepthFirst {
                    f.write_str("d")?;
                }
                f.write_str(if *untimed { "usearch " } else { "tsearch " })?;
                match (n, depth) {
                    (Some(n), Some(d)) => write!(f, "[{n}, {d}] ")?,
                    (Some(n), None) => write!(f, "[{n}] ")?,
                    // A depth bound needs an explicit solution bound in the concrete syntax.
                    (None, Some(d)) => write!(f, "[{}, {d}] ", u64::MAX)?,
                    (None, None) => {}
                }
                write!(f, "in {m} : init => {cond} ")?;
                tail(f)?;
                if let Some(iv) = interval {
                    write!(f, " in time {iv}")?;
                }
                Ok(())
            }
            CommandKind::FindEarliest { cond } => {
                write!(f, "find earliest in {m} : init => {cond} ")?;
                tail(f)
            }
            CommandKind::FindLatest { cond } => {
                write!(f, "find latest in {m} : init => {cond} ")?;
                tail(f)
            }
        }
    }
}

use super::ast::{Command, CommandKind, DStrat, Exploration, SCond, Strategy, TStrat};
use crate::config::syntax::{parse_expr, parse_map_entries};
use crate::config::{parse_state_pattern, sym, Sym};
use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::time::{Interval, Time, TimeInf};

fn finish<T>(c: &Cursor, v: T) -> Result<T, SyntaxError> {
    if c.at_eof() {
        Ok(v)
    } else {
        Err(c.unexpected("end of input"))
    }
}

pub fn parse_condition(text: &str) -> Result<SCond, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let v = cond(&mut c)?;
    finish(&c, v)
}

pub fn parse_dstrat(text: &str) -> Result<DStrat, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let v = dstrat(&mut c)?;
    finish(&c, v)
}

pub fn parse_tstrat(text: &str) -> Result<TStrat, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let v = tstrat(&mut c)?;
    finish(&c, v)
}

/// Parses a `< μ , τ >` pair.
pub fn parse_strategy(text: &str) -> Result<Strategy, SyntaxError> {
    let mut c = Cursor::new(text)?;
    c.expect_punct("<")?;
    let discrete = dstrat(&mut c)?;
    c.expect_punct(",")?;
    let sampling = tstrat(&mut c)?;
    c.expect_punct(">")?;
    finish(&c, Strategy { discrete, sampling })
}

pub fn parse_command(text: &str) -> Result<Command, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let cmd = command(&mut c)?;
    c.eat_punct(".");
    finish(&c, cmd)
}

/// A sequence of commands, each optionally terminated by `.`.
pub fn parse_commands(text: &str) -> Result<Vec<Command>, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let mut out = Vec::new();
    while !c.at_eof() {
        out.push(command(&mut c)?);
        c.eat_punct(".");
    }
    Ok(out)
}

// ---------------------------------------------------------------- conditions

pub(crate) fn cond(c: &mut Cursor) -> Result<SCond, SyntaxError> {
    let mut a = conj(c)?;
    while c.eat_punct("\\/") {
        a = SCond::or(a, conj(c)?);
    }
    Ok(a)
}

fn conj(c: &mut Cursor) -> Result<SCond, SyntaxError> {
    let mut a = unary(c)?;
    while c.eat_punct("/\\") {
        a = SCond::and(a, unary(c)?);
    }
    Ok(a)
}

fn unary(c: &mut Cursor) -> Result<SCond, SyntaxError> {
    if c.eat_kw("not") {
        return Ok(SCond::negate(unary(c)?));
    }
    if c.eat_punct("(") {
        let a = cond(c)?;
        c.expect_punct(")")?;
        return Ok(a);
    }
    if c.eat_kw("matches") {
        return Ok(SCond::Matches(parse_state_pattern(c)?));
    }
    if c.eat_kw("in") {
        return Ok(SCond::In(interval(c)?));
    }
    let kw = c.expect_ident().map_err(|_| c.unexpected("a condition"))?;
    let make: fn(Time) -> SCond = match kw.as_str() {
        "after" => SCond::After,
        "before" => SCond::Before,
        "after=" => SCond::AfterEq,
        "before=" => SCond::BeforeEq,
        _ => return Err(c.error(format!("unknown condition `{kw}`"))),
    };
    // `after(5)` and `after 5` are both accepted.
    let t = if c.eat_punct("(") {
        let t = c.expect_num()?;
        c.expect_punct(")")?;
        t
    } else {
        c.expect_num()?
    };
    Ok(make(t))
}

fn time_inf(c: &mut Cursor) -> Result<TimeInf, SyntaxError> {
    if c.eat_kw("INF") {
        Ok(TimeInf::Inf)
    } else {
        Ok(TimeInf::Finite(c.expect_num()?))
    }
}

fn interval(c: &mut Cursor) -> Result<Interval, SyntaxError> {
    let pos = c.pos();
    c.expect_punct("[")?;
    let lower = c.expect_num()?;
    c.expect_punct(",")?;
    let upper = time_inf(c)?;
    c.expect_punct("]")?;
    Interval::new(lower, upper).map_err(|e| SyntaxError::new(pos, e.to_string()))
}

// ---------------------------------------------------------------- strategies

pub(crate) fn dstrat(c: &mut Cursor) -> Result<DStrat, SyntaxError> {
    let mut a = or_else(c)?;
    while c.eat_kw("or") {
        a = DStrat::or(a, or_else(c)?);
    }
    Ok(a)
}

fn or_else(c: &mut Cursor) -> Result<DStrat, SyntaxError> {
    let mut a = seq(c)?;
    while c.eat_kw("or-else") {
        a = DStrat::or_else(a, seq(c)?);
    }
    Ok(a)
}

fn seq(c: &mut Cursor) -> Result<DStrat, SyntaxError> {
    let mut a = prefix(c)?;
    while c.eat_punct(";") {
        a = DStrat::seq(a, prefix(c)?);
    }
    Ok(a)
}

fn label(c: &mut Cursor) -> Result<Sym, SyntaxError> {
    match c.peek().clone() {
        Tok::Qid(s) | Tok::Ident(s) => {
            c.bump();
            Ok(sym(&s))
        }
        _ => Err(c.unexpected("a rule label")),
    }
}

fn label_list(c: &mut Cursor) -> Result<Vec<Sym>, SyntaxError> {
    c.expect_punct("[")?;
    let mut out = Vec::new();
    while !c.eat_punct("]") {
        out.push(label(c)?);
        c.eat_punct(",");
    }
    Ok(out)
}

fn prefix(c: &mut Cursor) -> Result<DStrat, SyntaxError> {
    if c.eat_punct("(") {
        let a = dstrat(c)?;
        c.expect_punct(")")?;
        return Ok(a);
    }
    if let Tok::Num(n) = *c.peek() {
        c.bump();
        c.expect_kw("steps")?;
        c.expect_kw("with")?;
        return Ok(DStrat::steps(n, prefix(c)?));
    }
    let pos = c.pos();
    let kw = c.expect_ident().map_err(|_| c.unexpected("a strategy"))?;
    Ok(match kw.as_str() {
        "apply" => {
            if c.is_punct("[") {
                DStrat::ApplyFirst(label_list(c)?)
            } else {
                DStrat::Apply(label(c)?)
            }
        }
        "eager" => {
            if c.is_punct("[") {
                DStrat::EagerOf(label_list(c)?)
            } else {
                DStrat::Eager
            }
        }
        "action" => DStrat::Action,
        "delay" => DStrat::Delay,
        "stop" => DStrat::Stop,
        "skip" => DStrat::Skip,
        "if" => {
            let k = cond(c)?;
            c.expect_kw("then")?;
            let a = dstrat(c)?;
            c.expect_kw("else")?;
            let b = dstrat(c)?;
            DStrat::if_then_else(k, a, b)
        }
        "until" => {
            let k = cond(c)?;
            c.expect_kw("do")?;
            DStrat::until_do(k, prefix(c)?)
        }
        "repeat" => DStrat::repeat(prefix(c)?),
        "check" => DStrat::Check(cond(c)?),
        "get" => {
            c.expect_punct("(")?;
            let get = parse_map_entries(c)?;
            c.expect_punct(")")?;
            c.expect_kw("and")?;
            c.expect_kw("set")?;
            c.expect_punct("(")?;
            let mut set = Vec::new();
            loop {
                let key = match c.bump() {
                    Tok::Qid(k) => sym(&k),
                    _ => return Err(c.unexpected("a history key such as `'C`")),
                };
                c.expect_punct("|->")?;
                set.push((key, parse_expr(c)?));
                if !c.eat_punct(",") {
                    break;
                }
            }
            c.expect_punct(")")?;
            let bound: Vec<Sym> = get.entries.iter().filter_map(|(_, p)| p_var(p)).collect();
            for (_, e) in &set {
                if let Some(v) = e.vars().into_iter().find(|v| !bound.contains(v)) {
                    return Err(SyntaxError::new(pos, format!("`set` uses variable `{v}` not bound by `get`")));
                }
            }
            DStrat::GetSet { get, set }
        }
        "tick" => {
            return Err(SyntaxError::new(pos, "unknown strategy `tick` (time steps are written `delay`)"));
        }
        other => return Err(SyntaxError::new(pos, format!("unknown strategy `{other}`"))),
    })
}

fn p_var(p: &crate::config::TermPattern) -> Option<Sym> {
    match p {
        crate::config::TermPattern::Var(v) => Some(v.clone()),
        _ => None,
    }
}

fn positive(c: &Cursor, what: &str) -> impl Fn(Time) -> Result<Time, SyntaxError> {
    let pos = c.pos();
    let what = what.to_string();
    move |t| {
        if t == 0 {
            Err(SyntaxError::new(pos, format!("`{what}` needs a positive time")))
        } else {
            Ok(t)
        }
    }
}

pub(crate) fn tstrat(c: &mut Cursor) -> Result<TStrat, SyntaxError> {
    if c.eat_punct("(") {
        let t = tstrat(c)?;
        c.expect_punct(")")?;
        return Ok(t);
    }
    let kw = c.expect_ident().map_err(|_| c.unexpected("a time sampling strategy"))?;
    match kw.as_str() {
        "fixed-time" => {
            let check = positive(c, "fixed-time");
            Ok(TStrat::FixedTime(check(c.expect_num()?)?))
        }
        "max-time" => {
            c.expect_kw("with")?;
            c.expect_kw("default")?;
            let check = positive(c, "max-time with default");
            Ok(TStrat::MaxTime(check(c.expect_num()?)?))
        }
        "switch" => {
            let mut cases = Vec::new();
            while c.eat_kw("when") {
                let k = cond(c)?;
                c.expect_kw("do")?;
                cases.push((k, tstrat(c)?));
            }
            if cases.is_empty() {
                return Err(c.unexpected("`when`"));
            }
            c.expect_kw("otherwise")?;
            Ok(TStrat::Switch { cases, otherwise: Box::new(tstrat(c)?) })
        }
        "untime" => Ok(TStrat::untime(tstrat(c)?)),
        other => Err(c.error(format!("unknown time sampling strategy `{other}`"))),
    }
}

// ---------------------------------------------------------------- commands

fn bracket_nums(c: &mut Cursor) -> Result<Vec<u64>, SyntaxError> {
    let mut out = Vec::new();
    if c.eat_punct("[") {
        loop {
            out.push(c.expect_num()?);
            if c.eat_punct("]") {
                break;
            }
            c.expect_punct(",")?;
        }
    }
    Ok(out)
}

struct Tail {
    model: String,
    cond: Option<SCond>,
    strategy: DStrat,
    sampling: TStrat,
}

fn tail(c: &mut Cursor, with_cond: bool) -> Result<Tail, SyntaxError> {
    c.expect_kw("in")?;
    let model = match c.bump() {
        Tok::Ident(s) | Tok::Qid(s) => s,
        _ => return Err(c.unexpected("a model name")),
    };
    c.expect_punct(":")?;
    if !c.eat_kw("init") {
        return Err(c.unexpected("`init` (commands always start from the model's initial state)"));
    }
    let cond = if with_cond {
        c.expect_punct("=>")?;
        Some(cond(c)?)
    } else {
        None
    };
    c.expect_kw("using")?;
    let strategy = dstrat(c)?;
    c.expect_kw("with")?;
    c.expect_kw("sampling")?;
    let sampling = tstrat(c)?;
    Ok(Tail { model, cond, strategy, sampling })
}

fn positive_bound(c: &Cursor, v: u64, what: &str) -> Result<u64, SyntaxError> {
    if v == 0 {
        Err(c.error(format!("{what} must be positive")))
    } else {
        Ok(v)
    }
}

fn command(c: &mut Cursor) -> Result<Command, SyntaxError> {
    c.eat_kw("red");
    let pos = c.pos();
    let kw = c.expect_ident().map_err(|_| c.unexpected("a command"))?;
    let (kind, t) = match kw.as_str() {
        "tsim" => {
            let nums = bracket_nums(c)?;
            if nums.len() > 1 {
                return Err(SyntaxError::new(pos, "`tsim` takes at most one bound `[n]`"));
            }
            let n = nums.first().map(|&n| positive_bound(c, n, "solution bound")).transpose()?;
            let t = tail(c, false)?;
            c.expect_kw("until")?;
            (CommandKind::Tsim { n, until: c.expect_num()? }, t)
        }
        "trew" => {
            let nums = bracket_nums(c)?;
            let (steps, n) = match nums[..] {
                [d] => (d, None),
                [d, n] => (d, Some(positive_bound(c, n, "solution bound")?)),
                _ => return Err(SyntaxError::new(pos, "`trew` expects `[d]` or `[d, n]`")),
            };
            (CommandKind::Trew { steps, n }, tail(c, false)?)
        }
        "tsearch" | "dtsearch" | "usearch" | "dusearch" => {
            let untimed = kw.ends_with("usearch");
            let order = if kw.starts_with('d') { Exploration::DepthFirst } else { Exploration::BreadthFirst };
            let nums = bracket_nums(c)?;
            let (n, depth) = match nums[..] {
                [] => (None, None),
                [n] => (Some(n), None),
                [n, d] => (Some(n), Some(d)),
                _ => return Err(SyntaxError::new(pos, format!("`{kw}` expects `[n]` or `[n, d]`"))),
            };
            let n = n.map(|n| positive_bound(c, n, "solution bound")).transpose()?;
            let mut t = tail(c, true)?;
            let interval = if c.is_kw("in") {
                if untimed {
                    return Err(c.error("untimed searches cannot be bounded by a time interval"));
                }
                c.bump();
                c.expect_kw("time")?;
                Some(interval(c)?)
            } else {
                None
            };
            let cond = t.cond.take().expect("condition parsed");
            (CommandKind::Search { untimed, order, n, depth, cond, interval }, t)
        }
        "find" => {
            let latest = match c.expect_ident()?.as_str() {
                "earliest" => false,
                "latest" => true,
                _ => return Err(SyntaxError::new(pos, "expected `find earliest` or `find latest`")),
            };
            let mut t = tail(c, true)?;
            let cond = t.cond.take().expect("condition parsed");
            let kind = if latest { CommandKind::FindLatest { cond } } else { CommandKind::FindEarliest { cond } };
            (kind, t)
        }
        other => return Err(SyntaxError::new(pos, format!("unknown command `{other}`"))),
    };
    Ok(Command { kind, model: t.model, strategy: t.strategy, sampling: t.sampling })
}

//! Timed models: class and message declarations, labeled instantaneous
//! rules, the initial state, and the tick semantics derived from attribute
//! kinds.

mod parse;

pub use parse::{load_model, ModelError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::config::{
    match_entities, sym, Binding, Configuration, DlyMsg, Entity, EntityPattern, Env, Expr, Msg, Object, StratState,
    Sym, Value,
};
use crate::time::{Time, TimeInf};

/// How an attribute reacts to the passage of time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttrKind {
    /// Grows by the elapsed time.
    Clock,
    /// Counts down (truncated at zero) and bounds the maximal time elapse.
    Timer,
    Static,
}

impl AttrKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AttrKind::Clock => "clock",
            AttrKind::Timer => "timer",
            AttrKind::Static => "static",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttrType {
    Time,
    TimeInf,
    Nat,
    Bool,
    Oid,
}

impl AttrType {
    pub fn name(self) -> &'static str {
        match self {
            AttrType::Time => "Time",
            AttrType::TimeInf => "TimeInf",
            AttrType::Nat => "Nat",
            AttrType::Bool => "Bool",
            AttrType::Oid => "Oid",
        }
    }

    pub fn admits(self, v: &Value) -> bool {
        matches!(
            (self, v),
            (AttrType::Time | AttrType::Nat, Value::Num(TimeInf::Finite(_)))
                | (AttrType::TimeInf, Value::Num(_))
                | (AttrType::Bool, Value::Bool(_))
                | (AttrType::Oid, Value::Id(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrDecl {
    pub name: Sym,
    pub kind: AttrKind,
    pub ty: AttrType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: Sym,
    pub attrs: Vec<AttrDecl>,
}

impl ClassDecl {
    pub fn attr(&self, name: &str) -> Option<&AttrDecl> {
        self.attrs.iter().find(|a| &*a.name == name)
    }
}

/// Right-hand side message: a literal message or a variable bound to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MsgTemplate {
    Var(Sym),
    Msg { name: Sym, args: Vec<Expr> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Template {
    /// Rewrites a matched object: listed attributes are updated, the others
    /// kept.
    Object {
        oid: Expr,
        class: Sym,
        attrs: Vec<(Sym, Expr)>,
    },
    Msg(MsgTemplate),
    Dly {
        msg: MsgTemplate,
        lower: Expr,
        upper: Expr,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: Sym,
    pub lhs: Vec<EntityPattern>,
    pub guard: Option<Expr>,
    pub rhs: Vec<Template>,
}

pub const DELIVER: &str = "deliver";
pub const TICK: &str = "tick";

#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub classes: BTreeMap<Sym, ClassDecl>,
    pub msgs: BTreeMap<Sym, usize>,
    pub rules: Vec<Rule>,
    pub init: StratState,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TickError {
    #[error("time advance must be positive")]
    ZeroDelay,
}

impl Model {
    /// All rule labels, built-in `deliver` first.
    pub fn labels(&self) -> Vec<Sym> {
        std::iter::once(sym(DELIVER)).chain(self.rules.iter().map(|r| r.label.clone())).collect()
    }

    pub fn has_label(&self, l: &str) -> bool {
        l == DELIVER || self.rules.iter().any(|r| &*r.label == l)
    }

    fn kind_of(&self, class: &str, attr: &str) -> AttrKind {
        self.classes.get(class).and_then(|c| c.attr(attr)).map(|a| a.kind).unwrap_or(AttrKind::Static)
    }

    /// Maximal time elapse.
    pub fn mte(&self, c: &Configuration) -> TimeInf {
        if c.is_empty() {
            return TimeInf::ZERO;
        }
        c.entities().iter().map(|e| self.entity_mte(e)).min().unwrap_or(TimeInf::Inf)
    }

    fn entity_mte(&self, e: &Entity) -> TimeInf {
        match e {
            Entity::Object(o) => o
                .attrs
                .iter()
                .filter(|(k, _)| self.kind_of(&o.class, k) == AttrKind::Timer)
                .filter_map(|(_, v)| v.as_time_inf())
                .min()
                .unwrap_or(TimeInf::Inf),
            Entity::Dly(d) => d.upper,
            Entity::Msg(_) => TimeInf::ZERO,
        }
    }

    /// Effect of `d` time units elapsing on every entity.
    pub fn time_effect(&self, c: &Configuration, d: Time) -> Configuration {
        if d == 0 {
            return c.clone();
        }
        let entities = c
            .entities()
            .iter()
            .map(|e| match e {
                Entity::Object(o) => {
                    let mut o = o.clone();
                    for (k, v) in o.attrs.iter_mut() {
                        if let Value::Num(t) = v {
                            match self.kind_of(&o.class, k) {
                                AttrKind::Clock => *t = t.plus(TimeInf::Finite(d)),
                                AttrKind::Timer => *t = t.monus(d),
                                AttrKind::Static => {}
                            }
                        }
                    }
                    Entity::Object(o)
                }
                Entity::Dly(dm) => Entity::Dly(DlyMsg {
                    msg: dm.msg.clone(),
                    lower: dm.lower.saturating_sub(d),
                    upper: dm.upper.monus(d),
                }),
                Entity::Msg(m) => Entity::Msg(m.clone()),
            })
            .collect();
        Configuration::from_entities(entities)
    }

    /// One application of the tick rule with duration `d`; `None` when `d`
    /// exceeds the maximal time elapse.
    pub fn tick(&self, s: &StratState, d: Time) -> Result<Option<StratState>, TickError> {
        if d == 0 {
            return Err(TickError::ZeroDelay);
        }
        if TimeInf::Finite(d) > self.mte(s.config()) {
            return Ok(None);
        }
        let Some(clock) = s.clock().checked_add(d) else {
            return Ok(None);
        };
        Ok(Some(StratState::new(self.time_effect(s.config(), d), clock, s.history.clone())))
    }

    /// One-step instantaneous successors, restricted to `labels` when given.
    /// Results are grouped by rule (built-in `deliver` first) and, within a
    /// rule, listed in match order; duplicates are dropped.
    pub fn inst_successors(&self, s: &StratState, labels: Option<&[Sym]>) -> Vec<(Sym, StratState)> {
        let allowed = |l: &str| labels.is_none_or(|ls| ls.iter().any(|x| &**x == l));
        let mut out: Vec<(Sym, StratState)> = Vec::new();
        let mut seen: BTreeSet<(Sym, Configuration)> = BTreeSet::new();
        let mut push = |label: &Sym, config: Configuration, out: &mut Vec<(Sym, StratState)>| {
            if seen.insert((label.clone(), config.clone())) {
                out.push((label.clone(), StratState::new(config, s.clock(), s.history.clone())));
            }
        };
        if allowed(DELIVER) {
            let label = sym(DELIVER);
            let es = s.config().entities();
            for (i, e) in es.iter().enumerate() {
                if let Entity::Dly(d) = e {
                    if d.lower == 0 {
                        let mut next = es.to_vec();
                        next[i] = Entity::Msg(d.msg.clone());
                        push(&label, Configuration::from_entities(next), &mut out);
                    }
                }
            }
        }
        for rule in self.rules.iter().filter(|r| allowed(&r.label)) {
            for config in self.apply_rule(rule, s.config()) {
                push(&rule.label, config, &mut out);
            }
        }
        out
    }

    /// Every configuration obtained by one application of `rule`.
    pub fn apply_rule(&self, rule: &Rule, c: &Configuration) -> Vec<Configuration> {
        let mut out = Vec::new();
        for m in match_entities(&rule.lhs, c, &Env::new()) {
            if let Some(g) = &rule.guard {
                if !matches!(g.eval(&m.env), Ok(Value::Bool(true))) {
                    continue;
                }
            }
            let matched: Vec<&Entity> = m.used.iter().map(|&i| &c.entities()[i]).collect();
            let Some(produced) = self.instantiate(&rule.rhs, &matched, &m.env) else {
                continue;
            };
            let mut next: Vec<Entity> =
                c.entities().iter().enumerate().filter(|(i, _)| !m.used.contains(i)).map(|(_, e)| e.clone()).collect();
            next.extend(produced);
            out.push(Configuration::from_entities(next));
        }
        out
    }

    /// Builds the right-hand side. `None` if an expression fails to
    /// evaluate or yields a value of the wrong type.
    fn instantiate(&self, rhs: &[Template], matched: &[&Entity], env: &Env) -> Option<Vec<Entity>> {
        let mut out = Vec::with_capacity(rhs.len());
        for t in rhs {
            out.push(match t {
                Template::Object { oid, class, attrs } => {
                    let Value::Id(oid) = oid.eval(env).ok()? else { return None };
                    let base = matched.iter().find_map(|e| match e {
                        Entity::Object(o) if o.oid == oid && o.class == *class => Some(o),
                        _ => None,
                    })?;
                    let decl = self.classes.get(class)?;
                    let mut o: Object = (*base).clone();
                    for (name, e) in attrs {
                        let v = e.eval(env).ok()?;
                        if !decl.attr(name)?.ty.admits(&v) {
                            return None;
                        }
                        o.attrs.insert(name.clone(), v);
                    }
                    Entity::Object(o)
                }
                Template::Msg(m) => Entity::Msg(self.instantiate_msg(m, env)?),
                Template::Dly { msg, lower, upper } => {
                    let lower = lower.eval(env).ok()?.as_time_inf()?.finite()?;
                    let upper = upper.eval(env).ok()?.as_time_inf()?;
                    if TimeInf::Finite(lower) > upper {
                        return None;
                    }
                    Entity::Dly(DlyMsg { msg: self.instantiate_msg(msg, env)?, lower, upper })
                }
            });
        }
        Some(out)
    }

    fn instantiate_msg(&self, m: &MsgTemplate, env: &Env) -> Option<Msg> {
        match m {
            MsgTemplate::Var(v) => match env.get(v)? {
                Binding::Msg(m) => Some(m.clone()),
                _ => None,
            },
            MsgTemplate::Msg { name, args } => {
                Some(Msg { name: name.clone(), args: args.iter().map(|a| a.eval(env).ok()).collect::<Option<_>>()? })
            }
        }
    }
}

impl fmt::Display for AttrDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} : {}", self.kind.keyword(), self.name, self.ty.name())
    }
}

//! Configuration patterns and multiset matching.
//!
//! Matching enumerates every injective assignment of entity patterns to
//! entities of the configuration. A configuration-level pattern without a
//! rest variable must account for the whole multiset; object patterns are
//! always open, so unmentioned attributes match anything.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Configuration, Entity, Expr, Msg, Object, StratState, Sym, Value};

/// What a pattern variable can be bound to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Binding {
    Value(Value),
    Msg(Msg),
    Config(Configuration),
    Attrs(BTreeMap<Sym, Value>),
}

pub type Env = BTreeMap<Sym, Binding>;

/// Leaf pattern for attribute values, message arguments, clocks and
/// history values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermPattern {
    /// `_`
    Any,
    Var(Sym),
    Lit(Value),
}

impl TermPattern {
    fn matches(&self, v: &Value, env: &mut Env) -> bool {
        match self {
            TermPattern::Any => true,
            TermPattern::Lit(l) => l == v,
            TermPattern::Var(x) => bind(env, x, Binding::Value(v.clone())),
        }
    }

    fn var(&self) -> Option<&Sym> {
        match self {
            TermPattern::Var(v) => Some(v),
            _ => None,
        }
    }
}

fn bind(env: &mut Env, x: &Sym, b: Binding) -> bool {
    match env.get(x) {
        Some(old) => *old == b,
        None => {
            env.insert(x.clone(), b);
            true
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttrPattern {
    pub name: Sym,
    pub value: TermPattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MsgPattern {
    Var(Sym),
    Msg { name: Sym, args: Vec<TermPattern> },
}

impl MsgPattern {
    fn matches(&self, m: &Msg, env: &mut Env) -> bool {
        match self {
            MsgPattern::Var(x) => bind(env, x, Binding::Msg(m.clone())),
            MsgPattern::Msg { name, args } => {
                *name == m.name
                    && args.len() == m.args.len()
                    && args.iter().zip(&m.args).all(|(p, v)| p.matches(v, env))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EntityPattern {
    Object {
        oid: TermPattern,
        class: Sym,
        attrs: Vec<AttrPattern>,
        /// Captures the attributes not mentioned in `attrs`.
        rest: Option<Sym>,
    },
    /// A ripe message.
    Msg {
        name: Sym,
        args: Vec<TermPattern>,
    },
    Dly {
        msg: MsgPattern,
        lower: TermPattern,
        upper: TermPattern,
    },
}

impl EntityPattern {
    fn matches(&self, e: &Entity, env: &mut Env) -> bool {
        match (self, e) {
            (EntityPattern::Object { oid, class, attrs, rest }, Entity::Object(o)) => {
                match_object(oid, class, attrs, rest.as_ref(), o, env)
            }
            (EntityPattern::Msg { name, args }, Entity::Msg(m)) => {
                *name == m.name
                    && args.len() == m.args.len()
                    && args.iter().zip(&m.args).all(|(p, v)| p.matches(v, env))
            }
            (EntityPattern::Dly { msg, lower, upper }, Entity::Dly(d)) => {
                msg.matches(&d.msg, env)
                    && lower.matches(&Value::num(d.lower), env)
                    && upper.matches(&Value::Num(d.upper), env)
            }
            _ => false,
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Sym>) {
        let push = |t: &TermPattern, out: &mut Vec<Sym>| {
            if let Some(v) = t.var() {
                out.push(v.clone());
            }
        };
        match self {
            EntityPattern::Object { oid, attrs, rest, .. } => {
                push(oid, out);
                for a in attrs {
                    push(&a.value, out);
                }
                if let Some(r) = rest {
                    out.push(r.clone());
                }
            }
            EntityPattern::Msg { args, .. } => args.iter().for_each(|a| push(a, out)),
            EntityPattern::Dly { msg, lower, upper } => {
                match msg {
                    MsgPattern::Var(v) => out.push(v.clone()),
                    MsgPattern::Msg { args, .. } => args.iter().for_each(|a| push(a, out)),
                }
                push(lower, out);
                push(upper, out);
            }
        }
    }
}

fn match_object(
    oid: &TermPattern,
    class: &Sym,
    attrs: &[AttrPattern],
    rest: Option<&Sym>,
    o: &Object,
    env: &mut Env,
) -> bool {
    if *class != o.class || !oid.matches(&Value::Id(o.oid.clone()), env) {
        return false;
    }
    for a in attrs {
        match o.attrs.get(&a.name) {
            Some(v) if a.value.matches(v, env) => {}
            _ => return false,
        }
    }
    if let Some(r) = rest {
        let remaining: BTreeMap<Sym, Value> = o
            .attrs
            .iter()
            .filter(|(k, _)| !attrs.iter().any(|a| a.name == **k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        return bind(env, r, Binding::Attrs(remaining));
    }
    true
}

/// One way of matching a list of entity patterns: the bindings and the
/// indices of the entities consumed, aligned with the pattern list.
#[derive(Debug, Clone)]
pub(crate) struct EntityMatch {
    pub env: Env,
    pub used: Vec<usize>,
}

/// Enumerates injective assignments of `pats` to entities of `config`,
/// starting from `env`.
pub(crate) fn match_entities(pats: &[EntityPattern], config: &Configuration, env: &Env) -> Vec<EntityMatch> {
    let mut out = Vec::new();
    let mut used = vec![false; config.len()];
    let mut chosen = Vec::with_capacity(pats.len());
    search(pats, config.entities(), &mut used, &mut chosen, env.clone(), &mut out);
    out
}

fn search(
    pats: &[EntityPattern],
    entities: &[Entity],
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    env: Env,
    out: &mut Vec<EntityMatch>,
) {
    let Some((first, rest)) = pats.split_first() else {
        out.push(EntityMatch { env, used: chosen.clone() });
        return;
    };
    for j in 0..entities.len() {
        if used[j] {
            continue;
        }
        // Entities are sorted, so equal neighbours give identical matches.
        if j > 0 && !used[j - 1] && entities[j] == entities[j - 1] {
            continue;
        }
        let mut env2 = env.clone();
        if first.matches(&entities[j], &mut env2) {
            used[j] = true;
            chosen.push(j);
            search(rest, entities, used, chosen, env2, out);
            chosen.pop();
            used[j] = false;
        }
    }
}

/// History-map pattern. Every listed key must be present; other keys are
/// ignored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MapPattern {
    pub entries: Vec<(Sym, TermPattern)>,
}

impl MapPattern {
    fn matches(&self, h: &super::History, env: &mut Env) -> bool {
        self.entries.iter().all(|(k, p)| h.get(k).is_some_and(|v| p.matches(v, env)))
    }

    /// The bindings produced by matching `h`, if every listed key is present
    /// with a matching value.
    pub fn match_history(&self, h: &super::History) -> Option<Env> {
        let mut env = Env::new();
        self.matches(h, &mut env).then_some(env)
    }

    pub fn keys(&self) -> impl Iterator<Item = &Sym> {
        self.entries.iter().map(|(k, _)| k)
    }
}

/// The configuration part of a pattern: entity patterns plus an optional
/// rest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConfigBody {
    pub entities: Vec<EntityPattern>,
    pub rest: Option<Sym>,
}

/// Pattern over a [`StratState`]. Any of the parts may be absent; an absent
/// part matches anything.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConfigPattern {
    pub config: Option<ConfigBody>,
    pub clock: Option<TermPattern>,
    pub history: Option<MapPattern>,
    pub guard: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("variable `{0}` is bound more than once (patterns must be linear)")]
    NonLinear(Sym),
    #[error("guard uses variable `{0}` that the pattern does not bind")]
    UnboundGuardVar(Sym),
}

impl ConfigPattern {
    /// A pattern matching every state.
    pub fn anything() -> ConfigPattern {
        ConfigPattern::default()
    }

    pub fn bound_vars(&self) -> Vec<Sym> {
        let mut vars = Vec::new();
        if let Some(body) = &self.config {
            for e in &body.entities {
                e.collect_vars(&mut vars);
            }
            if let Some(r) = body.rest.as_ref().filter(|r| &***r != "_") {
                vars.push(r.clone());
            }
        }
        if let Some(TermPattern::Var(v)) = &self.clock {
            vars.push(v.clone());
        }
        if let Some(h) = &self.history {
            for (_, p) in &h.entries {
                if let Some(v) = p.var() {
                    vars.push(v.clone());
                }
            }
        }
        vars
    }

    /// Checks linearity and that the guard only mentions bound variables.
    pub fn validate(&self) -> Result<(), PatternError> {
        let mut seen = BTreeSet::new();
        for v in self.bound_vars() {
            if !seen.insert(v.clone()) {
                return Err(PatternError::NonLinear(v));
            }
        }
        if let Some(g) = &self.guard {
            if let Some(v) = g.vars().into_iter().find(|v| !seen.contains(v)) {
                return Err(PatternError::UnboundGuardVar(v));
            }
        }
        Ok(())
    }

    /// All binding environments under which `s` matches, deduplicated and in
    /// ascending order.
    pub fn match_state(&self, s: &StratState) -> Vec<Env> {
        let mut envs: Vec<Env> = match &self.config {
            None => vec![Env::new()],
            Some(body) => match_entities(&body.entities, s.config(), &Env::new())
                .into_iter()
                .filter_map(|m| complete_body(body, s.config(), m))
                .collect(),
        };
        if let Some(cp) = &self.clock {
            let clock = Value::num(s.clock());
            envs.retain_mut(|env| cp.matches(&clock, env));
        }
        if let Some(hp) = &self.history {
            envs.retain_mut(|env| hp.matches(&s.history, env));
        }
        if let Some(g) = &self.guard {
            envs.retain(|env| matches!(g.eval(env), Ok(Value::Bool(true))));
        }
        envs.sort();
        envs.dedup();
        envs
    }

    pub fn matches(&self, s: &StratState) -> bool {
        !self.match_state(s).is_empty()
    }
}

fn complete_body(body: &ConfigBody, config: &Configuration, m: EntityMatch) -> Option<Env> {
    let EntityMatch { mut env, used } = m;
    match &body.rest {
        None if used.len() == config.len() => Some(env),
        None => None,
        Some(r) if &**r == "_" => Some(env),
        Some(r) => {
            let remaining: Vec<Entity> = config
                .entities()
                .iter()
                .enumerate()
                .filter(|(i, _)| !used.contains(i))
                .map(|(_, e)| e.clone())
                .collect();
            bind(&mut env, r, Binding::Config(Configuration::from_entities(remaining))).then_some(env)
        }
    }
}

/// `matchPattern`: every environment under which `p` matches `s`.
pub fn match_pattern(p: &ConfigPattern, s: &StratState) -> Vec<Env> {
    p.match_state(s)
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Value(v) => v.fmt(f),
            Binding::Msg(m) => m.fmt(f),
            Binding::Config(c) => c.fmt(f),
            Binding::Attrs(a) => {
                let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k} : {v}")).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

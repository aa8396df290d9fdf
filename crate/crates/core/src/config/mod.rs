//! System states: multisets of objects and (delayed) messages, the clocked
//! wrapper, and the history map carried by strategies.

mod expr;
mod pattern;
pub(crate) mod syntax;

pub use expr::{eval_expr, BinOp, EvalError, Expr};
pub(crate) use pattern::match_entities;
pub use pattern::{
    match_pattern, AttrPattern, Binding, ConfigBody, ConfigPattern, EntityPattern, Env, MapPattern, MsgPattern,
    PatternError, TermPattern,
};
pub use syntax::{is_var_name, parse_expr, parse_state_pattern};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::time::{Time, TimeInf};

/// Interned-ish identifier. Cheap to clone, compared by content.
pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// Attribute values, message arguments and history entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    /// Natural numbers share the time domain, so `INF` is a number too.
    Num(TimeInf),
    Id(Sym),
}

impl Value {
    pub fn num(n: Time) -> Value {
        Value::Num(TimeInf::Finite(n))
    }

    pub fn id(s: &str) -> Value {
        Value::Id(sym(s))
    }

    pub fn as_time_inf(&self) -> Option<TimeInf> {
        match self {
            Value::Num(t) => Some(*t),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "Bool",
            Value::Num(TimeInf::Inf) => "TimeInf",
            Value::Num(_) => "Time",
            Value::Id(_) => "Oid",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Num(t) => write!(f, "{t}"),
            Value::Id(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Msg {
    pub name: Sym,
    pub args: Vec<Value>,
}

impl Msg {
    pub fn new(name: &str, args: Vec<Value>) -> Msg {
        Msg { name: sym(name), args }
    }
}

impl fmt::Display for Msg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Object {
    pub oid: Sym,
    pub class: Sym,
    pub attrs: BTreeMap<Sym, Value>,
}

impl Object {
    pub fn new<'a>(oid: &str, class: &str, attrs: impl IntoIterator<Item = (&'a str, Value)>) -> Object {
        Object { oid: sym(oid), class: sym(class), attrs: attrs.into_iter().map(|(k, v)| (sym(k), v)).collect() }
    }

    pub fn attr(&self, name: &str) -> Option<&Value> {
        self.attrs.get(name)
    }
}

impl fmt::Display for Object {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} : {} |", self.oid, self.class)?;
        for (i, (k, v)) in self.attrs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {k} : {v}")?;
        }
        f.write_str(" >")
    }
}

/// A message whose remaining delay lies in `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DlyMsg {
    pub msg: Msg,
    pub lower: Time,
    pub upper: TimeInf,
}

impl fmt::Display for DlyMsg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dly({}, {}, {})", self.msg, self.lower, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entity {
    Object(Object),
    Msg(Msg),
    Dly(DlyMsg),
}

impl Entity {
    pub fn as_object(&self) -> Option<&Object> {
        match self {
            Entity::Object(o) => Some(o),
            _ => None,
        }
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Object(o) => o.fmt(f),
            Entity::Msg(m) => m.fmt(f),
            Entity::Dly(d) => d.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("duplicate object identifier `{0}`")]
    DuplicateOid(Sym),
    #[error("delayed message {0} has lower bound above upper bound")]
    InvertedDelay(String),
}

/// A multiset of entities, stored sorted so that equal multisets are equal
/// values. The structural hash is computed once on construction.
#[derive(Debug, Clone)]
pub struct Configuration {
    entities: Vec<Entity>,
    fingerprint: u64,
}

impl Default for Configuration {
    fn default() -> Configuration {
        Configuration::from_entities(Vec::new())
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Configuration) -> bool {
        self.fingerprint == other.fingerprint && self.entities == other.entities
    }
}

impl Eq for Configuration {}

impl std::hash::Hash for Configuration {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.fingerprint);
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Configuration) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Configuration {
    fn cmp(&self, other: &Configuration) -> std::cmp::Ordering {
        self.entities.cmp(&other.entities)
    }
}

impl Configuration {
    pub fn empty() -> Configuration {
        Configuration::default()
    }

    /// Builds a configuration, checking object-id uniqueness and delay bounds.
    pub fn new(entities: Vec<Entity>) -> Result<Configuration, ConfigError> {
        let mut seen = BTreeSet::new();
        for e in &entities {
            match e {
                Entity::Object(o) => {
                    if !seen.insert(o.oid.clone()) {
                        return Err(ConfigError::DuplicateOid(o.oid.clone()));
                    }
                }
                Entity::Dly(d) if TimeInf::Finite(d.lower) > d.upper => {
                    return Err(ConfigError::InvertedDelay(d.to_string()));
                }
                _ => {}
            }
        }
        Ok(Configuration::from_entities(entities))
    }

    pub(crate) fn from_entities(mut entities: Vec<Entity>) -> Configuration {
        use std::hash::{Hash, Hasher};
        entities.sort();
        let mut h = std::hash::DefaultHasher::new();
        entities.hash(&mut h);
        Configuration { entities, fingerprint: h.finish() }
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn objects(&self) -> impl Iterator<Item = &Object> {
        self.entities.iter().filter_map(Entity::as_object)
    }

    pub fn object(&self, oid: &str) -> Option<&Object> {
        self.objects().find(|o| &*o.oid == oid)
    }

    /// Canonical serialization: equal multisets give identical bytes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        canonicalize(self)
    }
}

/// Canonical byte string of a configuration. The empty configuration maps to
/// the sentinel `none`.
pub fn canonicalize(c: &Configuration) -> Vec<u8> {
    c.to_string().into_bytes()
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entities.is_empty() {
            return f.write_str("none");
        }
        for (i, e) in self.entities.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// `{ config } in time clock`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClockedState {
    pub config: Configuration,
    pub clock: Time,
}

impl ClockedState {
    pub fn new(config: Configuration, clock: Time) -> ClockedState {
        ClockedState { config, clock }
    }
}

impl fmt::Display for ClockedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} in time {}", self.config, self.clock)
    }
}

pub type History = BTreeMap<Sym, Value>;

pub fn fmt_history(h: &History) -> String {
    h.iter().map(|(k, v)| format!("'{k} |-> {v}")).collect::<Vec<_>>().join(", ")
}

/// A clocked state plus the strategy history map; the unit of strategy
/// evaluation and of deduplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratState {
    pub clocked: ClockedState,
    pub history: History,
}

impl StratState {
    pub fn new(config: Configuration, clock: Time, history: History) -> StratState {
        StratState { clocked: ClockedState { config, clock }, history }
    }

    pub fn config(&self) -> &Configuration {
        &self.clocked.config
    }

    pub fn clock(&self) -> Time {
        self.clocked.clock
    }
}

impl From<ClockedState> for StratState {
    fn from(clocked: ClockedState) -> Self {
        StratState { clocked, history: History::new() }
    }
}

impl fmt::Display for StratState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.clocked)?;
        if !self.history.is_empty() {
            write!(f, " | {}", fmt_history(&self.history))?;
        }
        Ok(())
    }
}

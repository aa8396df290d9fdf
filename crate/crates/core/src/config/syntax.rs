//! Concrete syntax for terms, expressions and configuration patterns.
//!
//! Identifiers starting with an uppercase letter are variables; lowercase
//! identifiers are constants. `INF`, `true` and `false` are literals and `_`
//! is a wildcard. A variable may carry a sort annotation (`R:Time`), which is
//! accepted and dropped.

use std::fmt;

use super::{
    sym, AttrPattern, BinOp, ConfigBody, ConfigPattern, EntityPattern, Expr, MapPattern, MsgPattern, Sym, TermPattern,
    Value,
};
use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::time::TimeInf;

const SORTS: &[&str] =
    &["Time", "TimeInf", "Nat", "Bool", "Oid", "Msg", "Configuration", "AttributeSet", "ClockedSystem", "Map"];

pub fn is_var_name(s: &str) -> bool {
    s != "INF" && s.starts_with(|c: char| c.is_ascii_uppercase())
}

fn skip_sort_annotation(c: &mut Cursor) {
    if c.is_punct(":") {
        if let Tok::Ident(s) = c.peek_at(1) {
            if SORTS.contains(&s.as_str()) {
                c.bump();
                c.bump();
            }
        }
    }
}

pub(crate) fn parse_var(c: &mut Cursor) -> Result<Sym, SyntaxError> {
    match c.peek().clone() {
        Tok::Ident(s) if is_var_name(&s) => {
            c.bump();
            skip_sort_annotation(c);
            Ok(sym(&s))
        }
        _ => Err(c.unexpected("a variable")),
    }
}

/// A literal value: number, `INF`, `true`, `false` or a lowercase constant.
pub(crate) fn try_literal(c: &mut Cursor) -> Option<Value> {
    let v = match c.peek() {
        Tok::Num(n) => Value::num(*n),
        Tok::Ident(s) if s == "INF" => Value::Num(TimeInf::Inf),
        Tok::Ident(s) if s == "true" => Value::Bool(true),
        Tok::Ident(s) if s == "false" => Value::Bool(false),
        Tok::Ident(s) if s != "_" && !is_var_name(s) && !s.contains('-') => Value::Id(sym(s)),
        _ => return None,
    };
    c.bump();
    Some(v)
}

pub(crate) fn parse_term(c: &mut Cursor) -> Result<TermPattern, SyntaxError> {
    if c.eat_kw("_") {
        return Ok(TermPattern::Any);
    }
    if let Tok::Ident(s) = c.peek() {
        if is_var_name(s) {
            return Ok(TermPattern::Var(parse_var(c)?));
        }
    }
    try_literal(c).map(TermPattern::Lit).ok_or_else(|| c.unexpected("a value, variable or `_`"))
}

// ---------------------------------------------------------------- expressions

pub fn parse_expr(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_and(c)?;
    while c.eat_kw("or") {
        e = Expr::bin(BinOp::Or, e, parse_and(c)?);
    }
    Ok(e)
}

fn parse_and(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_not(c)?;
    while c.eat_kw("and") {
        e = Expr::bin(BinOp::And, e, parse_not(c)?);
    }
    Ok(e)
}

fn parse_not(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    if c.eat_kw("not") {
        return Ok(Expr::Not(Box::new(parse_not(c)?)));
    }
    parse_cmp(c)
}

fn cmp_op(t: &Tok) -> Option<BinOp> {
    Some(match t {
        Tok::Punct("==") => BinOp::Eq,
        Tok::Punct("=/=") => BinOp::Ne,
        Tok::Punct("<") => BinOp::Lt,
        Tok::Punct("<=") => BinOp::Le,
        Tok::Punct(">") => BinOp::Gt,
        Tok::Punct(">=") => BinOp::Ge,
        _ => return None,
    })
}

fn parse_cmp(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let lhs = parse_additive(c)?;
    match cmp_op(c.peek()) {
        Some(op) => {
            c.bump();
            Ok(Expr::bin(op, lhs, parse_additive(c)?))
        }
        None => Ok(lhs),
    }
}

/// `+` and `monus`, left associative. Used directly for attribute values in
/// object templates so that `>` closes the object.
pub(crate) fn parse_additive(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    let mut e = parse_primary(c)?;
    loop {
        if c.eat_punct("+") {
            e = Expr::bin(BinOp::Plus, e, parse_primary(c)?);
        } else if c.eat_kw("monus") {
            e = Expr::bin(BinOp::Monus, e, parse_primary(c)?);
        } else {
            return Ok(e);
        }
    }
}

fn parse_primary(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    if c.eat_punct("(") {
        let e = parse_expr(c)?;
        c.expect_punct(")")?;
        return Ok(e);
    }
    for (kw, op) in [("min", BinOp::Min), ("max", BinOp::Max)] {
        if c.is_kw(kw) && matches!(c.peek_at(1), Tok::Punct("(")) {
            c.bump();
            c.bump();
            let a = parse_expr(c)?;
            c.expect_punct(",")?;
            let b = parse_expr(c)?;
            c.expect_punct(")")?;
            return Ok(Expr::bin(op, a, b));
        }
    }
    if c.eat_kw("if") {
        let cond = parse_expr(c)?;
        c.expect_kw("then")?;
        let a = parse_expr(c)?;
        c.expect_kw("else")?;
        let b = parse_expr(c)?;
        c.expect_kw("fi")?;
        return Ok(Expr::If(Box::new(cond), Box::new(a), Box::new(b)));
    }
    if let Tok::Ident(s) = c.peek() {
        if is_var_name(s) {
            return Ok(Expr::Var(parse_var(c)?));
        }
    }
    try_literal(c).map(Expr::Lit).ok_or_else(|| c.unexpected("an expression"))
}

// ---------------------------------------------------------------- patterns

fn parse_args<T>(
    c: &mut Cursor,
    mut item: impl FnMut(&mut Cursor) -> Result<T, SyntaxError>,
) -> Result<Vec<T>, SyntaxError> {
    let mut out = Vec::new();
    if c.eat_punct("(") && !c.eat_punct(")") {
        loop {
            out.push(item(c)?);
            if c.eat_punct(")") {
                break;
            }
            c.expect_punct(",")?;
        }
    }
    Ok(out)
}

pub(crate) fn parse_msg_args_expr(c: &mut Cursor) -> Result<Vec<Expr>, SyntaxError> {
    parse_args(c, parse_expr)
}

/// Object, ripe message or delayed message pattern.
pub(crate) fn parse_entity_pattern(c: &mut Cursor) -> Result<EntityPattern, SyntaxError> {
    if c.eat_punct("<") {
        let oid = parse_term(c)?;
        c.expect_punct(":")?;
        let class = sym(&c.expect_ident()?);
        c.expect_punct("|")?;
        let mut attrs = Vec::new();
        let mut rest = None;
        if !c.is_punct(">") {
            loop {
                let name = c.expect_ident()?;
                if is_var_name(&name) {
                    if rest.is_some() {
                        return Err(c.error("an object pattern may have only one attribute rest variable"));
                    }
                    skip_sort_annotation(c);
                    rest = Some(sym(&name));
                } else {
                    c.expect_punct(":")?;
                    attrs.push(AttrPattern { name: sym(&name), value: parse_term(c)? });
                }
                if !c.eat_punct(",") {
                    break;
                }
            }
        }
        c.expect_punct(">")?;
        return Ok(EntityPattern::Object { oid, class, attrs, rest });
    }
    if c.is_kw("dly") && matches!(c.peek_at(1), Tok::Punct("(")) {
        c.bump();
        c.bump();
        let msg = match c.peek().clone() {
            Tok::Ident(s) if is_var_name(&s) => MsgPattern::Var(parse_var(c)?),
            Tok::Ident(s) => {
                c.bump();
                MsgPattern::Msg { name: sym(&s), args: parse_args(c, parse_term)? }
            }
            _ => return Err(c.unexpected("a message pattern")),
        };
        c.expect_punct(",")?;
        let lower = parse_term(c)?;
        c.expect_punct(",")?;
        let upper = parse_term(c)?;
        c.expect_punct(")")?;
        return Ok(EntityPattern::Dly { msg, lower, upper });
    }
    match c.peek().clone() {
        Tok::Ident(s) if !is_var_name(&s) && s != "_" => {
            c.bump();
            Ok(EntityPattern::Msg { name: sym(&s), args: parse_args(c, parse_term)? })
        }
        _ => Err(c.unexpected("an object, message or `dly` pattern")),
    }
}

/// `{ entities [REST] }`; entities are juxtaposed, the rest variable may
/// appear anywhere in the list and `_` stands for an anonymous rest.
pub(crate) fn parse_config_body(c: &mut Cursor) -> Result<ConfigBody, SyntaxError> {
    c.expect_punct("{")?;
    let mut body = ConfigBody::default();
    while !c.eat_punct("}") {
        let is_rest = match c.peek() {
            Tok::Ident(s) => is_var_name(s) || s == "_",
            _ => false,
        };
        if is_rest {
            if body.rest.is_some() {
                return Err(c.error("a configuration pattern may have only one rest variable"));
            }
            let name = c.expect_ident()?;
            skip_sort_annotation(c);
            body.rest = Some(sym(&name));
        } else if !c.eat_kw("none") {
            body.entities.push(parse_entity_pattern(c)?);
        }
    }
    Ok(body)
}

pub(crate) fn parse_map_entries(c: &mut Cursor) -> Result<MapPattern, SyntaxError> {
    let mut entries = Vec::new();
    loop {
        let key = match c.bump() {
            Tok::Qid(k) => sym(&k),
            _ => return Err(c.unexpected("a history key such as `'C`")),
        };
        c.expect_punct("|->")?;
        entries.push((key, parse_term(c)?));
        if c.is_punct(",") && matches!(c.peek_at(1), Tok::Qid(_)) {
            c.bump();
        } else {
            return Ok(MapPattern { entries });
        }
    }
}

fn parse_map_pattern(c: &mut Cursor) -> Result<MapPattern, SyntaxError> {
    if c.eat_punct("(") {
        let m = parse_map_entries(c)?;
        c.expect_punct(")")?;
        Ok(m)
    } else {
        parse_map_entries(c)
    }
}

/// Parses a state pattern with an optional `s.t.` guard:
///
/// ```text
/// pattern := '{' body '}' [in time TERM] ['|' map] [s.t. EXPR]
///          | map [s.t. EXPR]
///          | '(' pattern ')' [s.t. EXPR]
/// ```
pub fn parse_state_pattern(c: &mut Cursor) -> Result<ConfigPattern, SyntaxError> {
    let mut p = if c.is_punct("(") && !matches!(c.peek_at(1), Tok::Qid(_)) {
        c.bump();
        let p = parse_state_pattern(c)?;
        c.expect_punct(")")?;
        p
    } else if c.is_punct("{") {
        let mut p = ConfigPattern { config: Some(parse_config_body(c)?), ..Default::default() };
        if c.is_kw("in")
            && matches!(c.peek_at(1), Tok::Ident(s) if s == "time")
            && !matches!(c.peek_at(2), Tok::Punct("["))
        {
            c.bump();
            c.bump();
            p.clock = Some(parse_term(c)?);
        }
        if c.eat_punct("|") {
            p.history = Some(parse_map_pattern(c)?);
        }
        p
    } else {
        ConfigPattern { history: Some(parse_map_pattern(c)?), ..Default::default() }
    };
    if matches!(c.peek(), Tok::SuchThat) {
        if p.guard.is_some() {
            return Err(c.error("pattern already has a guard"));
        }
        c.bump();
        p.guard = Some(parse_expr(c)?);
    }
    p.validate().map_err(|e| c.error(e.to_string()))?;
    Ok(p)
}

// ---------------------------------------------------------------- printing

impl fmt::Display for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermPattern::Any => f.write_str("_"),
            TermPattern::Var(v) => f.write_str(v),
            TermPattern::Lit(v) => v.fmt(f),
        }
    }
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Or, ..) => 0,
        Expr::Bin(BinOp::And, ..) => 1,
        Expr::Not(_) => 2,
        Expr::Bin(op, ..) if op.is_comparison() => 3,
        Expr::Bin(BinOp::Plus | BinOp::Monus, ..) => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(v) => v.fmt(f),
            Expr::Var(v) => f.write_str(v),
            Expr::Not(a) => {
                f.write_str("not ")?;
                write_at(f, a, 2)
            }
            Expr::If(c, a, b) => write!(f, "if {c} then {a} else {b} fi"),
            Expr::Bin(op @ (BinOp::Min | BinOp::Max), a, b) => write!(f, "{}({a}, {b})", op.symbol()),
            Expr::Bin(op, a, b) => {
                let l = level(self);
                // Left associative chains; comparisons do not chain.
                let (lmin, rmin) = if op.is_comparison() { (l + 1, l + 1) } else { (l, l + 1) };
                write_at(f, a, lmin)?;
                write!(f, " {} ", op.symbol())?;
                write_at(f, b, rmin)
            }
        }
    }
}

impl fmt::Display for MsgPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsgPattern::Var(v) => f.write_str(v),
            MsgPattern::Msg { name, args } => write_call(f, name, args),
        }
    }
}

fn write_call<T: fmt::Display>(f: &mut fmt::Formatter<'_>, name: &str, args: &[T]) -> fmt::Result {
    f.write_str(name)?;
    if !args.is_empty() {
        let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(", "))?;
    }
    Ok(())
}

impl fmt::Display for EntityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityPattern::Object { oid, class, attrs, rest } => {
                let mut parts: Vec<String> = attrs.iter().map(|a| format!("{} : {}", a.name, a.value)).collect();
                if let Some(r) = rest {
                    parts.push(r.to_string());
                }
                if parts.is_empty() {
                    write!(f, "< {oid} : {class} | >")
                } else {
                    write!(f, "< {oid} : {class} | {} >", parts.join(", "))
                }
            }
            EntityPattern::Msg { name, args } => write_call(f, name, args),
            EntityPattern::Dly { msg, lower, upper } => write!(f, "dly({msg}, {lower}, {upper})"),
        }
    }
}

impl fmt::Display for ConfigBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.entities.iter().map(|e| e.to_string()).collect();
        if let Some(r) = &self.rest {
            parts.push(r.to_string());
        }
        if parts.is_empty() {
            f.write_str("{none}")
        } else {
            write!(f, "{{{}}}", parts.join(" "))
        }
    }
}

impl fmt::Display for MapPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(k, v)| format!("'{k} |-> {v}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Display for ConfigPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.config, &self.history) {
            (Some(body), h) => {
                write!(f, "{body}")?;
                if let Some(t) = &self.clock {
                    write!(f, " in time {t}")?;
                }
                if let Some(h) = h {
                    write!(f, " | {h}")?;
                }
            }
            (None, Some(h)) => write!(f, "{h}")?,
            (None, None) => f.write_str("{_}")?,
        }
        if let Some(g) = &self.guard {
            write!(f, " s.t. {g}")?;
        }
        Ok(())
    }
}

//! Loader for `.rtmod` model files.
//!
//! ```text
//! model NAME
//! class C | kind attr : Type, ...        kind: clock | timer | static
//! msg name/arity, ...
//! rule label: LHS => RHS [if GUARD]
//! init: { ... } in time 0 [| 'k |-> v, ...]
//! ```
//!
//! Statements may end with an optional `.`; `---` starts a comment.

use std::collections::{BTreeMap, BTreeSet};

use super::{AttrDecl, AttrKind, AttrType, ClassDecl, Model, MsgTemplate, Rule, Template, DELIVER, TICK};
use crate::config::syntax::{
    is_var_name, parse_additive, parse_config_body, parse_entity_pattern, parse_expr, parse_msg_args_expr, try_literal,
};
use crate::config::{
    sym, Configuration, DlyMsg, Entity, EntityPattern, Expr, History, Msg, MsgPattern, Object, StratState, Sym,
    TermPattern, Value,
};
use crate::lexer::{Cursor, Pos, SyntaxError, Tok};
use crate::time::TimeInf;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {message}")]
    Invalid { pos: Pos, message: String },
}

const STATEMENT_KEYWORDS: &[&str] = &["model", "class", "msg", "rule", "init"];

fn invalid(pos: Pos, message: impl Into<String>) -> ModelError {
    ModelError::Invalid { pos, message: message.into() }
}

type InitDecl = (Pos, Vec<(Pos, EntityPattern)>, u64, History);

/// Parses and validates a model file.
pub fn load_model(text: &str) -> Result<Model, ModelError> {
    let mut c = Cursor::new(text)?;
    let mut name = None;
    let mut classes: BTreeMap<Sym, ClassDecl> = BTreeMap::new();
    let mut msgs: BTreeMap<Sym, usize> = BTreeMap::new();
    let mut rules: Vec<(Pos, Rule)> = Vec::new();
    let mut init: Option<InitDecl> = None;

    while !c.at_eof() {
        let pos = c.pos();
        let kw = c.expect_ident()?;
        match kw.as_str() {
            "model" => {
                if name.is_some() {
                    return Err(invalid(pos, "duplicate `model` statement"));
                }
                name = Some(parse_name(&mut c)?);
            }
            "class" => {
                let decl = parse_class(&mut c)?;
                if classes.contains_key(&decl.name) {
                    return Err(invalid(pos, format!("class `{}` declared twice", decl.name)));
                }
                classes.insert(decl.name.clone(), decl);
            }
            "msg" | "msgs" => loop {
                let mpos = c.pos();
                let m = c.expect_ident()?;
                c.expect_punct("/")?;
                let arity = c.expect_num()? as usize;
                if msgs.insert(sym(&m), arity).is_some() {
                    return Err(invalid(mpos, format!("message `{m}` declared twice")));
                }
                if !c.eat_punct(",") {
                    break;
                }
            },
            "rule" | "rl" | "crl" => rules.push((pos, parse_rule(&mut c)?)),
            "init" => {
                if init.is_some() {
                    return Err(invalid(pos, "duplicate `init` statement"));
                }
                c.eat_punct(":");
                init = Some(parse_init(&mut c, pos)?);
            }
            other => return Err(invalid(pos, format!("unknown statement `{other}`"))),
        }
        c.eat_punct(".");
    }

    let name = name.ok_or_else(|| invalid(Pos { line: 1, col: 1 }, "missing `model NAME` statement"))?;
    let (ipos, ientities, iclock, ihistory) = init.ok_or_else(|| invalid(c.pos(), "missing `init` statement"))?;

    let mut labels = BTreeSet::new();
    for (pos, r) in &rules {
        if &*r.label == TICK || &*r.label == DELIVER {
            return Err(invalid(*pos, format!("rule label `{}` is reserved", r.label)));
        }
        if !labels.insert(r.label.clone()) {
            return Err(invalid(*pos, format!("duplicate rule label `{}`", r.label)));
        }
        check_rule(*pos, r, &classes, &msgs)?;
    }

    let mut entities = Vec::new();
    for (pos, p) in ientities {
        entities.push(ground_entity(pos, &p, &classes, &msgs)?);
    }
    let config = Configuration::new(entities).map_err(|e| invalid(ipos, e.to_string()))?;

    Ok(Model {
        name,
        classes,
        msgs,
        rules: rules.into_iter().map(|(_, r)| r).collect(),
        init: StratState::new(config, iclock, ihistory),
    })
}

fn parse_name(c: &mut Cursor) -> Result<String, SyntaxError> {
    match c.bump() {
        Tok::Ident(s) | Tok::Qid(s) => Ok(s),
        _ => Err(c.unexpected("a model name")),
    }
}

fn parse_class(c: &mut Cursor) -> Result<ClassDecl, ModelError> {
    let name = sym(&c.expect_ident()?);
    let mut attrs: Vec<AttrDecl> = Vec::new();
    if c.eat_punct("|") && matches!(c.peek(), Tok::Ident(s) if matches!(s.as_str(), "clock" | "timer" | "static")) {
        loop {
            let pos = c.pos();
            let kind = match c.expect_ident()?.as_str() {
                "clock" => AttrKind::Clock,
                "timer" => AttrKind::Timer,
                "static" => AttrKind::Static,
                other => return Err(invalid(pos, format!("unknown attribute kind `{other}`"))),
            };
            let apos = c.pos();
            let attr = sym(&c.expect_ident()?);
            c.expect_punct(":")?;
            let tpos = c.pos();
            let ty = match c.expect_ident()?.as_str() {
                "Time" => AttrType::Time,
                "TimeInf" => AttrType::TimeInf,
                "Nat" => AttrType::Nat,
                "Bool" => AttrType::Bool,
                "Oid" => AttrType::Oid,
                other => return Err(invalid(tpos, format!("unknown attribute type `{other}`"))),
            };
            if kind == AttrKind::Clock && ty != AttrType::Time {
                return Err(invalid(tpos, "clock attributes must have type Time"));
            }
            if kind == AttrKind::Timer && !matches!(ty, AttrType::Time | AttrType::TimeInf) {
                return Err(invalid(tpos, "timer attributes must have type Time or TimeInf"));
            }
            if attrs.iter().any(|a| a.name == attr) {
                return Err(invalid(apos, format!("attribute `{attr}` declared twice in class `{name}`")));
            }
            attrs.push(AttrDecl { name: attr, kind, ty });
            if !c.eat_punct(",") {
                break;
            }
        }
    }
    Ok(ClassDecl { name, attrs })
}

fn at_statement_end(c: &Cursor) -> bool {
    c.at_eof() || c.is_punct(".") || c.is_kw("if") || STATEMENT_KEYWORDS.iter().any(|k| c.is_kw(k))
}

fn parse_rule(c: &mut Cursor) -> Result<Rule, ModelError> {
    let label = match c.bump() {
        Tok::Ident(s) | Tok::Qid(s) => sym(&s),
        _ => return Err(c.unexpected("a rule label").into()),
    };
    c.expect_punct(":")?;
    let mut lhs = Vec::new();
    while !c.is_punct("=>") {
        let pos = c.pos();
        if c.eat_punct("(") {
            // Messages may be written in parentheses: `(m(X)) < ... >`.
            lhs.push(parse_entity_pattern(c)?);
            c.expect_punct(")")?;
        } else {
            lhs.push(parse_entity_pattern(c)?);
        }
        if let Some(EntityPattern::Object { rest: Some(_), .. }) = lhs.last() {
            return Err(invalid(pos, "attribute rest variables are not allowed in rule left-hand sides"));
        }
    }
    if lhs.is_empty() {
        return Err(invalid(c.pos(), "rule left-hand side is empty"));
    }
    c.expect_punct("=>")?;
    let mut rhs = Vec::new();
    while !at_statement_end(c) {
        if c.eat_kw("none") {
            continue;
        }
        rhs.push(parse_template(c)?);
    }
    let guard = if c.eat_kw("if") { Some(parse_expr(c)?) } else { None };
    Ok(Rule { label, lhs, guard, rhs })
}

fn parse_template(c: &mut Cursor) -> Result<Template, ModelError> {
    if c.eat_punct("<") {
        let oid = match c.peek().clone() {
            Tok::Ident(s) if is_var_name(&s) => {
                c.bump();
                Expr::var(&s)
            }
            _ => Expr::Lit(try_literal(c).ok_or_else(|| c.unexpected("an object identifier"))?),
        };
        c.expect_punct(":")?;
        let class = sym(&c.expect_ident()?);
        c.expect_punct("|")?;
        let mut attrs = Vec::new();
        if !c.is_punct(">") {
            loop {
                let name = sym(&c.expect_ident()?);
                c.expect_punct(":")?;
                attrs.push((name, parse_additive(c)?));
                if !c.eat_punct(",") {
                    break;
                }
            }
        }
        c.expect_punct(">")?;
        return Ok(Template::Object { oid, class, attrs });
    }
    if c.is_kw("dly") && matches!(c.peek_at(1), Tok::Punct("(")) {
        c.bump();
        c.bump();
        let msg = parse_msg_template(c)?;
        c.expect_punct(",")?;
        let lower = parse_expr(c)?;
        c.expect_punct(",")?;
        let upper = parse_expr(c)?;
        c.expect_punct(")")?;
        return Ok(Template::Dly { msg, lower, upper });
    }
    Ok(Template::Msg(parse_msg_template(c)?))
}

fn parse_msg_template(c: &mut Cursor) -> Result<MsgTemplate, ModelError> {
    match c.peek().clone() {
        Tok::Ident(s) if is_var_name(&s) => {
            c.bump();
            Ok(MsgTemplate::Var(sym(&s)))
        }
        Tok::Ident(s) if s != "_" => {
            c.bump();
            Ok(MsgTemplate::Msg { name: sym(&s), args: parse_msg_args_expr(c)? })
        }
        _ => Err(c.unexpected("a message").into()),
    }
}

type InitParts = (Pos, Vec<(Pos, EntityPattern)>, u64, History);

fn parse_init(c: &mut Cursor, pos: Pos) -> Result<InitParts, ModelError> {
    let bpos = c.pos();
    let body = parse_config_body(c)?;
    if let Some(r) = body.rest {
        return Err(invalid(bpos, format!("initial state cannot contain variable `{r}`")));
    }
    // Positions of individual entities are not tracked by the body parser;
    // report errors at the opening brace.
    let entities = body.entities.into_iter().map(|e| (bpos, e)).collect();
    let mut clock = 0;
    if c.eat_kw("in") {
        c.expect_kw("time")?;
        clock = c.expect_num()?;
    }
    let mut history = History::new();
    if c.eat_punct("|") {
        let parens = c.eat_punct("(");
        loop {
            let key = match c.bump() {
                Tok::Qid(k) => sym(&k),
                _ => return Err(c.unexpected("a history key").into()),
            };
            c.expect_punct("|->")?;
            let v = try_literal(c).ok_or_else(|| c.unexpected("a value"))?;
            history.insert(key, v);
            if !c.eat_punct(",") {
                break;
            }
        }
        if parens {
            c.expect_punct(")")?;
        }
    }
    Ok((pos, entities, clock, history))
}

fn lit(t: &TermPattern) -> Option<&Value> {
    match t {
        TermPattern::Lit(v) => Some(v),
        _ => None,
    }
}

fn ground_msg(pos: Pos, name: &Sym, args: &[TermPattern], msgs: &BTreeMap<Sym, usize>) -> Result<Msg, ModelError> {
    check_msg(pos, name, args.len(), msgs)?;
    let args = args
        .iter()
        .map(|a| lit(a).cloned().ok_or_else(|| invalid(pos, format!("message `{name}` has a non-literal argument"))))
        .collect::<Result<_, _>>()?;
    Ok(Msg { name: name.clone(), args })
}

fn ground_entity(
    pos: Pos,
    p: &EntityPattern,
    classes: &BTreeMap<Sym, ClassDecl>,
    msgs: &BTreeMap<Sym, usize>,
) -> Result<Entity, ModelError> {
    match p {
        EntityPattern::Object { oid, class, attrs, rest } => {
            let Some(Value::Id(oid)) = lit(oid) else {
                return Err(invalid(pos, "object identifiers in the initial state must be constants"));
            };
            if rest.is_some() {
                return Err(invalid(pos, format!("object `{oid}` contains a variable")));
            }
            let decl = classes.get(class).ok_or_else(|| invalid(pos, format!("undeclared class `{class}`")))?;
            let mut values = BTreeMap::new();
            for a in attrs {
                let ad = decl
                    .attr(&a.name)
                    .ok_or_else(|| invalid(pos, format!("class `{class}` has no attribute `{}`", a.name)))?;
                let v = lit(&a.value)
                    .ok_or_else(|| invalid(pos, format!("attribute `{}` of `{oid}` is not a value", a.name)))?;
                if !ad.ty.admits(v) {
                    return Err(invalid(
                        pos,
                        format!("attribute `{}` of `{oid}` expects {}, found {v}", a.name, ad.ty.name()),
                    ));
                }
                if values.insert(a.name.clone(), v.clone()).is_some() {
                    return Err(invalid(pos, format!("attribute `{}` of `{oid}` given twice", a.name)));
                }
            }
            if let Some(missing) = decl.attrs.iter().find(|a| !values.contains_key(&a.name)) {
                return Err(invalid(pos, format!("object `{oid}` lacks attribute `{}`", missing.name)));
            }
            Ok(Entity::Object(Object { oid: oid.clone(), class: class.clone(), attrs: values }))
        }
        EntityPattern::Msg { name, args } => Ok(Entity::Msg(ground_msg(pos, name, args, msgs)?)),
        EntityPattern::Dly { msg, lower, upper } => {
            let MsgPattern::Msg { name, args } = msg else {
                return Err(invalid(pos, "delayed message in the initial state contains a variable"));
            };
            let msg = ground_msg(pos, name, args, msgs)?;
            let lower = lit(lower)
                .and_then(Value::as_time_inf)
                .and_then(TimeInf::finite)
                .ok_or_else(|| invalid(pos, "delay lower bound must be a finite time"))?;
            let upper = lit(upper)
                .and_then(Value::as_time_inf)
                .ok_or_else(|| invalid(pos, "delay upper bound must be a time"))?;
            Ok(Entity::Dly(DlyMsg { msg, lower, upper }))
        }
    }
}

fn check_msg(pos: Pos, name: &Sym, arity: usize, msgs: &BTreeMap<Sym, usize>) -> Result<(), ModelError> {
    match msgs.get(name) {
        None => Err(invalid(pos, format!("undeclared message `{name}`"))),
        Some(&a) if a != arity => Err(invalid(pos, format!("message `{name}` expects {a} arguments, found {arity}"))),
        Some(_) => Ok(()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VarSort {
    Value,
    Msg,
}

fn check_rule(
    pos: Pos,
    r: &Rule,
    classes: &BTreeMap<Sym, ClassDecl>,
    msgs: &BTreeMap<Sym, usize>,
) -> Result<(), ModelError> {
    let ctx = |m: String| invalid(pos, format!("rule `{}`: {m}", r.label));
    let mut bound: BTreeMap<Sym, VarSort> = BTreeMap::new();
    let bind = |t: &TermPattern, bound: &mut BTreeMap<Sym, VarSort>| {
        if let TermPattern::Var(v) = t {
            bound.insert(v.clone(), VarSort::Value);
        }
    };
    // Matched objects by (oid pattern, class).
    let mut lhs_objects: Vec<(TermPattern, Sym)> = Vec::new();
    for p in &r.lhs {
        match p {
            EntityPattern::Object { oid, class, attrs, .. } => {
                let decl = classes.get(class).ok_or_else(|| ctx(format!("undeclared class `{class}`")))?;
                for a in attrs {
                    let ad = decl
                        .attr(&a.name)
                        .ok_or_else(|| ctx(format!("class `{class}` has no attribute `{}`", a.name)))?;
                    if let Some(v) = lit(&a.value) {
                        if !ad.ty.admits(v) {
                            return Err(ctx(format!("attribute `{}` expects {}, found {v}", a.name, ad.ty.name())));
                        }
                    }
                    bind(&a.value, &mut bound);
                }
                bind(oid, &mut bound);
                lhs_objects.push((oid.clone(), class.clone()));
            }
            EntityPattern::Msg { name, args } => {
                check_msg(pos, name, args.len(), msgs).map_err(|e| ctx(e.to_string()))?;
                args.iter().for_each(|a| bind(a, &mut bound));
            }
            EntityPattern::Dly { msg, lower, upper } => {
                match msg {
                    MsgPattern::Var(v) => {
                        bound.insert(v.clone(), VarSort::Msg);
                    }
                    MsgPattern::Msg { name, args } => {
                        check_msg(pos, name, args.len(), msgs).map_err(|e| ctx(e.to_string()))?;
                        args.iter().for_each(|a| bind(a, &mut bound));
                    }
                }
                bind(lower, &mut bound);
                bind(upper, &mut bound);
            }
        }
    }
    let check_expr = |e: &Expr| -> Result<(), ModelError> {
        for v in e.vars() {
            match bound.get(&v) {
                Some(VarSort::Value) => {}
                Some(VarSort::Msg) => return Err(ctx(format!("message variable `{v}` used as a value"))),
                None => return Err(ctx(format!("variable `{v}` is not bound by the left-hand side"))),
            }
        }
        Ok(())
    };
    if let Some(g) = &r.guard {
        check_expr(g)?;
    }
    let check_msg_t = |m: &MsgTemplate| -> Result<(), ModelError> {
        match m {
            MsgTemplate::Var(v) => match bound.get(v) {
                Some(VarSort::Msg) => Ok(()),
                _ => Err(ctx(format!("`{v}` is not a message variable bound by the left-hand side"))),
            },
            MsgTemplate::Msg { name, args } => {
                check_msg(pos, name, args.len(), msgs).map_err(|e| ctx(e.to_string()))?;
                args.iter().try_for_each(check_expr)
            }
        }
    };
    let mut rewritten = BTreeSet::new();
    for t in &r.rhs {
        match t {
            Template::Object { oid, class, attrs } => {
                let key = match oid {
                    Expr::Var(v) => TermPattern::Var(v.clone()),
                    Expr::Lit(l) => TermPattern::Lit(l.clone()),
                    _ => return Err(ctx("object identifiers must be variables or constants".into())),
                };
                let idx = lhs_objects
                    .iter()
                    .position(|(o, c)| *o == key && c == class)
                    .ok_or_else(|| ctx(format!("object `{oid}` of class `{class}` is not matched by the left-hand side; rules cannot create objects")))?;
                if !rewritten.insert(idx) {
                    return Err(ctx(format!("object `{oid}` appears twice on the right-hand side")));
                }
                let decl = &classes[class];
                for (name, e) in attrs {
                    let ad =
                        decl.attr(name).ok_or_else(|| ctx(format!("class `{class}` has no attribute `{name}`")))?;
                    if let Expr::Lit(v) = e {
                        if !ad.ty.admits(v) {
                            return Err(ctx(format!("attribute `{name}` expects {}, found {v}", ad.ty.name())));
                        }
                    }
                    check_expr(e)?;
                }
            }
            Template::Msg(m) => check_msg_t(m)?,
            Template::Dly { msg, lower, upper } => {
                check_msg_t(msg)?;
                check_expr(lower)?;
                check_expr(upper)?;
            }
        }
    }
    Ok(())
}

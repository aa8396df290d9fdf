//! Guard and update expressions over pattern bindings.

use std::collections::BTreeSet;

use super::{Binding, Env, Sym, Value};
use crate::time::TimeInf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Plus,
    Monus,
    Min,
    Max,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Plus => "+",
            BinOp::Monus => "monus",
            BinOp::Min => "min",
            BinOp::Max => "max",
            BinOp::Eq => "==",
            BinOp::Ne => "=/=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Value),
    Var(Sym),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    /// `if c then a else b fi`
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(Sym),
    #[error("variable `{0}` is not bound to a value")]
    NotAValue(Sym),
    #[error("type mismatch in `{op}`: expected {expected}, found {found}")]
    Type { op: &'static str, expected: &'static str, found: String },
    #[error("cannot subtract INF")]
    MonusInf,
}

impl Expr {
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(super::sym(name))
    }

    pub fn num(n: u64) -> Expr {
        Expr::Lit(Value::num(n))
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Expr::Lit(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Not(a) => a.collect_vars(out),
            Expr::If(c, a, b) => {
                c.collect_vars(out);
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Strict evaluation under `env`.
    pub fn eval(&self, env: &Env) -> Result<Value, EvalError> {
        match self {
            Expr::Lit(v) => Ok(v.clone()),
            Expr::Var(v) => match env.get(v) {
                Some(Binding::Value(val)) => Ok(val.clone()),
                Some(_) => Err(EvalError::NotAValue(v.clone())),
                None => Err(EvalError::Unbound(v.clone())),
            },
            Expr::Not(a) => Ok(Value::Bool(!bool_of("not", &a.eval(env)?)?)),
            Expr::If(c, a, b) => {
                if bool_of("if", &c.eval(env)?)? {
                    a.eval(env)
                } else {
                    b.eval(env)
                }
            }
            Expr::Bin(op, a, b) => {
                let x = a.eval(env)?;
                let y = b.eval(env)?;
                apply_bin(*op, &x, &y)
            }
        }
    }
}

pub fn eval_expr(e: &Expr, env: &Env) -> Result<Value, EvalError> {
    e.eval(env)
}

fn bool_of(op: &'static str, v: &Value) -> Result<bool, EvalError> {
    v.as_bool().ok_or_else(|| EvalError::Type { op, expected: "Bool", found: v.to_string() })
}

fn num_of(op: &'static str, v: &Value) -> Result<TimeInf, EvalError> {
    v.as_time_inf().ok_or_else(|| EvalError::Type { op, expected: "a number", found: v.to_string() })
}

fn apply_bin(op: BinOp, x: &Value, y: &Value) -> Result<Value, EvalError> {
    let sym = op.symbol();
    Ok(match op {
        BinOp::Plus => Value::Num(num_of(sym, x)?.plus(num_of(sym, y)?)),
        BinOp::Monus => {
            let b = num_of(sym, y)?.finite().ok_or(EvalError::MonusInf)?;
            Value::Num(num_of(sym, x)?.monus(b))
        }
        BinOp::Min => Value::Num(num_of(sym, x)?.min(num_of(sym, y)?)),
        BinOp::Max => Value::Num(num_of(sym, x)?.max(num_of(sym, y)?)),
        BinOp::Eq => Value::Bool(x == y),
        BinOp::Ne => Value::Bool(x != y),
        BinOp::Lt => Value::Bool(num_of(sym, x)? < num_of(sym, y)?),
        BinOp::Le => Value::Bool(num_of(sym, x)? <= num_of(sym, y)?),
        BinOp::Gt => Value::Bool(num_of(sym, x)? > num_of(sym, y)?),
        BinOp::Ge => Value::Bool(num_of(sym, x)? >= num_of(sym, y)?),
        BinOp::And => Value::Bool(bool_of(sym, x)? & bool_of(sym, y)?),
        BinOp::Or => Value::Bool(bool_of(sym, x)? | bool_of(sym, y)?),
    })
}

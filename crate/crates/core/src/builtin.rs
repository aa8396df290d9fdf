//! Models bundled with the crate.

use crate::model::{load_model, Model, ModelError};

pub const RTT: &str = include_str!("../models/rtt.rtmod");
pub const RTT_IDLE: &str = include_str!("../models/rtt-idle.rtmod");
pub const CASH_LITE: &str = include_str!("../models/cash-lite.rtmod");

pub const BUILTIN_NAMES: &[&str] = &["rtt", "rtt-idle", "cash-lite"];

#[derive(Debug, thiserror::Error)]
pub enum BuiltinError {
    #[error("unknown built-in model `{0}` (expected one of: rtt, rtt-idle, cash-lite)")]
    Unknown(String),
    #[error("bundled model `{0}` is invalid: {1}")]
    Invalid(String, ModelError),
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    match name.to_ascii_lowercase().as_str() {
        "rtt" => Some(RTT),
        "rtt-idle" | "rtt_idle" => Some(RTT_IDLE),
        "cash-lite" | "cash_lite" => Some(CASH_LITE),
        _ => None,
    }
}

pub fn builtin_model(name: &str) -> Result<Model, BuiltinError> {
    let src = builtin_source(name).ok_or_else(|| BuiltinError::Unknown(name.to_string()))?;
    load_model(src).map_err(|e| BuiltinError::Invalid(name.to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Value;
    use crate::time::INF;

    #[test]
    fn rtt_rules_and_init() {
        let m = builtin_model("rtt").unwrap();
        let labels: Vec<String> = m.labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, ["deliver", "send", "respond", "recordRTT"]);
        assert_eq!(m.init.clock(), 0);
        let snd = m.init.config().object("snd").unwrap();
        assert_eq!(snd.attr("timer"), Some(&Value::num(0)));
        assert_eq!(snd.attr("rtt"), Some(&Value::Num(INF)));
    }

    #[test]
    fn rtt_idle_adds_skip_round() {
        let m = builtin_model("rtt-idle").unwrap();
        assert!(m.has_label("skipRound"));
        let (_, s) = m.inst_successors(&m.init, Some(&[crate::config::sym("skipRound")])).into_iter().next().unwrap();
        assert_eq!(s.config().object("snd").unwrap().attr("timer"), Some(&Value::num(5000)));
        assert_eq!(s.config().len(), 2);
        assert_eq!(m.init.history.get("C"), Some(&Value::num(0)));
    }

    #[test]
    fn cash_lite_loads() {
        let m = builtin_model("cash-lite").unwrap();
        assert_eq!(m.rules.len(), 7);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin_model("nope"), Err(BuiltinError::Unknown(_))));
    }
}

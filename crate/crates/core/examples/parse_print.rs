//! Commands parse into syntax trees and print back in a normal layout.

use tstrat::lang::{parse_commands, CommandKind, DStrat};

const FILE: &str = "
--- Comments start with three dashes.
tsearch [2] in rtt : init =>
  matches {CONF < S : Sender | rtt : 20, ATTS >} in time R
  using (delay or action) ; skip with sampling fixed-time 1 .

find latest in rtt-idle : init =>
  (matches {< snd : Sender | rtt : X, ATTS > CONF} s.t. X =/= 0 and X =/= INF)
  using if before(100) then eager else apply [send respond] or-else delay
  with sampling switch when matches {CONF dly(M, L, U)} do fixed-time 1 otherwise max-time with default 10 .
";

fn size(d: &DStrat) -> usize {
    match d {
        DStrat::Seq(a, b) | DStrat::Or(a, b) | DStrat::OrElse(a, b) | DStrat::If(_, a, b) => 1 + size(a) + size(b),
        DStrat::UntilDo(_, a) | DStrat::Repeat(a) | DStrat::Steps(_, a) => 1 + size(a),
        _ => 1,
    }
}

fn main() {
    for cmd in parse_commands(FILE).unwrap() {
        let kind = match &cmd.kind {
            CommandKind::Search { untimed: false, .. } => "timed search",
            CommandKind::Search { untimed: true, .. } => "untimed search",
            CommandKind::FindLatest { .. } => "find latest",
            CommandKind::FindEarliest { .. } => "find earliest",
            CommandKind::Tsim { .. } => "simulation",
            CommandKind::Trew { .. } => "rewrite",
        };
        println!("{kind} on {}, strategy of {} nodes", cmd.model, size(&cmd.strategy));
        println!("  {cmd}");
    }
}

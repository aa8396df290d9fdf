//! Shortest and longest time until the sender first records a round trip.

use tstrat::analysis::{run_command, Limits};
use tstrat::builtin::builtin_model;
use tstrat::lang::parse_command;

const RECORDED: &str = "(matches {< snd : Sender | rtt : X, ATTS > CONF} s.t. X =/= 0 and X =/= INF)";

fn main() {
    let m = builtin_model("rtt").unwrap();
    for (which, strategy) in [("earliest", "action or delay"), ("latest", "action or delay"), ("latest", "eager")] {
        let text = format!("find {which} in rtt : init => {RECORDED} using {strategy} with sampling fixed-time 1");
        let r = run_command(&parse_command(&text).unwrap(), &m, &Limits::default()).unwrap();
        for s in &r.solutions {
            println!("{which:>8} with {strategy:<15} {}", s.state);
        }
    }
}

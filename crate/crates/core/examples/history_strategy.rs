//! A strategy that remembers how many rounds the sender skipped, and how
//! much of the state space it leaves out.

use tstrat::analysis::{run_command, Limits};
use tstrat::builtin::builtin_model;
use tstrat::lang::parse_command;

const SKIP_AT_MOST_TWICE: &str = "delay or
    if matches {< S : Sender | timer : 0, ATTS > CONF} in time T
    then if (matches ('C |-> N) s.t. N <= 1)
         then apply skipRound ; (get ('C |-> N) and set ('C |-> N + 1))
         else apply send ; (get ('C |-> N) and set ('C |-> 0))
    else action";

fn main() {
    let m = builtin_model("rtt-idle").unwrap();
    for (name, strategy) in [("bounded skipping", SKIP_AT_MOST_TWICE), ("unrestricted", "action or delay")] {
        let text = format!(
            "tsearch in rtt-idle : init => matches {{STATE}} in time T using {strategy} \
             with sampling max-time with default 4 in time [0, 100000]"
        );
        let r = run_command(&parse_command(&text).unwrap(), &m, &Limits::default()).unwrap();
        let max_counter = r.solutions.iter().filter_map(|s| s.history.get("C")).max().map(ToString::to_string);
        println!("{name}: {} states, largest counter {}", r.solutions.len(), max_counter.unwrap_or_default());
    }
}

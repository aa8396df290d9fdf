//! When can an RTT of 20 be recorded? The answer depends on how time is
//! sampled.

use tstrat::analysis::{run_command, Limits};
use tstrat::builtin::builtin_model;
use tstrat::lang::parse_command;

fn main() {
    let m = builtin_model("rtt").unwrap();
    let goal = "matches {CONF < S : Sender | rtt : 20, ATTS >} in time R";
    for sampling in [
        "fixed-time 1",
        "max-time with default 4",
        "switch when matches {CONF dly(M, T1, T2)} in time R do fixed-time 1 otherwise max-time with default 1",
    ] {
        let cmd = parse_command(&format!(
            "tsearch [2] in rtt : init => {goal} using delay or action with sampling {sampling} in time [0, 10000]"
        ))
        .unwrap();
        let r = run_command(&cmd, &m, &Limits::default()).unwrap();
        let clocks: Vec<u64> = r.solutions.iter().map(|s| s.clock()).collect();
        println!("{sampling}\n    clocks {clocks:?}, {} states", r.stats.states_explored);
    }
}

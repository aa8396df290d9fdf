//! Deadline misses in a two-server scheduler with capacity sharing,
//! breadth first and depth first.

use std::collections::HashSet;

use tstrat::analysis::{run_command, Limits};
use tstrat::builtin::builtin_model;
use tstrat::lang::parse_command;
use tstrat::report::stats_line;

fn main() {
    let m = builtin_model("cash-lite").unwrap();
    let body = "in cash-lite : init => matches {CONF deadlineMiss(S)} in time T \
                using action or delay with sampling fixed-time 1 in time [0, 12]";
    let mut sets = Vec::new();
    for cmd in ["tsearch [1]", "dtsearch [1]", "tsearch", "dtsearch"] {
        let r = run_command(&parse_command(&format!("{cmd} {body}")).unwrap(), &m, &Limits::default()).unwrap();
        println!("{cmd:<12} {:>5} misses  {}", r.solutions.len(), stats_line(&r.stats));
        if !cmd.contains('[') {
            sets.push(r.solutions.into_iter().map(|s| s.state).collect::<HashSet<_>>());
        }
    }
    println!("same misses either way: {}", sets[0] == sets[1]);
}

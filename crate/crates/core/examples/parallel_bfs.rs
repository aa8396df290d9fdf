//! Breadth-first exploration on several threads gives the same answer, in
//! the same order, as on one.

use std::time::Instant;

use tstrat::analysis::{run_command, Limits};
use tstrat::builtin::builtin_model;
use tstrat::lang::parse_command;

fn main() {
    let m = builtin_model("cash-lite").unwrap();
    let cmd = parse_command(
        "tsearch in cash-lite : init => matches {C} in time T \
         using action or delay with sampling fixed-time 1 in time [0, 9]",
    )
    .unwrap();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    let mut answers = Vec::new();
    for parallel in [1, threads] {
        let start = Instant::now();
        let r = run_command(&cmd, &m, &Limits { parallel: Some(parallel), ..Default::default() }).unwrap();
        println!("{parallel:>2} threads: {} states in {:?}", r.solutions.len(), start.elapsed());
        answers.push(r.solutions);
    }
    println!("identical: {}", answers[0] == answers[1]);
}

//! One behavior of the RTT protocol up to time 10000, printed round by round.

use tstrat::builtin::builtin_model;
use tstrat::lang::{parse_dstrat, parse_tstrat};
use tstrat::semantics::eval_round;

fn main() {
    let m = builtin_model("rtt").unwrap();
    let mu = parse_dstrat("delay or action").unwrap();
    let tau = parse_tstrat("max-time with default 4").unwrap();

    let mut s = m.init.clone();
    let mut round = 0;
    while s.clock() < 10_000 {
        let next = eval_round(&mu, &tau, &s, &m);
        let Some(first) = next.iter().next() else {
            println!("stuck after {round} rounds");
            return;
        };
        s = first.clone();
        round += 1;
        println!("{round:>3}  {}", s.clocked);
    }
}

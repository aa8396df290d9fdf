//! Forgetting the global clock after every tick makes the search space
//! finite when nothing else in the state keeps growing.

use tstrat::analysis::{run_command, Limits};
use tstrat::lang::parse_command;
use tstrat::model::load_model;

const BLINKER: &str = "
model blinker

class Blinker | static on : Bool, timer left : Time

rule toggle:
  < B : Blinker | on : X, left : 0 >
  =>
  < B : Blinker | on : if X then false else true fi, left : 3 >

init: { < b : Blinker | on : false, left : 3 > } in time 0
";

fn main() {
    let m = load_model(BLINKER).unwrap();
    let body = "in blinker : init => matches {< b : Blinker | on : true >} \
                using action or delay with sampling fixed-time 1";
    let limits = Limits { max_states: Some(10_000), ..Default::default() };
    for cmd in ["usearch", "tsearch"] {
        let r = run_command(&parse_command(&format!("{cmd} {body}")).unwrap(), &m, &limits).unwrap();
        println!("{cmd}: {:?} after {} states, {} solutions", r.status, r.stats.states_explored, r.solutions.len());
        for s in r.solutions.iter().take(4) {
            println!("    {}", s.state);
        }
    }
}

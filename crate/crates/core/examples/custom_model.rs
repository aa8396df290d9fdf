//! A model written inline: a lamp that must be switched off within five
//! time units of being switched on. The command is built from syntax trees
//! rather than parsed.

use tstrat::analysis::{run_command, Limits};
use tstrat::config::sym;
use tstrat::lang::{parse_condition, Command, CommandKind, DStrat, Exploration, TStrat};
use tstrat::model::load_model;
use tstrat::time::{Interval, TimeInf};

const LAMP: &str = "
model lamp

class Lamp | static on : Bool, timer left : TimeInf, clock used : Time

rule switchOn:
  < L : Lamp | on : false >
  =>
  < L : Lamp | on : true, left : 5 >

rule switchOff:
  < L : Lamp | on : true >
  =>
  < L : Lamp | on : false, left : INF >

init: { < lamp : Lamp | on : false, left : INF, used : 0 > } in time 0
";

fn main() {
    let m = load_model(LAMP).unwrap();
    let cmd = Command {
        kind: CommandKind::Search {
            untimed: false,
            order: Exploration::BreadthFirst,
            n: None,
            depth: None,
            cond: parse_condition("matches {< lamp : Lamp | on : true, left : 0 >} in time T").unwrap(),
            interval: Some(Interval::new(0, TimeInf::Finite(12)).unwrap()),
        },
        model: "lamp".into(),
        strategy: DStrat::or(
            DStrat::Apply(sym("switchOn")),
            DStrat::or_else(DStrat::Delay, DStrat::Apply(sym("switchOff"))),
        ),
        sampling: TStrat::FixedTime(5),
    };
    println!("{cmd}");
    let r = run_command(&cmd, &m, &Limits::default()).unwrap();
    for s in &r.solutions {
        println!("  {}", s.state);
    }
}

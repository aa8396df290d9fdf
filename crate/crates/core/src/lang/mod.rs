//! The strategy and command language: syntax tree, parser and printer.

mod ast;
mod parse;
mod print;

pub use ast::{Command, CommandKind, DStrat, Exploration, SCond, Strategy, TStrat};
pub use parse::{parse_command, parse_commands, parse_condition, parse_dstrat, parse_strategy, parse_tstrat};

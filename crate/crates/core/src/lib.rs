//! Real-time rewrite theories driven by timed strategies.
//!
//! A [`model::Model`] describes objects, delayed messages and instantaneous
//! rules; time advances through a tick whose duration is bounded by the
//! maximal time elapse. Strategies (see [`lang`]) choose which rules fire and
//! how time is sampled, and [`analysis`] runs simulation and reachability
//! commands over them.

pub mod analysis;
pub mod builtin;
pub mod cli;
pub mod config;
pub mod lang;
pub mod lexer;
pub mod model;
pub mod report;
pub mod semantics;
pub mod time;

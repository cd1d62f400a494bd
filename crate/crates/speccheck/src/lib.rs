//! Terminal, batch and HTTP front ends for speccheck sessions.

pub mod cli;
pub mod repl;
pub mod server;

//! Scenario parsing, subcommands and report output for the `fastlight` tool.

pub mod commands;
pub mod output;
pub mod scenario;

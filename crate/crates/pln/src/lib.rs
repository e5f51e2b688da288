//! File formats, reports and subcommand implementations for the `pln` tool.

pub mod commands;
pub mod expr_gen;
pub mod formats;
pub mod report;

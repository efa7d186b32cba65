//! File formats and subcommands of the `tiefree` binary.

pub mod commands;
pub mod files;

//! File formats and commands behind the `persinv` binary.

pub mod commands;
pub mod formats;

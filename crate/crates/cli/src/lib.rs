//! File formats for the `stablemanip` command.

pub mod format;
pub mod results;

//! File formats, fixture names, reports and command implementations for
//! the `lcsc` tool.

pub mod commands;
pub mod fixture;
pub mod format;
pub mod report;

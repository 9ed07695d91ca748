//! File formats, JSON reports and the `ans` command line on top of
//! `ans-core`.

pub mod cli;
pub mod format;
pub mod report;

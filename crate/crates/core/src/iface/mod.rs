//! File format, fixture catalog, reports and the command-line front end.

pub mod catalog;
pub mod cli;
pub mod format;
pub mod report;

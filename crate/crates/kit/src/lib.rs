//! File formats, fixtures and the command line around `sabinin-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod report;

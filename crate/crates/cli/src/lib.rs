//! Command-line front end: the example registry, the analysis pipeline and
//! the subcommands, each producing a [`report::Report`].

pub mod analyze;
pub mod commands;
pub mod error;
pub mod params;
pub mod registry;
pub mod report;

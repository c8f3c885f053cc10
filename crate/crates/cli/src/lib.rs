//! Library backing the `tpms` command-line tool.
//!
//! The binary is a thin argument-parsing shell over these modules:
//! [`config`] declares the JSON study schema, [`pipeline`] runs the
//! geometry/mesh/solve stages, [`commands`] implements one function per
//! subcommand, and [`csvio`]/[`svg`] handle the report formats.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod pipeline;
pub mod svg;

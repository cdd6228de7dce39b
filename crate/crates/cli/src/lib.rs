//! File formats, run configuration and the parallel sweep driver for the
//! `flatlatt` command line tool.

pub mod config;
pub mod formats;
pub mod runner;

pub use config::RunConfig;

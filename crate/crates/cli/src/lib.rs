//! Experiment runner for the graphrep toolkit: JSON-configured subcommands
//! writing CSV or JSON results.

pub mod commands;
pub mod config;

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "GRAPHREP_THREADS";

//! Command-line front end for `qdist-core`.

pub mod commands;
pub mod config;
pub mod error;

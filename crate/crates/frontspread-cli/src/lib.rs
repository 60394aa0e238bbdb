//! Library side of the `frontspread` command-line tool: config parsing,
//! experiment orchestration, sweeping, artifact writing, and plotting.
//! The binary in `main.rs` is a thin clap wrapper over these modules.

pub mod artifacts;
pub mod config;
pub mod experiment;
pub mod plots;
pub mod sweep;

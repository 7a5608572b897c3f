//! Text formats and commands on top of `treemap-core`.

pub mod commands;
pub mod io;

pub use treemap_core as core;

//! Batch verification runner: command-line configuration, the on-disk
//! component cache, and deterministic report rendering.

pub mod cache;
pub mod report;
pub mod run;

pub use cache::{CacheStats, DiskCache};
pub use report::Report;
pub use run::{run, Command, Format, RunConfig};

//! Files, statistics and batch experiments around [`mmfctt_core`].
//!
//! - [`itc`]: ITC2007 track 3 instances and solution files.
//! - [`stats`]: one-sided Wilcoxon rank-sum test on exact ranks.
//! - [`harness`]: experiment specs, run records, aggregation and reports.

pub mod harness;
pub mod itc;
pub mod stats;

pub use mmfctt_core as core;

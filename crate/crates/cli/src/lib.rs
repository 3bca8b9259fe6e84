//! Command implementations behind the `tailrank` binary.
//!
//! The binary is a thin orchestrator: every command resolves its full
//! configuration first, computes everything in memory, and only then writes
//! its output files plus a run manifest, so a failed run leaves no partial
//! output and a recorded manifest is sufficient to replay the run
//! byte-identically (timestamps excluded).

// Validation deliberately uses `!(x > 0)` rather than `x <= 0`: the negated
// form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod ingest;
pub mod manifest;

pub use commands::{cmd_estimate, cmd_experiment, cmd_score, cmd_simulate};

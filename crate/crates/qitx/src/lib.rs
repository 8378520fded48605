//! Command-line front end and file formats for `qitx-core`.
//!
//! States are read from small JSON files (see [`input`]); results are
//! written as JSON with 17 significant digits or as CSV with a
//! `<out>.meta.json` sidecar (see [`output`]). Every output carries enough
//! metadata to rerun the command and get identical bytes.
//!
//! Exit codes: `0` success (including rank-deficiency reports), `2` bad
//! input file or arguments, `3` unphysical input, `4` internal failure.

pub mod cli;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;
pub mod report;

pub use error::CliError;

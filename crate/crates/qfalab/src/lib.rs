//! File formats, threaded search and the command-line front end for
//! `qfalab-core`.

pub mod cli;
pub mod formats;
pub mod search;

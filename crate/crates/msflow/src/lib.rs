//! Text formats, fixture lookup, reports and the command-line front end for
//! [`msflow_core`].
//!
//! * [`msf`] - systems (`dim`, `rest`, `orbit`, `conn`, ...)
//! * [`msc`] - orbit-removal choice descriptors
//! * [`pos`] - labelled posets

pub mod cli;
pub mod commands;
pub mod fixtures;
mod lines;
pub mod msc;
pub mod msf;
pub mod pos;
pub mod report;

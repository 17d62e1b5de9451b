//! Command-line harness for the cell-switching simulator: scenario files,
//! sweep execution, and plot-ready CSV/JSON outputs.
//!
//! The numerical model lives in the core crate; this crate only adds IO,
//! parallel sweep plumbing, and file formats.

pub mod config;
pub mod output;
pub mod runner;

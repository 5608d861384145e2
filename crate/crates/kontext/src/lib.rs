//! Parallel scans, output formats and the command-line front end for
//! [`kontext_core`].
//!
//! The `kontext` binary exposes `classical`, `scan`, `sweep`, `points` and
//! `lyapunov` subcommands. Results are written as CSV, JSON and SVG.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod formats;
pub mod parallel;
pub mod svg;

pub use error::{Error, Result};
pub use kontext_core as core;

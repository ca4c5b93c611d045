//! Command-line front end for `qslice`: point evaluation, transforms, tables
//! and the verification suites.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod literal;
pub mod report;
pub mod series_json;
pub mod suites;

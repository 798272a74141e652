//! Command-line front end: LMFDB client, file formats, reports and self-tests
//! built on `adelic-core`.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod client;
pub mod error;
pub mod fixtures;
pub mod numerics;
pub mod pipeline;
pub mod report;
pub mod schema;
pub mod selftest;

pub use error::AppError;

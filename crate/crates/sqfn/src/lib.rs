//! Field IO, experiment runners, reports and the `sqfn` command line on top
//! of `sqfn-core`.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod io;
pub mod lab;
pub mod report;

pub use error::{Result, SqfnError};
pub use report::ExperimentReport;

//! Command-line front end: medical report, parameter grids, property suites
//! and model evaluation.

pub mod builtin;
pub mod check;
pub mod error;
pub mod gen;
pub mod grid;
pub mod model;
pub mod report;

pub use error::{CliError, Result};

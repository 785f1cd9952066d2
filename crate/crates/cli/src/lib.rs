//! Command-line front end for the `aaa-mor-core` reducers.

pub mod app;
pub mod compare;
pub mod error;
pub mod model_file;
pub mod reduce;
pub mod sigma;

pub use error::{CliError, Result};

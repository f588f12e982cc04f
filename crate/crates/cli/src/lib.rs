//! File formats, reports and the command-line driver for `wradius-core`.

pub mod app;
pub mod error;
pub mod matrix_io;
pub mod report;

pub use app::run;
pub use error::{CliError, Result};
pub use matrix_io::{matrix_to_json, parse_matrix, read_matrix};
pub use report::{from_json, render, to_csv, to_json, write_report, Format};

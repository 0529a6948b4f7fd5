//! Library side of the `ab-vortex` command-line tool; the binary is a thin
//! wrapper so that integration tests can exercise parsing, table building,
//! and the verification suite directly.

pub mod config;
pub mod run;
pub mod table;
pub mod threads;

pub use config::{Action, Cli, OutputFormat, RunConfig, Subcmd, UnitMode};
pub use table::{parse_csv_metadata, parse_json_metadata, ColumnSpec, ResultTable};

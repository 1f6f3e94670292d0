//! Library half of the `mkdv` command: config parsing, run artefacts, tables,
//! sweeps and verification.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod sweep;
pub mod table;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use report::StoredReport;

//! Batch runner behind the `lclab` binary: configuration, suites and
//! report emission.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{parse_config, validate_config, ConfigError, Format, RunConfig, Suite};
pub use report::{emit, Report, Table};
pub use suites::run;

//! Verification driver: suites, JSON reports and curvature profiles.

pub mod cli;
pub mod profile;
pub mod report;
pub mod suites;

pub use cli::run;
pub use report::{report_schema, CheckReport, RunManifest};
pub use suites::{Config, Suite};

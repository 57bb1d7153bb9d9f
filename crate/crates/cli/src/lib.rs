//! Command-line pipelines around the `maximin` library: alpha calibration,
//! benchmarking, reporting and meta-learner workflows.

pub mod app;
pub mod cache;
pub mod commands;
pub mod config;
pub mod manifest;
pub mod tables;

pub use app::run;
pub use config::RunConfig;

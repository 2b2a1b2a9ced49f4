//! Command-line front end: the instance-file format, the commands and their
//! reports.

pub mod commands;
pub mod instance;
pub mod report;

pub use commands::{load, load_str, run, CliError, Command, Loaded};
pub use instance::{Diagnostic, InstanceError, InstanceFile};
pub use report::{Payload, Report};

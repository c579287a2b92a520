//! Library side of the `openness` command: spec parsing, task dispatch,
//! reports and sweeps.

pub mod error;
pub mod report;
pub mod spec;
pub mod sweep;
pub mod tasks;

pub use error::CliError;
pub use report::Report;
pub use spec::ProblemSpec;

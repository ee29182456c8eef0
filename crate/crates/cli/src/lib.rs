//! Command-line front end: session files, operator documents, the
//! reproduction pipeline and command implementations.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
pub mod golden;
pub mod lambda;
pub mod report;

pub use config::{parse_session, SessionConfig};
pub use emit::{Format, OperatorDoc};
pub use error::CliError;

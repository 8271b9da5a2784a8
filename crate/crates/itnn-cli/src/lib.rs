//! IO companion to the `itnn` core: CSV dataset and series formats, the
//! versioned JSON model file, the benchmark harness, and the `itnn` binary's
//! subcommand implementations.

pub mod bench;
pub mod cli;
pub mod commands;
pub mod data;
pub mod error;
pub mod model_file;

pub use error::{CliError, Result};
pub use model_file::{Model, SavedModel, WizardBank};

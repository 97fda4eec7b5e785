//! Configuration files, single runs, sweeps and their output files.

pub mod config;
pub mod output;
pub mod run;
pub mod sweep;

pub use config::{parse_config, parse_sweep_config, RunConfig, SweepConfig};
pub use run::{run, Classification, RunOutcome};
pub use sweep::{sweep, SweepResult};

//! Command implementations behind the `mhd2d` binary.

pub mod check;
pub mod config_io;
pub mod run_cmd;
pub mod sweep;

pub use check::{cmd_check, run_checks, CheckItem, CheckReport, Suite};
pub use config_io::{emit_config, parse_config, parse_config_str, parse_sweep, parse_sweep_str, SweepSpec};
pub use run_cmd::{cmd_resume, cmd_run, execute, read_diagnostics, RunManifest, RunOutcome};
pub use sweep::{cmd_sweep, SweepRow};

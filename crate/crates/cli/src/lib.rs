//! Command implementations behind the `bomproof` binary, exposed as a
//! library so integration tests and benchmarks can drive them directly.

pub mod benchcsv;
pub mod commands;
pub mod fixtures;
pub mod scenario;
pub mod workspace;

pub use benchcsv::{cmd_bench, BenchArgs};
pub use commands::{
    cmd_audit, cmd_prove, cmd_setup, cmd_verify, AuditArgs, CliFailure, CmdOutcome, ProveArgs,
    SetupArgs, VerifyArgs,
};
pub use scenario::{cmd_scenario, ScenarioArgs};

use clap::{Parser, Subcommand};

use bomproof_cli::{
    cmd_audit, cmd_bench, cmd_prove, cmd_scenario, cmd_setup, cmd_verify, AuditArgs, BenchArgs,
    CmdOutcome, ProveArgs, ScenarioArgs, SetupArgs, VerifyArgs,
};

/// Dual-tree SBOM attestation: publish tree roots, prove dependency
/// authenticity and policy compliance, verify against public roots.
#[derive(Parser)]
#[command(name = "bomproof", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commit a registry snapshot into a Package Tree and publish its root.
    Setup(SetupArgs),
    /// Evaluate policies, propagate non-compliance, publish Shadow Tree roots.
    Audit(AuditArgs),
    /// Fold an SBOM into a proof and emit the redacted public SBOM.
    Prove(ProveArgs),
    /// Verify a proof against trusted roots and a delivered artifact.
    Verify(VerifyArgs),
    /// Run one scripted lifecycle scenario (s1..s4).
    Scenario(ScenarioArgs),
    /// Measure opening size, storage, prove/verify time over a size grid.
    Bench(BenchArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome: CmdOutcome = match &cli.command {
        Command::Setup(args) => cmd_setup(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Prove(args) => cmd_prove(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Scenario(args) => cmd_scenario(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(result) => println!("{result}"),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            println!("{}", failure.json);
            std::process::exit(failure.exit_code);
        }
    }
}

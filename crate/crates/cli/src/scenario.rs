//! Lifecycle scenario harness: scripted multi-party runs over the demo
//! supply chain, each checking that the protocol produces the expected
//! outcome.
//!
//! - `s1` baseline: compliant SBOM proves and verifies.
//! - `s2` injection: an SBOM naming an unknown package fails at prove time.
//! - `s3` revocation: the auditor flags a dependency and republishes the
//!   Shadow Tree root; the stale proof is rejected with a root mismatch.
//! - `s4` remediation: the vendor ships a patched SBOM and a fresh proof
//!   against the updated root, which verifies.

use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Value};

use bomproof_core::error::Error;
use bomproof_core::policy::PolicyConstraint;

use crate::commands::{
    cmd_audit, cmd_prove, cmd_setup, cmd_verify, AuditArgs, CliFailure, CmdOutcome, ProveArgs,
    SetupArgs, VerifyArgs,
};
use crate::fixtures;
use crate::workspace;

#[derive(Args, Debug)]
pub struct ScenarioArgs {
    /// Scenario name: s1, s2, s3, or s4.
    #[arg(long)]
    pub name: String,
    /// Working directory for the scenario's files.
    #[arg(long)]
    pub out: PathBuf,
    /// Randomizer seed; fixed by default so runs are byte-stable.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn io_failure(e: std::io::Error) -> CliFailure {
    let err = Error::Io(e);
    CliFailure {
        exit_code: 2,
        json: json!({ "error": err.kind(), "message": err.to_string() }),
        message: err.to_string(),
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliFailure> {
    std::fs::write(path, contents).map_err(io_failure)
}

/// Common fixture state prepared for every scenario: published PT root and
/// two audit generations (before and after the logging library is flagged).
struct Stage {
    dir: PathBuf,
    setup_dir: PathBuf,
    audit_v1: PathBuf,
    audit_v2: PathBuf,
    artifact_v1: PathBuf,
    artifact_v2: PathBuf,
    seed: u64,
}

fn prepare(out: &Path, seed: u64) -> Result<Stage, CliFailure> {
    std::fs::create_dir_all(out).map_err(io_failure)?;
    let registry_path = out.join("registry.jsonl");
    fixtures::write_jsonl(&registry_path, &fixtures::demo_registry()).map_err(|e| CliFailure {
        exit_code: 2,
        json: json!({ "error": e.kind(), "message": e.to_string() }),
        message: e.to_string(),
    })?;

    let setup_dir = out.join("pm");
    cmd_setup(&SetupArgs {
        registry: registry_path.clone(),
        depth: fixtures::DEMO_DEPTH,
        out: setup_dir.clone(),
    })?;

    // First audit generation: only the TLS library is denied.
    let policy_v1 = PolicyConstraint::deny_list("sec", ["pkg:openssl@0.10.55".to_string()]);
    let policy_v1_path = out.join("policy.sec.v1.json");
    write(
        &policy_v1_path,
        &(serde_json::to_string_pretty(&policy_v1).expect("policy serializes") + "\n"),
    )?;
    let audit_v1 = out.join("audit-v1");
    cmd_audit(&AuditArgs {
        registry: registry_path.clone(),
        depth: fixtures::DEMO_DEPTH,
        policies: vec![policy_v1_path],
        out: audit_v1.clone(),
        compose: None,
    })?;

    // Second generation: the auditor additionally flags the logging library.
    let policy_v2 = PolicyConstraint::deny_list(
        "sec",
        [
            "pkg:openssl@0.10.55".to_string(),
            "pkg:log4rs@1.2.0".to_string(),
        ],
    );
    let policy_v2_path = out.join("policy.sec.v2.json");
    write(
        &policy_v2_path,
        &(serde_json::to_string_pretty(&policy_v2).expect("policy serializes") + "\n"),
    )?;
    let audit_v2 = out.join("audit-v2");
    cmd_audit(&AuditArgs {
        registry: registry_path,
        depth: fixtures::DEMO_DEPTH,
        policies: vec![policy_v2_path],
        out: audit_v2.clone(),
        compose: None,
    })?;

    let artifact_v1 = out.join("banking-core-2.4.1.bin");
    std::fs::write(&artifact_v1, fixtures::demo_artifact("2.4.1")).map_err(io_failure)?;
    let artifact_v2 = out.join("banking-core-2.4.2.bin");
    std::fs::write(&artifact_v2, fixtures::demo_artifact("2.4.2")).map_err(io_failure)?;

    Ok(Stage {
        dir: out.to_path_buf(),
        setup_dir,
        audit_v1,
        audit_v2,
        artifact_v1,
        artifact_v2,
        seed,
    })
}

fn st_root(audit_dir: &Path) -> PathBuf {
    audit_dir.join(workspace::st_root_file("sec"))
}

fn prove_args(
    stage: &Stage,
    sbom: PathBuf,
    audit_dir: &Path,
    artifact: &Path,
    tag: &str,
) -> ProveArgs {
    ProveArgs {
        sbom,
        hide: "1".to_string(),
        pt: stage.setup_dir.clone(),
        st_root: st_root(audit_dir),
        artifact: artifact.to_path_buf(),
        backend: "transcript".to_string(),
        seed: Some(stage.seed),
        salted: false,
        out: stage.dir.join(format!("{tag}.proof.json")),
    }
}

fn outcome(name: &str, expected: &str, actual: &str, detail: Value) -> CmdOutcome {
    let matches = expected == actual;
    let result = json!({
        "command": "scenario",
        "name": name,
        "expected": expected,
        "actual": actual,
        "detail": detail,
        "match": matches,
    });
    eprintln!("scenario {name}: expected {expected}, actual {actual}");
    if matches {
        Ok(result)
    } else {
        Err(CliFailure {
            exit_code: 1,
            json: result,
            message: format!("scenario {name}: expected {expected} but observed {actual}"),
        })
    }
}

pub fn cmd_scenario(args: &ScenarioArgs) -> CmdOutcome {
    let stage = prepare(&args.out, args.seed)?;
    match args.name.as_str() {
        "s1" => run_s1(&stage),
        "s2" => run_s2(&stage),
        "s3" => run_s3(&stage),
        "s4" => run_s4(&stage),
        other => Err(CliFailure {
            exit_code: 2,
            json: json!({
                "error": "UsageError",
                "message": format!("unknown scenario {other:?}; expected s1|s2|s3|s4"),
            }),
            message: format!("unknown scenario {other:?}"),
        }),
    }
}

/// Baseline: compliant SBOM, current roots, proof accepted.
fn run_s1(stage: &Stage) -> CmdOutcome {
    let sbom_path = stage.dir.join("banking-core-2.4.1.sbom.json");
    write(
        &sbom_path,
        &(fixtures::banking_sbom().to_json().expect("sbom serializes") + "\n"),
    )?;
    let prove_result = cmd_prove(&prove_args(
        stage,
        sbom_path,
        &stage.audit_v1,
        &stage.artifact_v1,
        "s1",
    ))?;
    let verify = cmd_verify(&VerifyArgs {
        proof: stage.dir.join("s1.proof.json"),
        pt_root: stage.setup_dir.join(workspace::PT_ROOT_FILE),
        st_root: st_root(&stage.audit_v1),
        artifact: stage.artifact_v1.clone(),
    });
    match verify {
        Ok(_) => outcome("s1", "Valid", "Valid", prove_result),
        Err(f) if f.exit_code == 1 => outcome("s1", "Valid", "Invalid", f.json),
        Err(f) => Err(f),
    }
}

/// Injection: the SBOM names a package the registry never published, so
/// proving fails. The machine-readable failure carries only the ordinal.
fn run_s2(stage: &Stage) -> CmdOutcome {
    let sbom_path = stage.dir.join("banking-core-injected.sbom.json");
    write(
        &sbom_path,
        &(fixtures::unknown_package_sbom()
            .to_json()
            .expect("sbom serializes")
            + "\n"),
    )?;
    let prove_result = cmd_prove(&prove_args(
        stage,
        sbom_path,
        &stage.audit_v1,
        &stage.artifact_v1,
        "s2",
    ));
    match prove_result {
        Err(f) if f.exit_code == 3 => outcome("s2", "Invalid", "Invalid", f.json),
        Err(f) => Err(f),
        Ok(result) => outcome("s2", "Invalid", "Valid", result),
    }
}

/// Revocation: a proof generated against the first audit generation is
/// checked against the republished root and rejected.
fn run_s3(stage: &Stage) -> CmdOutcome {
    let sbom_path = stage.dir.join("banking-core-2.4.1.sbom.json");
    write(
        &sbom_path,
        &(fixtures::banking_sbom().to_json().expect("sbom serializes") + "\n"),
    )?;
    cmd_prove(&prove_args(
        stage,
        sbom_path,
        &stage.audit_v1,
        &stage.artifact_v1,
        "s3",
    ))?;
    let verify = cmd_verify(&VerifyArgs {
        proof: stage.dir.join("s3.proof.json"),
        pt_root: stage.setup_dir.join(workspace::PT_ROOT_FILE),
        st_root: st_root(&stage.audit_v2),
        artifact: stage.artifact_v1.clone(),
    });
    match verify {
        Err(f) if f.exit_code == 1 => outcome("s3", "Invalid", "Invalid", f.json),
        Err(f) => Err(f),
        Ok(result) => outcome("s3", "Invalid", "Valid", result),
    }
}

/// Remediation: the patched SBOM drops the flagged dependency and a fresh
/// proof against the updated root verifies.
fn run_s4(stage: &Stage) -> CmdOutcome {
    let sbom_path = stage.dir.join("banking-core-2.4.2.sbom.json");
    write(
        &sbom_path,
        &(fixtures::patched_banking_sbom()
            .to_json()
            .expect("sbom serializes")
            + "\n"),
    )?;
    let mut args = prove_args(stage, sbom_path, &stage.audit_v2, &stage.artifact_v2, "s4");
    // The patched SBOM has a single entry; nothing needs hiding.
    args.hide = "none".to_string();
    let prove_result = cmd_prove(&args)?;
    let verify = cmd_verify(&VerifyArgs {
        proof: stage.dir.join("s4.proof.json"),
        pt_root: stage.setup_dir.join(workspace::PT_ROOT_FILE),
        st_root: st_root(&stage.audit_v2),
        artifact: stage.artifact_v2.clone(),
    });
    match verify {
        Ok(_) => outcome("s4", "Valid", "Valid", prove_result),
        Err(f) if f.exit_code == 1 => outcome("s4", "Valid", "Invalid", f.json),
        Err(f) => Err(f),
    }
}

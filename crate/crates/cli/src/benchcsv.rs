//! Scalability measurement over a (registry size × dependency count) grid.
//!
//! Emits one CSV row per cell with the header
//! `log2_packages,packages,depth,deps,opening_bytes,tree_nodes,storage_bytes,prove_ms,verify_ms,proof_bytes`.
//! Tree depth is `log2_packages + 2` so the occupancy stays at one quarter;
//! storage is reported as stored-digest count × 32 bytes. Timings are the
//! median of `--reps` runs.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use bomproof_core::error::Error;
use bomproof_core::hashing::content_digest;
use bomproof_core::policy::{build_shadow_tree, compose, PolicySet};
use bomproof_core::registry::build_package_tree;
use bomproof_core::smt::setup;
use bomproof_core::{prove, verify_proof, BackendRegistry, ProveRequest, TranscriptBackend};

use crate::commands::{CliFailure, CmdOutcome};
use crate::fixtures;

pub const CSV_HEADER: &str =
    "log2_packages,packages,depth,deps,opening_bytes,tree_nodes,storage_bytes,prove_ms,verify_ms,proof_bytes";

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated log2 registry sizes, e.g. `10,14`.
    #[arg(long)]
    pub packages: String,
    /// Comma-separated dependency counts per SBOM, e.g. `10,50,100`.
    #[arg(long)]
    pub deps: String,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    /// Fixture seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Timing repetitions per cell (median is reported).
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

fn fail(err: Error) -> CliFailure {
    CliFailure {
        exit_code: 2,
        json: json!({ "error": err.kind(), "message": err.to_string() }),
        message: err.to_string(),
    }
}

fn parse_list(spec: &str, what: &str) -> Result<Vec<u32>, CliFailure> {
    let values: Result<Vec<u32>, _> = spec
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<u32>())
        .collect();
    match values {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(fail(Error::Usage(format!(
            "--{what} must be a comma-separated list of integers"
        )))),
    }
}

fn median_ms(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    samples[samples.len() / 2]
}

pub fn cmd_bench(args: &BenchArgs) -> CmdOutcome {
    let log2_sizes = parse_list(&args.packages, "packages")?;
    let dep_counts = parse_list(&args.deps, "deps")?;
    let reps = args.reps.max(1);

    let registry = BackendRegistry::with_default();
    let mut rows = Vec::new();
    for &log2_packages in &log2_sizes {
        let depth = log2_packages + 2;
        let count = 1usize << log2_packages;
        let params = setup(128, depth).map_err(fail)?;
        let snapshot = fixtures::synthetic_snapshot(count, depth, args.seed).map_err(fail)?;
        let (pt, g_pt, index_map) = build_package_tree(&snapshot, &params).map_err(fail)?;
        let composed = compose(&snapshot, &[]).map_err(fail)?;
        let (st, g_st) = build_shadow_tree(&composed, &index_map, &params).map_err(fail)?;
        let set_id = PolicySet::empty().set_id();
        let artifact = content_digest(b"bench-artifact");

        let opening_bytes = {
            let any_idx = *index_map.values().next().expect("non-empty snapshot");
            pt.open(any_idx).map_err(fail)?.siblings.len() * 32
        };
        let storage_nodes = pt.node_count();

        for &k in &dep_counts {
            let k = (k as usize).min(count);
            let sbom = fixtures::synthetic_sbom(&snapshot, k, args.seed ^ k as u64);
            let request = ProveRequest {
                sbom: &sbom,
                pt: &pt,
                st: &st,
                index_map: &index_map,
                policy_set_id: set_id.clone(),
                artifact_digest: artifact,
                require_hiding: false,
            };

            let mut prove_samples = Vec::with_capacity(reps);
            let mut verify_samples = Vec::with_capacity(reps);
            let mut proof_bytes = 0usize;
            for rep in 0..reps {
                let mut rng = ChaCha20Rng::seed_from_u64(args.seed ^ (rep as u64) << 32);
                let start = Instant::now();
                let proof = prove(&TranscriptBackend, &request, &mut rng).map_err(fail)?;
                prove_samples.push(start.elapsed().as_secs_f64() * 1e3);

                let bytes = proof.to_json_vec().map_err(fail)?;
                proof_bytes = bytes.len();
                let start = Instant::now();
                let verdict = verify_proof(&registry, &proof, &g_pt, &g_st, &set_id, &artifact);
                verify_samples.push(start.elapsed().as_secs_f64() * 1e3);
                if !verdict.is_accept() {
                    return Err(fail(Error::Backend(format!(
                        "bench proof unexpectedly rejected: {verdict}"
                    ))));
                }
            }

            eprintln!(
                "bench: n=2^{log2_packages} depth={depth} k={k} prove={:.3}ms verify={:.3}ms",
                median_ms(prove_samples.clone()),
                median_ms(verify_samples.clone()),
            );
            rows.push(format!(
                "{},{},{},{},{},{},{},{:.3},{:.3},{}",
                log2_packages,
                count,
                depth,
                k,
                opening_bytes,
                storage_nodes,
                storage_nodes * 32,
                median_ms(prove_samples),
                median_ms(verify_samples),
                proof_bytes
            ));
        }
    }

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| fail(Error::Io(e)))?;
        }
    }
    std::fs::write(&args.out, csv).map_err(|e| fail(Error::Io(e)))?;

    Ok(json!({
        "command": "bench",
        "csv": args.out.display().to_string(),
        "rows": rows.len(),
    }))
}

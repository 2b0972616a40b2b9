//! The setup / audit / prove / verify commands.
//!
//! Every command prints one machine-readable JSON object on stdout; human
//! logs go to stderr. Exit codes are a stable contract: 0 success or
//! Accept, 1 Reject, 2 input or usage error, 3 prove-time compliance
//! failure.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use bomproof_core::error::Error;
use bomproof_core::hashing::content_digest;
use bomproof_core::policy::{
    build_shadow_tree, compose, evaluate_policy, ComplianceMap, PolicyConstraint, PolicySet,
};
use bomproof_core::registry::{build_package_tree, load_snapshot_path, RegistrySnapshot};
use bomproof_core::sbom::{redact, SaltMode, Sbom};
use bomproof_core::smt::{setup, SparseTree, TreeKind};
use bomproof_core::{
    prove, verify_proof_bytes, BackendRegistry, Digest, ProveRequest, PublicParams, RootFile,
    Verdict,
};

use crate::workspace;

/// A failed command: exit code plus the machine-readable error object.
#[derive(Debug)]
pub struct CliFailure {
    pub exit_code: i32,
    pub json: Value,
    pub message: String,
}

pub type CmdOutcome = Result<Value, CliFailure>;

/// Exit 2: bad input or usage.
fn input_error(err: Error) -> CliFailure {
    CliFailure {
        exit_code: 2,
        json: json!({ "error": err.kind(), "message": err.to_string() }),
        message: err.to_string(),
    }
}

fn usage(msg: impl Into<String>) -> CliFailure {
    input_error(Error::Usage(msg.into()))
}

/// Exit 3: prove-time compliance failure. The machine object carries the
/// step ordinal only, never the dependency identity.
fn compliance_failure(err: &Error) -> CliFailure {
    let step = match err {
        Error::UnresolvableDependency { step } | Error::NonCompliantStep { step } => *step,
        _ => 0,
    };
    CliFailure {
        exit_code: 3,
        json: json!({ "error": err.kind(), "step": step }),
        message: err.to_string(),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliFailure> {
    std::fs::create_dir_all(dir).map_err(|e| input_error(Error::Io(e)))
}

#[derive(Args, Debug)]
pub struct SetupArgs {
    /// Registry snapshot (JSONL, one package record per line).
    #[arg(long)]
    pub registry: PathBuf,
    /// Tree depth D; capacity is 2^D.
    #[arg(long)]
    pub depth: u32,
    /// Output directory for the published root, index map, and snapshot copy.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_setup(args: &SetupArgs) -> CmdOutcome {
    let params = setup(128, args.depth).map_err(input_error)?;
    let snapshot = load_snapshot_path(&args.registry, args.depth).map_err(input_error)?;
    let (_, root, index_map) = build_package_tree(&snapshot, &params).map_err(input_error)?;

    ensure_dir(&args.out)?;
    let root_file = RootFile::package_tree(root, &params);
    workspace::write_root_file(&args.out, workspace::PT_ROOT_FILE, &root_file)
        .map_err(input_error)?;
    workspace::write_index_map(&args.out, &index_map).map_err(input_error)?;
    workspace::write_registry_copy(&args.out, &snapshot).map_err(input_error)?;

    eprintln!(
        "setup: committed {} packages at depth {}; root {}",
        snapshot.len(),
        args.depth,
        root
    );
    Ok(json!({
        "command": "setup",
        "depth": args.depth,
        "packages": snapshot.len(),
        "root": root.to_hex(),
        "out": args.out.display().to_string(),
    }))
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    /// Registry snapshot the Shadow Trees must stay isomorphic to.
    #[arg(long)]
    pub registry: PathBuf,
    /// Tree depth; must match the Package Tree's.
    #[arg(long, default_value_t = 20)]
    pub depth: u32,
    /// Policy files (JSON), one per policy.
    #[arg(long, num_args = 1.., required = true)]
    pub policies: Vec<PathBuf>,
    /// Output directory for per-policy roots and compliance exports.
    #[arg(long)]
    pub out: PathBuf,
    /// Additionally publish a composed root for these `+`-joined policy ids.
    #[arg(long)]
    pub compose: Option<String>,
}

pub fn cmd_audit(args: &AuditArgs) -> CmdOutcome {
    let params = setup(128, args.depth).map_err(input_error)?;
    let snapshot = load_snapshot_path(&args.registry, args.depth).map_err(input_error)?;
    let index_map =
        bomproof_core::registry::derive_index_map(&snapshot, args.depth).map_err(input_error)?;

    let mut policies = Vec::new();
    for path in &args.policies {
        let bytes = std::fs::read(path).map_err(|e| input_error(Error::Io(e)))?;
        policies.push(PolicyConstraint::from_json(&bytes).map_err(input_error)?);
    }
    let _ = PolicySet::new(policies.clone()).map_err(input_error)?;

    ensure_dir(&args.out)?;
    let mut maps: BTreeMap<String, ComplianceMap> = BTreeMap::new();
    let mut roots = Vec::new();
    for policy in &policies {
        let map = evaluate_policy(&snapshot, policy).map_err(input_error)?;
        let (_, root) =
            build_shadow_tree(&map.propagated, &index_map, &params).map_err(input_error)?;
        let root_file = RootFile::shadow_tree(root, &params, vec![policy.policy_id.clone()]);
        let name = workspace::st_root_file(&policy.policy_id);
        workspace::write_root_file(&args.out, &name, &root_file).map_err(input_error)?;
        let export = serde_json::to_string_pretty(&map)
            .map_err(|e| input_error(Error::Schema(e.to_string())))?;
        std::fs::write(
            args.out.join(workspace::compliance_file(&policy.policy_id)),
            export + "\n",
        )
        .map_err(|e| input_error(Error::Io(e)))?;
        eprintln!("audit: policy {} root {}", policy.policy_id, root);
        roots.push(json!({
            "file": name,
            "policy_set": [policy.policy_id.clone()],
            "root": root.to_hex(),
        }));
        maps.insert(policy.policy_id.clone(), map);
    }

    if let Some(compose_ids) = &args.compose {
        let ids: Vec<&str> = compose_ids.split('+').filter(|s| !s.is_empty()).collect();
        if ids.is_empty() {
            return Err(usage("--compose needs at least one policy id"));
        }
        let mut selected = Vec::new();
        for id in &ids {
            let map = maps
                .get(*id)
                .ok_or_else(|| usage(format!("--compose names unknown policy id {id:?}")))?;
            selected.push(&map.propagated);
        }
        let composed = compose(&snapshot, &selected).map_err(input_error)?;
        let (_, root) = build_shadow_tree(&composed, &index_map, &params).map_err(input_error)?;
        let id_strings: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        let root_file = RootFile::shadow_tree(root, &params, id_strings.clone());
        let set_id = root_file.set_id().expect("ST root has a set id");
        let name = workspace::st_root_file(&set_id);
        workspace::write_root_file(&args.out, &name, &root_file).map_err(input_error)?;
        eprintln!("audit: composed set {set_id} root {root}");
        roots.push(json!({
            "file": name,
            "policy_set": root_file.policy_set,
            "root": root.to_hex(),
        }));
    }

    Ok(json!({
        "command": "audit",
        "depth": args.depth,
        "packages": snapshot.len(),
        "roots": roots,
        "out": args.out.display().to_string(),
    }))
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    /// Internal SBOM document.
    #[arg(long)]
    pub sbom: PathBuf,
    /// Entries to hide in the public SBOM: `all`, `none`, or a
    /// comma-separated list of 0-based positions.
    #[arg(long, default_value = "none")]
    pub hide: String,
    /// Setup output directory (root, index map, snapshot copy).
    #[arg(long)]
    pub pt: PathBuf,
    /// Shadow Tree root file; compliance exports are read from its directory.
    #[arg(long)]
    pub st_root: PathBuf,
    /// Delivered artifact whose digest the proof binds.
    #[arg(long)]
    pub artifact: PathBuf,
    /// Proof backend.
    #[arg(long, default_value = "transcript")]
    pub backend: String,
    /// Fixed randomizer seed for reproducible proofs.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Salt hidden-entry commitments (salts are retained, not published).
    #[arg(long)]
    pub salted: bool,
    /// Proof envelope output path; the public SBOM lands next to it.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_hide(spec: &str, entry_count: usize) -> Result<BTreeSet<usize>, CliFailure> {
    match spec {
        "none" => Ok(BTreeSet::new()),
        "all" => Ok((0..entry_count).collect()),
        list => list
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| usage(format!("bad --hide position {s:?}")))
            })
            .collect(),
    }
}

/// Everything a prover reconstructs from a setup directory.
pub struct LoadedPackageTree {
    pub snapshot: RegistrySnapshot,
    pub params: PublicParams,
    pub tree: SparseTree,
    pub root: Digest,
    pub index_map: BTreeMap<String, u64>,
}

/// Rebuild the Package Tree from a setup directory and check it against the
/// published root.
pub fn load_package_tree(dir: &Path) -> Result<LoadedPackageTree, CliFailure> {
    let root_file = workspace::read_root_file(&dir.join(workspace::PT_ROOT_FILE), TreeKind::Pt)
        .map_err(input_error)?;
    let params = setup(128, root_file.depth).map_err(input_error)?;
    let snapshot = load_snapshot_path(&dir.join(workspace::REGISTRY_COPY_FILE), root_file.depth)
        .map_err(input_error)?;
    let (tree, root, index_map) = build_package_tree(&snapshot, &params).map_err(input_error)?;
    if root != root_file.root {
        return Err(usage(format!(
            "snapshot in {} no longer matches its published root",
            dir.display()
        )));
    }
    let stored_map = workspace::read_index_map(dir).map_err(input_error)?;
    if stored_map != index_map {
        return Err(usage(format!(
            "index map in {} is inconsistent with the snapshot",
            dir.display()
        )));
    }
    Ok(LoadedPackageTree {
        snapshot,
        params,
        tree,
        root,
        index_map,
    })
}

/// Rebuild the Shadow Tree named by an ST root file, reading the per-policy
/// compliance exports from the root file's directory.
fn load_shadow_tree(
    st_root_path: &Path,
    snapshot: &RegistrySnapshot,
    index_map: &BTreeMap<String, u64>,
    params: &PublicParams,
) -> Result<(SparseTree, Digest, String), CliFailure> {
    let root_file = workspace::read_root_file(st_root_path, TreeKind::St).map_err(input_error)?;
    if root_file.depth != params.depth() {
        return Err(usage(format!(
            "ST root depth {} does not match PT depth {}",
            root_file.depth,
            params.depth()
        )));
    }
    let set_id = root_file
        .set_id()
        .ok_or_else(|| usage("ST root file carries no policy set"))?;
    let dir = st_root_path.parent().unwrap_or(Path::new("."));
    let ids = root_file.policy_set.clone().unwrap_or_default();
    let mut maps = Vec::new();
    for id in &ids {
        let bytes = std::fs::read(dir.join(workspace::compliance_file(id)))
            .map_err(|e| input_error(Error::Io(e)))?;
        let map: ComplianceMap = serde_json::from_slice(&bytes)
            .map_err(|e| input_error(Error::Schema(format!("bad compliance export: {e}"))))?;
        maps.push(map);
    }
    let propagated: Vec<&BTreeMap<String, u8>> = maps.iter().map(|m| &m.propagated).collect();
    let composed = compose(snapshot, &propagated).map_err(input_error)?;
    let (tree, root) = build_shadow_tree(&composed, index_map, params).map_err(input_error)?;
    if root != root_file.root {
        return Err(usage(format!(
            "compliance exports in {} no longer match the published ST root",
            dir.display()
        )));
    }
    Ok((tree, root, set_id))
}

pub fn cmd_prove(args: &ProveArgs) -> CmdOutcome {
    let loaded = load_package_tree(&args.pt)?;
    let LoadedPackageTree {
        snapshot,
        params,
        tree: pt,
        index_map,
        ..
    } = loaded;
    let (st, _, set_id) = load_shadow_tree(&args.st_root, &snapshot, &index_map, &params)?;

    let sbom = Sbom::load(&args.sbom).map_err(input_error)?;
    let artifact_bytes = std::fs::read(&args.artifact).map_err(|e| input_error(Error::Io(e)))?;
    let artifact_digest = content_digest(&artifact_bytes);

    let registry = BackendRegistry::with_default();
    let backend = registry
        .get(&args.backend)
        .ok_or_else(|| usage(format!("backend {:?} is not available", args.backend)))?;

    let mut rng: Box<dyn Rng> = match args.seed {
        Some(seed) => Box::new(ChaCha20Rng::seed_from_u64(seed)),
        None => Box::new(rand::rng()),
    };

    let proof = prove(
        backend,
        &ProveRequest {
            sbom: &sbom,
            pt: &pt,
            st: &st,
            index_map: &index_map,
            policy_set_id: set_id.clone(),
            artifact_digest,
            require_hiding: false,
        },
        rng.as_mut(),
    )
    .map_err(|err| match &err {
        Error::UnresolvableDependency { step } | Error::NonCompliantStep { step } => {
            // The vendor's own log may name the dependency; machine output
            // carries the ordinal only.
            let pos = (*step as usize).saturating_sub(1);
            if let Some(entry) = sbom.entries.get(pos) {
                eprintln!(
                    "prove: step {} ({}@{}) blocked: {}",
                    step,
                    entry.name,
                    entry.version,
                    err.kind()
                );
            }
            compliance_failure(&err)
        }
        _ => input_error(err),
    })?;

    let hide = parse_hide(&args.hide, sbom.entries.len())?;
    let proof_ref = args
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "proof.json".to_string());
    let salt_mode = if args.salted {
        SaltMode::Salted
    } else {
        SaltMode::Unsalted
    };
    let redaction = redact(&sbom, &hide, &proof_ref, &snapshot, salt_mode, rng.as_mut())
        .map_err(input_error)?;

    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    std::fs::write(
        &args.out,
        proof.to_json_pretty().map_err(input_error)? + "\n",
    )
    .map_err(|e| input_error(Error::Io(e)))?;
    let public_path = args.out.with_extension("public.json");
    std::fs::write(
        &public_path,
        redaction.public_sbom.to_json().map_err(input_error)? + "\n",
    )
    .map_err(|e| input_error(Error::Io(e)))?;

    eprintln!(
        "prove: {} steps folded against policy set {}; proof {}",
        proof.step_count,
        set_id,
        args.out.display()
    );
    Ok(json!({
        "command": "prove",
        "step_count": proof.step_count,
        "accumulator": proof.accumulator.to_hex(),
        "policy_set": set_id,
        "proof": args.out.display().to_string(),
        "public_sbom": public_path.display().to_string(),
        "hidden_entries": hide.len(),
    }))
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Proof envelope to verify.
    #[arg(long)]
    pub proof: PathBuf,
    /// Trusted Package Tree root file, retrieved independently.
    #[arg(long)]
    pub pt_root: PathBuf,
    /// Trusted Shadow Tree root file, retrieved independently.
    #[arg(long)]
    pub st_root: PathBuf,
    /// The delivered artifact the proof must be bound to.
    #[arg(long)]
    pub artifact: PathBuf,
}

/// Unreadable files violate the command's precondition (exit 2); files that
/// read but do not parse as their role are a rejected verification.
fn reject_malformed(context: &str) -> CliFailure {
    CliFailure {
        exit_code: 1,
        json: json!({
            "command": "verify",
            "result": "Reject",
            "reason": "MalformedProof",
        }),
        message: format!("verify: Reject(MalformedProof): {context}"),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> CmdOutcome {
    let pt_root = workspace::read_root_file(&args.pt_root, TreeKind::Pt).map_err(|e| match e {
        Error::Io(io) => input_error(Error::Io(io)),
        _ => reject_malformed("bad PT root file"),
    })?;
    let st_root = workspace::read_root_file(&args.st_root, TreeKind::St).map_err(|e| match e {
        Error::Io(io) => input_error(Error::Io(io)),
        _ => reject_malformed("bad ST root file"),
    })?;
    let set_id = st_root
        .set_id()
        .ok_or_else(|| reject_malformed("ST root file carries no policy set"))?;
    let artifact_bytes = std::fs::read(&args.artifact).map_err(|e| input_error(Error::Io(e)))?;
    let proof_bytes = std::fs::read(&args.proof).map_err(|e| input_error(Error::Io(e)))?;

    let registry = BackendRegistry::with_default();
    let verdict = verify_proof_bytes(
        &registry,
        &proof_bytes,
        &pt_root.root,
        &st_root.root,
        &set_id,
        &content_digest(&artifact_bytes),
    );
    match verdict {
        Verdict::Accept => {
            eprintln!("verify: Accept");
            Ok(json!({ "command": "verify", "result": "Accept" }))
        }
        Verdict::Reject(reason) => Err(CliFailure {
            exit_code: 1,
            json: json!({
                "command": "verify",
                "result": "Reject",
                "reason": reason.to_string(),
            }),
            message: format!("verify: Reject({reason})"),
        }),
    }
}

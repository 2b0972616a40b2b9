//! Verifiable selective-disclosure SBOMs over dual sparse Merkle trees.
//!
//! Two isomorphic fixed-depth trees commit the supply-chain state: the
//! Package Tree (maintained by a package registry) binds each package
//! version's metadata to a slot derived from its identity, and the Shadow
//! Tree (maintained by an auditor) binds a propagated compliance bit to the
//! same slot. A vendor folds one dual-membership check per SBOM dependency
//! into an accumulated proof; a client verifies that proof against the two
//! published roots alone, learning nothing about hidden dependencies beyond
//! the checks passing.
//!
//! Module map:
//! - [`hashing`]: domain-separated digests, public parameters, index derivation
//! - [`smt`]: the sparse Merkle tree (commit / open / verify / update)
//! - [`registry`]: snapshot ingestion and Package Tree construction
//! - [`policy`]: policy evaluation, propagation, composition, Shadow Trees
//! - [`sbom`]: internal SBOMs and redaction into public SBOMs
//! - [`proof`]: the step relation, fold accumulator, envelopes, verification
//!
//! # Example
//!
//! ```
//! use bomproof_core::policy::{build_shadow_tree, compose, evaluate_policy, PolicyConstraint};
//! use bomproof_core::registry::{build_package_tree, PackageRecord, RegistrySnapshot};
//! use bomproof_core::sbom::{Sbom, SbomEntry};
//! use bomproof_core::{
//!     content_digest, prove, setup, verify_proof, BackendRegistry, ProveRequest,
//!     TranscriptBackend, Verdict,
//! };
//!
//! // Package manager: commit the registry and publish g_PT.
//! let records = vec![PackageRecord {
//!     name: "tokio".into(),
//!     version: "1.28.0".into(),
//!     license: "MIT".into(),
//!     artifact_hash: "9f86a2b7c1".into(),
//!     dependencies: vec![],
//!     ecosystem: "crates.io".into(),
//! }];
//! let snapshot = RegistrySnapshot::from_records(records, "demo", 8)?;
//! let params = setup(128, 8)?;
//! let (pt, g_pt, index_map) = build_package_tree(&snapshot, &params)?;
//!
//! // Auditor: evaluate a policy, propagate, publish g_ST.
//! let policy = PolicyConstraint::deny_list("sec", Vec::<String>::new());
//! let verdicts = evaluate_policy(&snapshot, &policy)?;
//! let composed = compose(&snapshot, &[&verdicts.propagated])?;
//! let (st, g_st) = build_shadow_tree(&composed, &index_map, &params)?;
//!
//! // Vendor: fold the SBOM into a proof bound to the delivered artifact.
//! let sbom = Sbom {
//!     name: "app".into(),
//!     version: "1.0".into(),
//!     entries: vec![SbomEntry {
//!         name: "tokio".into(),
//!         version: "1.28.0".into(),
//!         src: "crates.io".into(),
//!     }],
//! };
//! let artifact = content_digest(b"app release bytes");
//! let proof = prove(
//!     &TranscriptBackend,
//!     &ProveRequest {
//!         sbom: &sbom,
//!         pt: &pt,
//!         st: &st,
//!         index_map: &index_map,
//!         policy_set_id: "sec".into(),
//!         artifact_digest: artifact,
//!         require_hiding: false,
//!     },
//!     &mut rand::rng(),
//! )?;
//!
//! // Client: verify against independently retrieved roots.
//! let registry = BackendRegistry::with_default();
//! let verdict = verify_proof(&registry, &proof, &g_pt, &g_st, "sec", &artifact);
//! assert_eq!(verdict, Verdict::Accept);
//! # Ok::<(), bomproof_core::Error>(())
//! ```

pub mod error;
pub mod hashing;
pub mod policy;
pub mod proof;
pub mod registry;
pub mod sbom;
pub mod smt;

pub use error::{Error, Result};
pub use hashing::{content_digest, derive_index, hash, Digest, DomainTag, PublicParams};
pub use proof::{
    prove, valid_dep, verify_proof, verify_proof_bytes, BackendRegistry, FoldAccumulator, Proof,
    ProofBackend, ProveRequest, RejectReason, StepWitness, TranscriptBackend, Verdict,
};
pub use registry::{
    build_package_tree, derive_index_map, leaf_commitment, load_snapshot, load_snapshot_path,
    PackageRecord, RegistrySnapshot,
};
pub use smt::{setup, verify_commit, Opening, RootFile, SparseTree, TreeKind};

//! The dual-membership step relation, step-wise fold over all SBOM
//! dependencies, and verification bound to trusted public roots.
//!
//! One step attests one dependency: its metadata commitment opens in the
//! Package Tree AND the forced compliant leaf opens at the same slot in the
//! Shadow Tree. The Shadow Tree leaf value is never read from the witness;
//! it is pinned to the compliant encoding, so a slot flagged 0 makes the
//! recomputed root diverge and the step fail.
//!
//! Steps chain through an accumulator: `W_0` is seeded from both roots and
//! each step folds in its randomizer, binding the whole chain to the tree
//! states it was produced against. Backends decide how step witnesses are
//! compressed into the proof body; the built-in transcript backend is sound
//! and binding but reveals witnesses to the verifier (it is labeled
//! non-hiding and refuses to be presented otherwise).

mod backend;
mod transcript;

pub use backend::{BackendKeys, BackendRegistry, ProofBackend};
pub use transcript::{TranscriptBackend, TRANSCRIPT_BACKEND_ID};

use std::collections::BTreeMap;
use std::fmt;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{hash, Digest, DomainTag};
use crate::policy::shadow_leaf;
use crate::sbom::Sbom;
use crate::smt::{verify_commit, Opening, SparseTree};

/// Everything one step needs: the dependency's slot, its Package Tree leaf
/// and opening, the Shadow Tree opening at the same slot, and a fresh
/// randomizer for accumulator uniqueness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepWitness {
    pub dep_key: String,
    pub index: u64,
    pub pt_leaf: Digest,
    pub pt_opening: Opening,
    pub st_opening: Opening,
    pub randomizer: [u8; 32],
}

/// The per-dependency validity predicate: simultaneous membership in the
/// Package Tree and compliant membership in the Shadow Tree.
///
/// The ST side recomputes from the forced compliant leaf, never from a
/// witness-supplied value.
pub fn valid_dep(g_pt: &Digest, g_st: &Digest, witness: &StepWitness) -> bool {
    verify_commit(g_pt, &witness.pt_leaf, witness.index, &witness.pt_opening)
        && verify_commit(g_st, &shadow_leaf(1), witness.index, &witness.st_opening)
}

/// Running accumulator over folded steps.
///
/// `W_0 = hash(accum, g_PT || g_ST || "init")`;
/// `W_k = hash(accum, W_{k-1} || rho_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldAccumulator {
    value: Digest,
    steps: u64,
}

impl FoldAccumulator {
    pub fn seed(g_pt: &Digest, g_st: &Digest) -> Self {
        let mut payload = Vec::with_capacity(68);
        payload.extend_from_slice(g_pt.as_bytes());
        payload.extend_from_slice(g_st.as_bytes());
        payload.extend_from_slice(b"init");
        FoldAccumulator {
            value: hash(DomainTag::Accum, &payload),
            steps: 0,
        }
    }

    pub fn fold(&mut self, randomizer: &[u8; 32]) {
        let mut payload = [0u8; 64];
        payload[..32].copy_from_slice(self.value.as_bytes());
        payload[32..].copy_from_slice(randomizer);
        self.value = hash(DomainTag::Accum, &payload);
        self.steps += 1;
    }

    pub fn value(&self) -> Digest {
        self.value
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

/// Prover-side fold state threaded through a backend's `fold_step` calls.
pub struct FoldState {
    pub g_pt: Digest,
    pub g_st: Digest,
    pub accumulator: FoldAccumulator,
    /// Witnesses retained for transcript compression. A succinct backend may
    /// ignore this and keep its own state.
    pub witnesses: Vec<StepWitness>,
}

impl FoldState {
    pub fn new(g_pt: Digest, g_st: Digest) -> Self {
        let accumulator = FoldAccumulator::seed(&g_pt, &g_st);
        FoldState {
            g_pt,
            g_st,
            accumulator,
            witnesses: Vec::new(),
        }
    }
}

/// Roots a proof was generated against, embedded verbatim in the envelope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofRoots {
    pub pt: Digest,
    pub st: Digest,
    pub policy_set: String,
}

/// The proof envelope.
///
/// JSON shape: `{"backend_id", "roots": {"pt", "st", "policy_set"},
/// "artifact_digest", "step_count", "accumulator", "body"}` with the body
/// base64-encoded. Unknown fields are rejected so any mutation of the
/// serialized form is detectable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Proof {
    pub backend_id: String,
    pub roots: ProofRoots,
    pub artifact_digest: Digest,
    pub step_count: u64,
    pub accumulator: Digest,
    #[serde(with = "body_base64")]
    pub body: Vec<u8>,
}

mod body_base64 {
    use super::*;
    use serde::Deserializer;

    pub fn serialize<S: serde::Serializer>(
        body: &[u8],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&BASE64.encode(body))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<u8>, D::Error> {
        let s = String::deserialize(deserializer)?;
        BASE64
            .decode(s.as_bytes())
            .map_err(serde::de::Error::custom)
    }
}

impl Proof {
    pub fn to_json_vec(&self) -> Result<Vec<u8>> {
        serde_json::to_vec(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("bad proof envelope: {e}")))
    }
}

/// Why a proof was rejected. `InvalidStep` carries the 1-based ordinal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    RootMismatch,
    PolicySetMismatch,
    ArtifactMismatch,
    InvalidStep(u64),
    AccumulatorMismatch,
    MalformedProof,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::RootMismatch => write!(f, "RootMismatch"),
            RejectReason::PolicySetMismatch => write!(f, "PolicySetMismatch"),
            RejectReason::ArtifactMismatch => write!(f, "ArtifactMismatch"),
            RejectReason::InvalidStep(k) => write!(f, "InvalidStep({k})"),
            RejectReason::AccumulatorMismatch => write!(f, "AccumulatorMismatch"),
            RejectReason::MalformedProof => write!(f, "MalformedProof"),
        }
    }
}

/// Verification outcome. Never an error: bad input is a rejection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => write!(f, "Accept"),
            Verdict::Reject(reason) => write!(f, "Reject({reason})"),
        }
    }
}

/// Inputs to proving, bundled to keep call sites readable.
pub struct ProveRequest<'a> {
    pub sbom: &'a Sbom,
    pub pt: &'a SparseTree,
    pub st: &'a SparseTree,
    pub index_map: &'a BTreeMap<String, u64>,
    pub policy_set_id: String,
    pub artifact_digest: Digest,
    /// Refuse to prove unless the backend actually hides witnesses.
    pub require_hiding: bool,
}

/// Fold every SBOM dependency into a proof against the trees' current roots.
///
/// Fails fast at the first step that does not resolve or does not satisfy
/// the dual-membership predicate; the error carries only the step ordinal.
/// An empty SBOM yields a valid zero-step proof.
pub fn prove(
    backend: &dyn ProofBackend,
    request: &ProveRequest<'_>,
    rng: &mut dyn Rng,
) -> Result<Proof> {
    if request.require_hiding && !backend.is_hiding() {
        return Err(Error::Usage(format!(
            "backend {:?} is not hiding; it cannot be presented as zero-knowledge",
            backend.backend_id()
        )));
    }
    let g_pt = request.pt.root();
    let g_st = request.st.root();
    let mut state = FoldState::new(g_pt, g_st);
    for (pos, entry) in request.sbom.entries.iter().enumerate() {
        let ordinal = pos as u64 + 1;
        let key = entry.canonical_key();
        let index = *request
            .index_map
            .get(&key)
            .ok_or(Error::UnresolvableDependency { step: ordinal })?;
        let mut randomizer = [0u8; 32];
        rng.fill_bytes(&mut randomizer);
        let witness = StepWitness {
            dep_key: key,
            index,
            pt_leaf: request.pt.leaf(index)?,
            pt_opening: request.pt.open(index)?,
            st_opening: request.st.open(index)?,
            randomizer,
        };
        backend.fold_step(&mut state, witness)?;
    }
    let body = backend.compress(&state)?;
    Ok(Proof {
        backend_id: backend.backend_id().to_string(),
        roots: ProofRoots {
            pt: g_pt,
            st: g_st,
            policy_set: request.policy_set_id.clone(),
        },
        artifact_digest: request.artifact_digest,
        step_count: state.accumulator.steps(),
        accumulator: state.accumulator.value(),
        body,
    })
}

/// Verify a proof against independently retrieved trusted roots.
///
/// The roots embedded in the proof are compared against the trusted ones
/// (never trusted from the prover), then the policy-set id, the artifact
/// binding, and finally the backend body (for the transcript backend: every
/// step's dual-membership check plus the accumulator chain).
pub fn verify_proof(
    registry: &BackendRegistry,
    proof: &Proof,
    trusted_g_pt: &Digest,
    trusted_g_st: &Digest,
    expected_set_id: &str,
    expected_artifact: &Digest,
) -> Verdict {
    if proof.roots.pt != *trusted_g_pt || proof.roots.st != *trusted_g_st {
        return Verdict::Reject(RejectReason::RootMismatch);
    }
    if proof.roots.policy_set != expected_set_id {
        return Verdict::Reject(RejectReason::PolicySetMismatch);
    }
    if proof.artifact_digest != *expected_artifact {
        return Verdict::Reject(RejectReason::ArtifactMismatch);
    }
    let Some(backend) = registry.get(&proof.backend_id) else {
        return Verdict::Reject(RejectReason::MalformedProof);
    };
    match backend.verify_body(proof, trusted_g_pt, trusted_g_st) {
        Ok(()) => Verdict::Accept,
        Err(reason) => Verdict::Reject(reason),
    }
}

/// Parse and verify serialized proof bytes. Total over arbitrary input:
/// anything that does not parse is a malformed-proof rejection.
pub fn verify_proof_bytes(
    registry: &BackendRegistry,
    bytes: &[u8],
    trusted_g_pt: &Digest,
    trusted_g_st: &Digest,
    expected_set_id: &str,
    expected_artifact: &Digest,
) -> Verdict {
    match Proof::from_json(bytes) {
        Ok(proof) => verify_proof(
            registry,
            &proof,
            trusted_g_pt,
            trusted_g_st,
            expected_set_id,
            expected_artifact,
        ),
        Err(_) => Verdict::Reject(RejectReason::MalformedProof),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashing::content_digest;
    use crate::policy::{build_shadow_tree, compose, evaluate_policy, PolicyConstraint, PolicySet};
    use crate::registry::{build_package_tree, PackageRecord, RegistrySnapshot};
    use crate::sbom::SbomEntry;
    use crate::smt::setup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    struct Universe {
        pt: SparseTree,
        st: SparseTree,
        index_map: BTreeMap<String, u64>,
        set_id: String,
    }

    fn record(name: &str, deps: &[&str]) -> PackageRecord {
        PackageRecord {
            name: name.to_string(),
            version: "1.0".to_string(),
            license: "MIT".to_string(),
            artifact_hash: "cafe".to_string(),
            dependencies: deps.iter().map(|d| d.to_string()).collect(),
            ecosystem: "crates.io".to_string(),
        }
    }

    /// Depth-4 toy universe with one optionally denied package.
    fn universe(denied: &[&str]) -> Universe {
        let recs = vec![
            record("alpha", &[]),
            record("beta", &[]),
            record("gamma", &[]),
        ];
        let snapshot = RegistrySnapshot::from_records(recs, "toy", 4).unwrap();
        let params = setup(128, 4).unwrap();
        let (pt, _, index_map) = build_package_tree(&snapshot, &params).unwrap();
        let policy =
            PolicyConstraint::deny_list("sec", denied.iter().map(|d| format!("pkg:{d}@1.0")));
        let set = PolicySet::new(vec![policy.clone()]).unwrap();
        let cm = evaluate_policy(&snapshot, &policy).unwrap();
        let composed = compose(&snapshot, &[&cm.propagated]).unwrap();
        let (st, _) = build_shadow_tree(&composed, &index_map, &params).unwrap();
        Universe {
            pt,
            st,
            index_map,
            set_id: set.set_id(),
        }
    }

    fn sbom(names: &[&str]) -> Sbom {
        Sbom {
            name: "app".to_string(),
            version: "0.1.0".to_string(),
            entries: names
                .iter()
                .map(|n| SbomEntry {
                    name: n.to_string(),
                    version: "1.0".to_string(),
                    src: "crates.io".to_string(),
                })
                .collect(),
        }
    }

    fn prove_in(u: &Universe, s: &Sbom, artifact: &Digest) -> Result<Proof> {
        let backend = TranscriptBackend;
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        prove(
            &backend,
            &ProveRequest {
                sbom: s,
                pt: &u.pt,
                st: &u.st,
                index_map: &u.index_map,
                policy_set_id: u.set_id.clone(),
                artifact_digest: *artifact,
                require_hiding: false,
            },
            &mut rng,
        )
    }

    #[test]
    fn honest_dependency_satisfies_valid_dep() {
        let u = universe(&[]);
        let idx = u.index_map["pkg:alpha@1.0"];
        let w = StepWitness {
            dep_key: "pkg:alpha@1.0".to_string(),
            index: idx,
            pt_leaf: u.pt.leaf(idx).unwrap(),
            pt_opening: u.pt.open(idx).unwrap(),
            st_opening: u.st.open(idx).unwrap(),
            randomizer: [0u8; 32],
        };
        assert!(valid_dep(&u.pt.root(), &u.st.root(), &w));
    }

    #[test]
    fn flagged_dependency_fails_valid_dep() {
        let u = universe(&["beta"]);
        let idx = u.index_map["pkg:beta@1.0"];
        let w = StepWitness {
            dep_key: "pkg:beta@1.0".to_string(),
            index: idx,
            pt_leaf: u.pt.leaf(idx).unwrap(),
            pt_opening: u.pt.open(idx).unwrap(),
            st_opening: u.st.open(idx).unwrap(),
            randomizer: [0u8; 32],
        };
        assert!(!valid_dep(&u.pt.root(), &u.st.root(), &w));
    }

    #[test]
    fn absent_slot_fails_valid_dep() {
        let u = universe(&[]);
        let occupied: Vec<u64> = u.index_map.values().copied().collect();
        let free = (0..16).find(|i| !occupied.contains(i)).unwrap();
        let w = StepWitness {
            dep_key: "pkg:ghost@1.0".to_string(),
            index: free,
            pt_leaf: u.pt.leaf(free).unwrap(),
            pt_opening: u.pt.open(free).unwrap(),
            st_opening: u.st.open(free).unwrap(),
            randomizer: [0u8; 32],
        };
        assert!(!valid_dep(&u.pt.root(), &u.st.root(), &w));
    }

    #[test]
    fn zero_step_proof_accepts() {
        let u = universe(&[]);
        let artifact = content_digest(b"artifact");
        let proof = prove_in(&u, &sbom(&[]), &artifact).unwrap();
        assert_eq!(proof.step_count, 0);
        assert_eq!(
            proof.accumulator,
            FoldAccumulator::seed(&u.pt.root(), &u.st.root()).value()
        );
        let reg = BackendRegistry::with_default();
        let verdict = verify_proof(
            &reg,
            &proof,
            &u.pt.root(),
            &u.st.root(),
            &u.set_id,
            &artifact,
        );
        assert!(verdict.is_accept());
    }

    #[test]
    fn three_dependency_round_trip() {
        let u = universe(&[]);
        let artifact = content_digest(b"app-0.1.0");
        let proof = prove_in(&u, &sbom(&["alpha", "beta", "gamma"]), &artifact).unwrap();
        assert_eq!(proof.step_count, 3);
        let reg = BackendRegistry::with_default();
        assert!(verify_proof(
            &reg,
            &proof,
            &u.pt.root(),
            &u.st.root(),
            &u.set_id,
            &artifact
        )
        .is_accept());
    }

    #[test]
    fn prove_fails_fast_with_ordinal_only() {
        let u = universe(&["beta"]);
        let artifact = content_digest(b"x");
        let err = prove_in(&u, &sbom(&["alpha", "beta", "gamma"]), &artifact).unwrap_err();
        match &err {
            Error::NonCompliantStep { step } => assert_eq!(*step, 2),
            other => panic!("expected NonCompliantStep, got {other:?}"),
        }
        assert!(!err.to_string().contains("beta"));

        let mut unknown = sbom(&["alpha"]);
        unknown.entries.push(SbomEntry {
            name: "ghost".to_string(),
            version: "9.9".to_string(),
            src: "crates.io".to_string(),
        });
        let err = prove_in(&u, &unknown, &artifact).unwrap_err();
        match &err {
            Error::UnresolvableDependency { step } => assert_eq!(*step, 2),
            other => panic!("expected UnresolvableDependency, got {other:?}"),
        }
        assert!(!err.to_string().contains("ghost"));
    }

    #[test]
    fn verify_rejects_wrong_roots_policy_artifact() {
        let u = universe(&[]);
        let artifact = content_digest(b"bin");
        let proof = prove_in(&u, &sbom(&["alpha"]), &artifact).unwrap();
        let reg = BackendRegistry::with_default();
        let other_root = hash(DomainTag::Node, b"other");

        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &other_root,
                &u.st.root(),
                &u.set_id,
                &artifact
            ),
            Verdict::Reject(RejectReason::RootMismatch)
        );
        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &u.pt.root(),
                &other_root,
                &u.set_id,
                &artifact
            ),
            Verdict::Reject(RejectReason::RootMismatch)
        );
        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &u.pt.root(),
                &u.st.root(),
                "sec+extra",
                &artifact
            ),
            Verdict::Reject(RejectReason::PolicySetMismatch)
        );
        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &u.pt.root(),
                &u.st.root(),
                &u.set_id,
                &content_digest(b"other-bin")
            ),
            Verdict::Reject(RejectReason::ArtifactMismatch)
        );
    }

    #[test]
    fn parallel_tree_attack_is_root_mismatch() {
        // Adversary builds a private universe where the denied package is
        // clean and proves against those divergent roots.
        let honest = universe(&["beta"]);
        let forged = universe(&[]);
        let artifact = content_digest(b"bin");
        let proof = prove_in(&forged, &sbom(&["beta"]), &artifact).unwrap();
        let reg = BackendRegistry::with_default();
        // Self-consistent against the forged roots...
        assert!(verify_proof(
            &reg,
            &proof,
            &forged.pt.root(),
            &forged.st.root(),
            &forged.set_id,
            &artifact
        )
        .is_accept());
        // ...but the client checks the trusted roots.
        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &honest.pt.root(),
                &honest.st.root(),
                &honest.set_id,
                &artifact
            ),
            Verdict::Reject(RejectReason::RootMismatch)
        );
    }

    #[test]
    fn unknown_backend_is_malformed() {
        let u = universe(&[]);
        let artifact = content_digest(b"bin");
        let mut proof = prove_in(&u, &sbom(&["alpha"]), &artifact).unwrap();
        proof.backend_id = "folding".to_string();
        let reg = BackendRegistry::with_default();
        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &u.pt.root(),
                &u.st.root(),
                &u.set_id,
                &artifact
            ),
            Verdict::Reject(RejectReason::MalformedProof)
        );
    }

    #[test]
    fn transcript_cannot_claim_hiding() {
        let u = universe(&[]);
        let s = sbom(&["alpha"]);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let err = prove(
            &TranscriptBackend,
            &ProveRequest {
                sbom: &s,
                pt: &u.pt,
                st: &u.st,
                index_map: &u.index_map,
                policy_set_id: u.set_id.clone(),
                artifact_digest: content_digest(b"a"),
                require_hiding: true,
            },
            &mut rng,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn accumulator_is_pure_function_of_roots_and_randomizers() {
        let a = hash(DomainTag::Node, b"a");
        let b = hash(DomainTag::Node, b"b");
        let mut acc1 = FoldAccumulator::seed(&a, &b);
        let mut acc2 = FoldAccumulator::seed(&a, &b);
        for i in 0..10u8 {
            let rho = [i; 32];
            acc1.fold(&rho);
            acc2.fold(&rho);
        }
        assert_eq!(acc1, acc2);
        assert_eq!(acc1.steps(), 10);
        // Golden chain start, pinned by the independent oracle.
        let e0 = hash(DomainTag::Empty, b"");
        let seeded = FoldAccumulator::seed(&e0, &e0);
        assert_eq!(
            seeded.value().to_hex(),
            "b8e2e5de5d58c36fda659c0ed3e468bdc5ae0ec5fa733db0c10334bc9560e4ea"
        );
        let mut seeded = seeded;
        let rho: [u8; 32] = std::array::from_fn(|i| i as u8);
        seeded.fold(&rho);
        assert_eq!(
            seeded.value().to_hex(),
            "cc860194b329987e2156b92deb7466061f08f37010640e39bf34ef77e2bce23b"
        );
    }

    #[test]
    fn transcript_body_grows_linearly() {
        let u = universe(&[]);
        let artifact = content_digest(b"bin");
        let sizes: Vec<usize> = [1usize, 2, 3]
            .iter()
            .map(|&k| {
                let names: Vec<&str> = ["alpha", "beta", "gamma"][..k].to_vec();
                prove_in(&u, &sbom(&names), &artifact).unwrap().body.len()
            })
            .collect();
        assert_eq!(sizes[1] - sizes[0], sizes[2] - sizes[1]);
    }

    #[test]
    fn envelope_field_order_is_stable() {
        let u = universe(&[]);
        let artifact = content_digest(b"bin");
        let proof = prove_in(&u, &sbom(&["alpha"]), &artifact).unwrap();
        let json = String::from_utf8(proof.to_json_vec().unwrap()).unwrap();
        // Wire shape regression: fixed field order, roots nested, hex digests.
        let expected_prefix = format!(
            "{{\"backend_id\":\"transcript\",\"roots\":{{\"pt\":\"{}\",\"st\":\"{}\",\"policy_set\":\"sec\"}},\"artifact_digest\":\"{}\",\"step_count\":1,\"accumulator\":\"{}\",\"body\":\"",
            u.pt.root(),
            u.st.root(),
            artifact,
            proof.accumulator
        );
        assert!(
            json.starts_with(&expected_prefix),
            "envelope shape drifted: {json}"
        );
    }

    #[test]
    fn reject_reasons_check_roots_first() {
        let u = universe(&[]);
        let artifact = content_digest(b"bin");
        let proof = prove_in(&u, &sbom(&["alpha"]), &artifact).unwrap();
        let reg = BackendRegistry::with_default();
        let other_root = hash(DomainTag::Node, b"other");
        // Everything wrong at once: the root comparison wins.
        assert_eq!(
            verify_proof(
                &reg,
                &proof,
                &other_root,
                &other_root,
                "not-the-set",
                &content_digest(b"not-the-artifact")
            ),
            Verdict::Reject(RejectReason::RootMismatch)
        );
    }

    #[test]
    fn envelope_json_round_trip() {
        let u = universe(&[]);
        let artifact = content_digest(b"bin");
        let proof = prove_in(&u, &sbom(&["alpha", "gamma"]), &artifact).unwrap();
        let bytes = proof.to_json_vec().unwrap();
        let parsed = Proof::from_json(&bytes).unwrap();
        assert_eq!(parsed, proof);
        let reg = BackendRegistry::with_default();
        assert!(verify_proof_bytes(
            &reg,
            &bytes,
            &u.pt.root(),
            &u.st.root(),
            &u.set_id,
            &artifact
        )
        .is_accept());
        // Garbage bytes are a malformed-proof rejection, not a crash.
        assert_eq!(
            verify_proof_bytes(
                &reg,
                b"{]",
                &u.pt.root(),
                &u.st.root(),
                &u.set_id,
                &artifact
            ),
            Verdict::Reject(RejectReason::MalformedProof)
        );
    }
}

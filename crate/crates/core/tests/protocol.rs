//! End-to-end protocol tests over toy universes: the three-profile
//! propagation fixture, exhaustive depth-4 soundness, root revocation, and
//! the public-SBOM linkage to the Package Tree.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use bomproof_core::hashing::content_digest;
use bomproof_core::policy::{
    build_shadow_tree, compose, evaluate_policy, shadow_leaf, PolicyConstraint, PolicySet,
};
use bomproof_core::registry::{build_package_tree, PackageRecord, RegistrySnapshot};
use bomproof_core::sbom::{redact, PublicEntry, SaltMode, Sbom, SbomEntry};
use bomproof_core::smt::{setup, verify_commit, SparseTree};
use bomproof_core::{
    prove, valid_dep, verify_proof, BackendRegistry, Digest, ProveRequest, RejectReason,
    StepWitness, TranscriptBackend, Verdict,
};

fn record(name: &str, deps: &[&str]) -> PackageRecord {
    PackageRecord {
        name: name.to_string(),
        version: "1.0".to_string(),
        license: "MIT".to_string(),
        artifact_hash: "feed".to_string(),
        dependencies: deps.iter().map(|d| d.to_string()).collect(),
        ecosystem: "crates.io".to_string(),
    }
}

fn sbom_of(names: &[&str]) -> Sbom {
    Sbom {
        name: "app".to_string(),
        version: "1.0".to_string(),
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

/// Three-profile fixture over the chain root -> mid -> deep:
/// - policy x flags the deep package (security profile rejects the root)
/// - policy y flags nothing (legal profile approves)
/// - policy z flags the middle package
///
/// The strict profile composes all three and rejects.
#[test]
fn three_profile_fixture_reproduces_expected_verdicts() {
    let snapshot = RegistrySnapshot::from_records(
        vec![
            record("root-pkg", &["mid-pkg@1.0"]),
            record("mid-pkg", &["deep-pkg@1.0"]),
            record("deep-pkg", &[]),
        ],
        "profiles",
        8,
    )
    .unwrap();
    let root_key = "pkg:root-pkg@1.0";

    let x = PolicyConstraint::deny_list("x", ["pkg:deep-pkg@1.0".to_string()]);
    let y = PolicyConstraint::license_allow_list("y", ["MIT".to_string()]);
    let z = PolicyConstraint::deny_list("z", ["pkg:mid-pkg@1.0".to_string()]);

    let mx = evaluate_policy(&snapshot, &x).unwrap();
    let my = evaluate_policy(&snapshot, &y).unwrap();
    let mz = evaluate_policy(&snapshot, &z).unwrap();

    // Per-tree propagated states mirror the expected pattern.
    assert_eq!(mx.propagated["pkg:deep-pkg@1.0"], 0);
    assert_eq!(mx.propagated["pkg:mid-pkg@1.0"], 0);
    assert_eq!(mx.propagated[root_key], 0);
    assert!(my.propagated.values().all(|&b| b == 1));
    assert_eq!(mz.propagated["pkg:deep-pkg@1.0"], 1);
    assert_eq!(mz.propagated["pkg:mid-pkg@1.0"], 0);
    assert_eq!(mz.propagated[root_key], 0);

    // Security profile: policy x alone -> rejected.
    let security = compose(&snapshot, &[&mx.propagated]).unwrap();
    assert_eq!(security[root_key], 0);
    // Legal profile: policy y alone -> approved.
    let legal = compose(&snapshot, &[&my.propagated]).unwrap();
    assert_eq!(legal[root_key], 1);
    // Strict profile: all trees -> rejected.
    let strict = compose(&snapshot, &[&mx.propagated, &my.propagated, &mz.propagated]).unwrap();
    assert_eq!(strict[root_key], 0);
}

/// The Shadow Tree built from a rejecting profile blocks the root package's
/// dual-membership check.
#[test]
fn rejecting_shadow_tree_blocks_valid_dep() {
    let snapshot = RegistrySnapshot::from_records(
        vec![record("root-pkg", &["mid-pkg@1.0"]), record("mid-pkg", &[])],
        "block",
        8,
    )
    .unwrap();
    let params = setup(128, 8).unwrap();
    let (pt, g_pt, index_map) = build_package_tree(&snapshot, &params).unwrap();

    let x = PolicyConstraint::deny_list("x", ["pkg:mid-pkg@1.0".to_string()]);
    let mx = evaluate_policy(&snapshot, &x).unwrap();
    let (st, g_st) = build_shadow_tree(&mx.propagated, &index_map, &params).unwrap();

    let idx = index_map["pkg:root-pkg@1.0"];
    // The ST slot carries the non-compliant leaf.
    assert_eq!(st.leaf(idx).unwrap(), shadow_leaf(0));
    let witness = StepWitness {
        dep_key: "pkg:root-pkg@1.0".to_string(),
        index: idx,
        pt_leaf: pt.leaf(idx).unwrap(),
        pt_opening: pt.open(idx).unwrap(),
        st_opening: st.open(idx).unwrap(),
        randomizer: [0u8; 32],
    };
    assert!(!valid_dep(&g_pt, &g_st, &witness));
}

/// Build a depth-4 universe where every one of the 16 slots is in a chosen
/// state, then check that verification accepts exactly the SBOMs whose every
/// step is present and compliant.
#[derive(Clone, Copy, PartialEq)]
enum SlotState {
    Absent,
    Compliant,
    NonCompliant,
    /// Occupied by a leaf that is not any package's metadata commitment.
    ForeignLeaf,
}

struct ToyUniverse {
    pt: SparseTree,
    st: SparseTree,
    states: Vec<SlotState>,
}

fn toy_universe(states: &[SlotState; 16]) -> ToyUniverse {
    let params = setup(128, 4).unwrap();
    let mut pt_leaves = BTreeMap::new();
    let mut st_leaves = BTreeMap::new();
    for (slot, state) in states.iter().enumerate() {
        let slot = slot as u64;
        match state {
            SlotState::Absent => {}
            SlotState::Compliant => {
                pt_leaves.insert(slot, content_digest(format!("pkg-{slot}").as_bytes()));
                st_leaves.insert(slot, shadow_leaf(1));
            }
            SlotState::NonCompliant => {
                pt_leaves.insert(slot, content_digest(format!("pkg-{slot}").as_bytes()));
                st_leaves.insert(slot, shadow_leaf(0));
            }
            SlotState::ForeignLeaf => {
                pt_leaves.insert(slot, content_digest(b"foreign"));
                st_leaves.insert(slot, shadow_leaf(1));
            }
        }
    }
    ToyUniverse {
        pt: SparseTree::commit(&params, &pt_leaves).unwrap(),
        st: SparseTree::commit(&params, &st_leaves).unwrap(),
        states: states.to_vec(),
    }
}

/// The adversary's best transcript for a slot: honest openings from the true
/// trees with the claimed package's leaf.
fn witness_for(u: &ToyUniverse, slot: u64) -> StepWitness {
    let claimed_leaf = content_digest(format!("pkg-{slot}").as_bytes());
    StepWitness {
        dep_key: format!("pkg:pkg-{slot}@1"),
        index: slot,
        pt_leaf: claimed_leaf,
        pt_opening: u.pt.open(slot).unwrap(),
        st_opening: u.st.open(slot).unwrap(),
        randomizer: [slot as u8; 32],
    }
}

#[test]
fn exhaustive_depth4_soundness() {
    // A mixed universe exercising all four states across all 16 slots.
    let states: [SlotState; 16] = std::array::from_fn(|i| match i % 4 {
        0 => SlotState::Absent,
        1 => SlotState::Compliant,
        2 => SlotState::NonCompliant,
        _ => SlotState::ForeignLeaf,
    });
    let u = toy_universe(&states);
    let g_pt = u.pt.root();
    let g_st = u.st.root();
    for slot in 0..16u64 {
        let witness = witness_for(&u, slot);
        let expected = u.states[slot as usize] == SlotState::Compliant;
        assert_eq!(
            valid_dep(&g_pt, &g_st, &witness),
            expected,
            "slot {slot} state mismatch"
        );
    }
}

/// Revocation and remediation against updated Shadow Tree roots.
#[test]
fn stale_proof_rejected_after_root_update() {
    let snapshot =
        RegistrySnapshot::from_records(vec![record("good", &[]), record("risky", &[])], "life", 8)
            .unwrap();
    let params = setup(128, 8).unwrap();
    let (pt, g_pt, index_map) = build_package_tree(&snapshot, &params).unwrap();

    let sec_v1 = PolicyConstraint::deny_list("sec", Vec::<String>::new());
    let set = PolicySet::new(vec![sec_v1.clone()]).unwrap();
    let m1 = evaluate_policy(&snapshot, &sec_v1).unwrap();
    let (st1, g_st1) = build_shadow_tree(&m1.propagated, &index_map, &params).unwrap();

    let artifact = content_digest(b"build-1");
    let sbom = sbom_of(&["good", "risky"]);
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let proof = prove(
        &TranscriptBackend,
        &ProveRequest {
            sbom: &sbom,
            pt: &pt,
            st: &st1,
            index_map: &index_map,
            policy_set_id: set.set_id(),
            artifact_digest: artifact,
            require_hiding: false,
        },
        &mut rng,
    )
    .unwrap();

    let registry = BackendRegistry::with_default();
    assert!(verify_proof(&registry, &proof, &g_pt, &g_st1, "sec", &artifact).is_accept());

    // Auditor flags the risky package; the ST root moves.
    let sec_v2 = PolicyConstraint::deny_list("sec", ["pkg:risky@1.0".to_string()]);
    let m2 = evaluate_policy(&snapshot, &sec_v2).unwrap();
    let (st2, g_st2) = build_shadow_tree(&m2.propagated, &index_map, &params).unwrap();
    assert_ne!(g_st1, g_st2);
    assert_eq!(
        verify_proof(&registry, &proof, &g_pt, &g_st2, "sec", &artifact),
        Verdict::Reject(RejectReason::RootMismatch)
    );

    // Remediation: a patched SBOM proves cleanly against the new root.
    let patched = sbom_of(&["good"]);
    let artifact2 = content_digest(b"build-2");
    let proof2 = prove(
        &TranscriptBackend,
        &ProveRequest {
            sbom: &patched,
            pt: &pt,
            st: &st2,
            index_map: &index_map,
            policy_set_id: "sec".to_string(),
            artifact_digest: artifact2,
            require_hiding: false,
        },
        &mut rng,
    )
    .unwrap();
    assert!(verify_proof(&registry, &proof2, &g_pt, &g_st2, "sec", &artifact2).is_accept());
}

/// A hidden entry's commitment is the PT leaf digest, so it verifies against
/// the published root through the tree opening.
#[test]
fn hidden_commitment_links_to_package_tree() {
    let snapshot = RegistrySnapshot::from_records(
        vec![record("open-dep", &[]), record("secret-dep", &[])],
        "link",
        8,
    )
    .unwrap();
    let params = setup(128, 8).unwrap();
    let (pt, g_pt, index_map) = build_package_tree(&snapshot, &params).unwrap();

    let sbom = sbom_of(&["open-dep", "secret-dep"]);
    let hide: BTreeSet<usize> = [1].into_iter().collect();
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let redaction = redact(
        &sbom,
        &hide,
        "pi.json",
        &snapshot,
        SaltMode::Unsalted,
        &mut rng,
    )
    .unwrap();

    let PublicEntry::Hidden { commitment, .. } = &redaction.public_sbom.entries[1] else {
        panic!("entry 1 should be hidden");
    };
    let digest = Digest::from_hex(commitment.trim_start_matches("0x")).unwrap();
    let idx = index_map["pkg:secret-dep@1.0"];
    let opening = pt.open(idx).unwrap();
    assert_eq!(opening.leaf, digest);
    assert!(verify_commit(&g_pt, &digest, idx, &opening));
}

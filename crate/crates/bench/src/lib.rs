//! Shared benchmark fixtures: prebuilt dual-tree universes at a few sizes.

use std::collections::BTreeMap;

use bomproof_cli::fixtures;
use bomproof_core::hashing::content_digest;
use bomproof_core::policy::{build_shadow_tree, compose};
use bomproof_core::registry::{build_package_tree, RegistrySnapshot};
use bomproof_core::sbom::Sbom;
use bomproof_core::smt::{setup, SparseTree};
use bomproof_core::Digest;

pub struct BenchUniverse {
    pub snapshot: RegistrySnapshot,
    pub pt: SparseTree,
    pub st: SparseTree,
    pub g_pt: Digest,
    pub g_st: Digest,
    pub index_map: BTreeMap<String, u64>,
    pub artifact: Digest,
}

impl BenchUniverse {
    /// All-compliant universe with `2^log2_packages` packages at depth
    /// `log2_packages + 2`.
    pub fn build(log2_packages: u32, seed: u64) -> Self {
        let depth = log2_packages + 2;
        let params = setup(128, depth).expect("valid depth");
        let snapshot = fixtures::synthetic_snapshot(1 << log2_packages, depth, seed)
            .expect("collision-free synthetic snapshot");
        let (pt, g_pt, index_map) = build_package_tree(&snapshot, &params).expect("pt builds");
        let composed = compose(&snapshot, &[]).expect("empty composition");
        let (st, g_st) = build_shadow_tree(&composed, &index_map, &params).expect("st builds");
        BenchUniverse {
            snapshot,
            pt,
            st,
            g_pt,
            g_st,
            index_map,
            artifact: content_digest(b"bench-artifact"),
        }
    }

    pub fn sbom(&self, deps: usize, seed: u64) -> Sbom {
        fixtures::synthetic_sbom(&self.snapshot, deps, seed)
    }
}

//! Deterministic fixtures: the small demo supply chain used by the lifecycle
//! scenarios and the synthetic registries used by benchmarks and tests.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;

use bomproof_core::error::Result;
use bomproof_core::hashing::derive_index;
use bomproof_core::registry::{canonical_key, PackageRecord, RegistrySnapshot};
use bomproof_core::sbom::{Sbom, SbomEntry};

/// Tree depth for the demo supply chain. The fixed demo keys are
/// collision-free at this depth.
pub const DEMO_DEPTH: u32 = 12;

fn rec(name: &str, version: &str, license: &str, hash: &str, deps: &[&str]) -> PackageRecord {
    PackageRecord {
        name: name.to_string(),
        version: version.to_string(),
        license: license.to_string(),
        artifact_hash: hash.to_string(),
        dependencies: deps.iter().map(|d| d.to_string()).collect(),
        ecosystem: "crates.io".to_string(),
    }
}

/// A six-package registry mirroring a small real-world slice.
pub fn demo_registry() -> Vec<PackageRecord> {
    vec![
        rec("tokio", "1.28.0", "MIT", "9f86a2b7c1", &[]),
        rec("log4rs", "1.2.0", "MIT", "b5d4045c3f", &[]),
        rec(
            "serde",
            "1.0.136",
            "MIT",
            "abc1230000",
            &["serde_derive@1.0.136"],
        ),
        rec("serde_derive", "1.0.136", "MIT", "def4560000", &[]),
        rec("hyper", "0.14.27", "MIT", "7c2225fe21", &["tokio@1.28.0"]),
        rec("openssl", "0.10.55", "Apache-2.0", "11aa22bb33", &[]),
    ]
}

pub fn demo_snapshot() -> Result<RegistrySnapshot> {
    RegistrySnapshot::from_records(demo_registry(), "demo", DEMO_DEPTH)
}

/// The two-dependency internal SBOM the scenarios prove over.
pub fn banking_sbom() -> Sbom {
    Sbom {
        name: "banking-core".to_string(),
        version: "2.4.1".to_string(),
        entries: vec![
            SbomEntry {
                name: "tokio".to_string(),
                version: "1.28.0".to_string(),
                src: "crates.io".to_string(),
            },
            SbomEntry {
                name: "log4rs".to_string(),
                version: "1.2.0".to_string(),
                src: "crates.io".to_string(),
            },
        ],
    }
}

/// The remediated build: the flagged logging dependency removed.
pub fn patched_banking_sbom() -> Sbom {
    Sbom {
        name: "banking-core".to_string(),
        version: "2.4.2".to_string(),
        entries: vec![SbomEntry {
            name: "tokio".to_string(),
            version: "1.28.0".to_string(),
            src: "crates.io".to_string(),
        }],
    }
}

/// An SBOM including a package the registry has never seen.
pub fn unknown_package_sbom() -> Sbom {
    let mut sbom = banking_sbom();
    sbom.entries.push(SbomEntry {
        name: "leftpad".to_string(),
        version: "0.0.1".to_string(),
        src: "unknown".to_string(),
    });
    sbom
}

/// Deterministic stand-in for a delivered build of the demo application.
pub fn demo_artifact(version: &str) -> Vec<u8> {
    format!("banking-core release build {version}\n").into_bytes()
}

/// Generate `count` synthetic packages whose keys are collision-free at
/// `depth` (names are re-drawn until their slot is unused). Dependency edges
/// point at earlier packages only, so the snapshot always resolves.
pub fn synthetic_records(count: usize, depth: u32, seed: u64) -> Vec<PackageRecord> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let licenses = ["MIT", "Apache-2.0", "BSD-3-Clause", "MPL-2.0"];
    let mut used_slots = std::collections::BTreeSet::new();
    let mut records: Vec<PackageRecord> = Vec::with_capacity(count);
    for i in 0..count {
        let version = format!("1.{}.{}", i % 10, i % 4);
        let mut nonce = 0u64;
        let name = loop {
            let candidate = format!("pkg-{i}-{nonce}");
            let slot = derive_index(&canonical_key(&candidate, &version), depth)
                .expect("depth validated by caller");
            if used_slots.insert(slot) {
                break candidate;
            }
            nonce += 1;
        };
        let mut deps = Vec::new();
        if i > 0 {
            for _ in 0..rng.random_range(0..3u32) {
                let target = &records[rng.random_range(0..i)];
                let dep = format!("{}@{}", target.name, target.version);
                if !deps.contains(&dep) {
                    deps.push(dep);
                }
            }
        }
        let mut hash_bytes = [0u8; 8];
        rng.fill_bytes(&mut hash_bytes);
        records.push(PackageRecord {
            name,
            version,
            license: licenses[i % licenses.len()].to_string(),
            artifact_hash: hash_bytes.iter().map(|b| format!("{b:02x}")).collect(),
            dependencies: deps,
            ecosystem: "synthetic".to_string(),
        });
    }
    records
}

pub fn synthetic_snapshot(count: usize, depth: u32, seed: u64) -> Result<RegistrySnapshot> {
    RegistrySnapshot::from_records(synthetic_records(count, depth, seed), "synthetic", depth)
}

/// An SBOM naming `k` distinct packages from the snapshot.
pub fn synthetic_sbom(snapshot: &RegistrySnapshot, k: usize, seed: u64) -> Sbom {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut keys: Vec<&PackageRecord> = snapshot.packages().values().collect();
    // Fisher-Yates prefix shuffle for the first k picks.
    let n = keys.len();
    let k = k.min(n);
    for i in 0..k {
        let j = rng.random_range(i..n);
        keys.swap(i, j);
    }
    Sbom {
        name: "synthetic-app".to_string(),
        version: "0.0.1".to_string(),
        entries: keys[..k]
            .iter()
            .map(|r| SbomEntry {
                name: r.name.clone(),
                version: r.version.clone(),
                src: "synthetic".to_string(),
            })
            .collect(),
    }
}

/// Write records as JSONL, one per line.
pub fn write_jsonl(path: &std::path::Path, records: &[PackageRecord]) -> Result<()> {
    let mut out = String::new();
    for record in records {
        out.push_str(
            &serde_json::to_string(record)
                .map_err(|e| bomproof_core::Error::Schema(e.to_string()))?,
        );
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

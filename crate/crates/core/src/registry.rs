//! Package-registry snapshot ingestion and Package Tree construction.
//!
//! Snapshots arrive as JSONL, one record per line. Each package version gets
//! its own leaf: the canonical key is `pkg:<name>@<version>`, the leaf slot
//! is derived from that key alone, and the leaf value commits to the
//! metadata tuple (name, version, license, artifact hash) with length
//! prefixes so field boundaries are unambiguous.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{derive_index, hash, Digest, DomainTag, PublicParams};
use crate::smt::SparseTree;

/// One package version as published by the registry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageRecord {
    pub name: String,
    pub version: String,
    #[serde(default)]
    pub license: String,
    /// Content checksum as published upstream; treated as an opaque string.
    #[serde(rename = "hash", default)]
    pub artifact_hash: String,
    /// Dependency keys in `name@version` form, resolvable within the same
    /// snapshot.
    #[serde(default)]
    pub dependencies: Vec<String>,
    #[serde(default)]
    pub ecosystem: String,
}

impl PackageRecord {
    /// `pkg:<name>@<version>`: unique per snapshot, and the sole input to
    /// leaf-slot derivation.
    pub fn canonical_key(&self) -> String {
        canonical_key(&self.name, &self.version)
    }
}

pub fn canonical_key(name: &str, version: &str) -> String {
    format!("pkg:{name}@{version}")
}

/// Canonical key for a `name@version` dependency reference.
pub fn dependency_key(dep: &str) -> String {
    format!("pkg:{dep}")
}

/// A validated, immutable registry snapshot.
#[derive(Clone, Debug)]
pub struct RegistrySnapshot {
    packages: BTreeMap<String, PackageRecord>,
    pub snapshot_id: String,
    pub depth: u32,
}

impl RegistrySnapshot {
    /// Validate records and build the snapshot map. Rejects duplicate keys,
    /// empty names/versions, and dependencies that do not resolve within the
    /// same snapshot.
    pub fn from_records(
        records: Vec<PackageRecord>,
        snapshot_id: &str,
        depth: u32,
    ) -> Result<Self> {
        crate::hashing::check_depth(depth)?;
        let mut packages = BTreeMap::new();
        for record in records {
            if record.name.is_empty() || record.version.is_empty() {
                return Err(Error::Schema(format!(
                    "package record with empty name or version (name={:?}, version={:?})",
                    record.name, record.version
                )));
            }
            let key = record.canonical_key();
            if packages.insert(key.clone(), record).is_some() {
                return Err(Error::DuplicatePackage(key));
            }
        }
        for (key, record) in &packages {
            for dep in &record.dependencies {
                let dep_key = dependency_key(dep);
                if !packages.contains_key(&dep_key) {
                    return Err(Error::DanglingDependency {
                        referrer: key.clone(),
                        dependency: dep_key,
                    });
                }
            }
        }
        Ok(RegistrySnapshot {
            packages,
            snapshot_id: snapshot_id.to_string(),
            depth,
        })
    }

    pub fn get(&self, canonical_key: &str) -> Option<&PackageRecord> {
        self.packages.get(canonical_key)
    }

    pub fn packages(&self) -> &BTreeMap<String, PackageRecord> {
        &self.packages
    }

    pub fn len(&self) -> usize {
        self.packages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packages.is_empty()
    }

    /// Re-serialize as JSONL, one record per line in key order. Loading this
    /// output reproduces the snapshot exactly.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for record in self.packages.values() {
            out.push_str(&serde_json::to_string(record).map_err(|e| Error::Schema(e.to_string()))?);
            out.push('\n');
        }
        Ok(out)
    }
}

/// Load a snapshot from a JSONL stream. The resulting map is independent of
/// line order; blank lines are ignored.
pub fn load_snapshot(
    reader: impl BufRead,
    snapshot_id: &str,
    depth: u32,
) -> Result<RegistrySnapshot> {
    let mut records = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: PackageRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        records.push(record);
    }
    RegistrySnapshot::from_records(records, snapshot_id, depth)
}

/// Load a snapshot from a JSONL file; the snapshot id is the file stem.
pub fn load_snapshot_path(path: &Path, depth: u32) -> Result<RegistrySnapshot> {
    let file = std::fs::File::open(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "snapshot".to_string());
    load_snapshot(std::io::BufReader::new(file), &id, depth)
}

/// Package Tree leaf value: the metadata commitment.
///
/// Canonical serialization is length-prefixed (u32 big-endian) UTF-8 fields
/// in fixed order: name, version, license, artifact hash. Prefixes keep
/// field boundaries out of the attacker's control.
pub fn leaf_commitment(record: &PackageRecord) -> Digest {
    hash(DomainTag::LeafPt, &metadata_bytes(record))
}

/// The canonical metadata tuple encoding; also the pre-image an opener may
/// reveal to let a verifier reconstruct the leaf.
pub fn metadata_bytes(record: &PackageRecord) -> Vec<u8> {
    let fields = [
        record.name.as_str(),
        record.version.as_str(),
        record.license.as_str(),
        record.artifact_hash.as_str(),
    ];
    let mut out = Vec::with_capacity(fields.iter().map(|f| f.len() + 4).sum());
    for field in fields {
        out.extend_from_slice(&(field.len() as u32).to_be_bytes());
        out.extend_from_slice(field.as_bytes());
    }
    out
}

/// Derive the key → slot map for a snapshot, refusing collisions with both
/// keys named. A pure function of (snapshot keys, depth).
pub fn derive_index_map(snapshot: &RegistrySnapshot, depth: u32) -> Result<BTreeMap<String, u64>> {
    let mut index_map = BTreeMap::new();
    let mut slot_owner: BTreeMap<u64, String> = BTreeMap::new();
    for key in snapshot.packages().keys() {
        let idx = derive_index(key, depth)?;
        if let Some(existing) = slot_owner.get(&idx) {
            return Err(Error::IndexCollision {
                index: idx,
                existing: existing.clone(),
                incoming: key.clone(),
            });
        }
        slot_owner.insert(idx, key.clone());
        index_map.insert(key.clone(), idx);
    }
    Ok(index_map)
}

/// Build the Package Tree: one occupied slot per package, slot derived from
/// the canonical key. Returns the tree, the published root `g_PT`, and the
/// key → index map.
///
/// Two keys landing in one slot abort the build with both keys named;
/// silently overwriting would break what position binding promises.
pub fn build_package_tree(
    snapshot: &RegistrySnapshot,
    params: &PublicParams,
) -> Result<(SparseTree, Digest, BTreeMap<String, u64>)> {
    if params.depth() != snapshot.depth {
        return Err(Error::Usage(format!(
            "params depth {} does not match snapshot depth {}",
            params.depth(),
            snapshot.depth
        )));
    }
    let index_map = derive_index_map(snapshot, params.depth())?;
    let leaves = index_map
        .iter()
        .map(|(key, &idx)| {
            let record = snapshot.get(key).expect("index map key from snapshot");
            (idx, leaf_commitment(record))
        })
        .collect();
    let tree = SparseTree::commit(params, &leaves)?;
    let root = tree.root();
    Ok((tree, root, index_map))
}

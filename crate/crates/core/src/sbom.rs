//! Internal SBOM model and redaction into a public SBOM.
//!
//! Redaction replaces chosen entries with their Package Tree leaf digests
//! (`{"commitment": "0x…", "type": "zk-hidden"}`) and attaches a proof
//! reference. Entry count is preserved: hiding conceals identity, not
//! cardinality. Because the default commitment is deterministic over the
//! package metadata, anyone who can guess a candidate package can confirm it
//! by recomputation; deployments that need resistance to such guessing can
//! request salted commitments, where 32 random bytes are mixed into the
//! hidden-entry commitment only (never into the tree leaf) and retained by
//! the vendor for out-of-band disclosure.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{hash, Digest, DomainTag};
use crate::registry::{canonical_key, metadata_bytes, RegistrySnapshot};

/// One internal SBOM dependency entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbomEntry {
    pub name: String,
    pub version: String,
    pub src: String,
}

impl SbomEntry {
    pub fn canonical_key(&self) -> String {
        canonical_key(&self.name, &self.version)
    }
}

/// The vendor's internal SBOM.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sbom {
    pub name: String,
    pub version: String,
    #[serde(rename = "dependencies")]
    pub entries: Vec<SbomEntry>,
}

impl Sbom {
    /// Parse an SBOM document. Malformed JSON is a parse error; valid JSON
    /// with missing or mistyped fields is a schema error.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| {
            if e.classify() == serde_json::error::Category::Data {
                Error::Schema(format!("bad SBOM document: {e}"))
            } else {
                Error::Parse {
                    line: e.line(),
                    msg: e.to_string(),
                }
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// A public SBOM entry: either disclosed verbatim or hidden behind a
/// commitment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PublicEntry {
    Hidden {
        /// `0x`-prefixed hex of the hidden dependency's leaf commitment.
        commitment: String,
        #[serde(rename = "type")]
        entry_type: String,
    },
    Disclosed {
        name: String,
        version: String,
        src: String,
    },
}

pub const HIDDEN_ENTRY_TYPE: &str = "zk-hidden";

impl PublicEntry {
    pub fn is_hidden(&self) -> bool {
        matches!(self, PublicEntry::Hidden { .. })
    }
}

/// The verifier-facing SBOM: disclosed entries, commitments for hidden ones,
/// and a proof reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicSbom {
    pub name: String,
    pub version: String,
    #[serde(rename = "dependencies")]
    pub entries: Vec<PublicEntry>,
    pub zk_proof: String,
}

impl PublicSbom {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("bad public SBOM: {e}")))
    }
}

/// Whether hidden-entry commitments are the bare leaf digests or salted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaltMode {
    /// Commitment equals the Package Tree leaf digest (default; binding but
    /// guessable by dictionary).
    Unsalted,
    /// Mix 32 fresh random bytes per hidden entry into the commitment.
    Salted,
}

/// Result of redaction: the public SBOM plus any retained salts, keyed by
/// entry position. Salts never appear in the public document.
#[derive(Clone, Debug)]
pub struct Redaction {
    pub public_sbom: PublicSbom,
    pub salts: BTreeMap<usize, [u8; 32]>,
}

/// Redact an SBOM: replace entries at `hide` positions with commitments and
/// attach `proof_ref`. Disclosed entries pass through byte-identical.
pub fn redact(
    sbom: &Sbom,
    hide: &BTreeSet<usize>,
    proof_ref: &str,
    snapshot: &RegistrySnapshot,
    salt_mode: SaltMode,
    rng: &mut dyn Rng,
) -> Result<Redaction> {
    if let Some(&bad) = hide.iter().find(|&&pos| pos >= sbom.entries.len()) {
        return Err(Error::Usage(format!(
            "hide position {bad} out of range for {} entries",
            sbom.entries.len()
        )));
    }
    let mut entries = Vec::with_capacity(sbom.entries.len());
    let mut salts = BTreeMap::new();
    for (pos, entry) in sbom.entries.iter().enumerate() {
        if !hide.contains(&pos) {
            entries.push(PublicEntry::Disclosed {
                name: entry.name.clone(),
                version: entry.version.clone(),
                src: entry.src.clone(),
            });
            continue;
        }
        let key = entry.canonical_key();
        let record = snapshot.get(&key).ok_or(Error::UnresolvableDependency {
            step: pos as u64 + 1,
        })?;
        let commitment = match salt_mode {
            SaltMode::Unsalted => crate::registry::leaf_commitment(record),
            SaltMode::Salted => {
                let mut salt = [0u8; 32];
                rng.fill_bytes(&mut salt);
                salts.insert(pos, salt);
                salted_commitment(record, &salt)
            }
        };
        entries.push(PublicEntry::Hidden {
            commitment: format!("0x{}", commitment.to_hex()),
            entry_type: HIDDEN_ENTRY_TYPE.to_string(),
        });
    }
    Ok(Redaction {
        public_sbom: PublicSbom {
            name: sbom.name.clone(),
            version: sbom.version.clone(),
            entries,
            zk_proof: proof_ref.to_string(),
        },
        salts,
    })
}

/// Salted hidden-entry commitment: the canonical metadata tuple with the
/// salt appended. The tuple encoding is self-delimiting, so appending is
/// unambiguous.
pub fn salted_commitment(record: &crate::registry::PackageRecord, salt: &[u8; 32]) -> Digest {
    let mut payload = metadata_bytes(record);
    payload.extend_from_slice(salt);
    hash(DomainTag::LeafPt, &payload)
}

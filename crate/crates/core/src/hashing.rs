//! Domain-separated 256-bit hashing, canonical encodings, and deterministic
//! index derivation.
//!
//! Every commitment in the system (leaf values, internal nodes, tree roots,
//! fold accumulators) is a [`Digest`] produced by [`hash`] under one of a
//! fixed set of [`DomainTag`]s. The encoding is
//! `SHA-256(tag || 0x00 || payload)`; the tag set is closed so two different
//! kinds of node can never share a preimage stream.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest as _, Sha256};

use crate::error::{Error, Result};

/// Digest width in bytes.
pub const DIGEST_LEN: usize = 32;

/// Identifier of the one hash algorithm this build supports. Recorded in
/// every serialized artifact so roots and proofs are self-describing.
pub const HASH_ALG_ID: &str = "sha-256";

/// Largest supported tree depth. Indices fit comfortably in a `u64`.
pub const MAX_DEPTH: u32 = 40;

/// A 256-bit hash value: the universal commitment currency.
///
/// Serializes as exactly 64 lowercase hex characters, no prefix. Equality is
/// byte-wise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest([u8; DIGEST_LEN]);

impl Digest {
    pub const fn from_bytes(bytes: [u8; DIGEST_LEN]) -> Self {
        Digest(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; DIGEST_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// Parse 64 lowercase hex characters. Uppercase input is rejected so a
    /// digest has exactly one serialized form.
    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() != DIGEST_LEN * 2 {
            return Err(Error::Schema(format!(
                "digest hex must be {} chars, got {}",
                DIGEST_LEN * 2,
                s.len()
            )));
        }
        if !s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(Error::Schema(
                "digest hex must be lowercase [0-9a-f]".to_string(),
            ));
        }
        let mut bytes = [0u8; DIGEST_LEN];
        hex::decode_to_slice(s, &mut bytes)
            .map_err(|e| Error::Schema(format!("bad digest hex: {e}")))?;
        Ok(Digest(bytes))
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Digest {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Digest::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// The closed set of domain-separation tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainTag {
    /// Package Tree leaf: commitment to package metadata.
    LeafPt,
    /// Shadow Tree leaf: commitment to a compliance bit.
    LeafSt,
    /// Internal tree node: `hash(node, left || right)`.
    Node,
    /// The empty-leaf default for unoccupied slots.
    Empty,
    /// Leaf index derivation from a canonical package key.
    Index,
    /// Fold-accumulator chaining.
    Accum,
}

impl DomainTag {
    pub const ALL: [DomainTag; 6] = [
        DomainTag::LeafPt,
        DomainTag::LeafSt,
        DomainTag::Node,
        DomainTag::Empty,
        DomainTag::Index,
        DomainTag::Accum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DomainTag::LeafPt => "leaf-pt",
            DomainTag::LeafSt => "leaf-st",
            DomainTag::Node => "node",
            DomainTag::Empty => "empty",
            DomainTag::Index => "index",
            DomainTag::Accum => "accum",
        }
    }

    /// Resolve a tag by its serialized name; unknown names are a usage error.
    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|t| t.name() == name)
            .ok_or_else(|| Error::Usage(format!("unknown domain tag {name:?}")))
    }
}

/// Domain-separated hash: `SHA-256(tag || 0x00 || payload)`.
///
/// The 0x00 byte terminates the tag; no tag name contains NUL, so streams
/// under distinct tags can never collide byte-for-byte.
pub fn hash(tag: DomainTag, payload: &[u8]) -> Digest {
    let mut h = Sha256::new();
    h.update(tag.name().as_bytes());
    h.update([0x00]);
    h.update(payload);
    Digest(h.finalize().into())
}

/// Hash the concatenation of two digests under `tag` without an intermediate
/// allocation. `hash2(Node, l, r)` is the internal-node combiner.
pub fn hash2(tag: DomainTag, left: &Digest, right: &Digest) -> Digest {
    let mut h = Sha256::new();
    h.update(tag.name().as_bytes());
    h.update([0x00]);
    h.update(left.as_bytes());
    h.update(right.as_bytes());
    Digest(h.finalize().into())
}

/// Plain content digest (no domain tag): binds delivered artifact bytes into
/// a proof. Untagged deliberately so it matches the common external notion of
/// a file checksum.
pub fn content_digest(bytes: &[u8]) -> Digest {
    let mut h = Sha256::new();
    h.update(bytes);
    Digest(h.finalize().into())
}

/// Derive the leaf slot for a canonical package key.
///
/// `index = int_be(hash(index, key)) mod 2^depth`: the digest is read as a
/// big-endian 256-bit integer, so the low `depth` bits live in the trailing
/// bytes. Changing this byte order breaks the pinned golden vectors.
pub fn derive_index(package_key: &str, depth: u32) -> Result<u64> {
    if package_key.is_empty() {
        return Err(Error::Usage("package key must be non-empty".to_string()));
    }
    check_depth(depth)?;
    let digest = hash(DomainTag::Index, package_key.as_bytes());
    let tail: [u8; 8] = digest.as_bytes()[24..32].try_into().expect("8 bytes");
    let low = u64::from_be_bytes(tail);
    Ok(low & ((1u64 << depth) - 1))
}

pub(crate) fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Usage(format!(
            "depth must be in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    Ok(())
}

/// Public system parameters: tree depth plus the hash algorithm identifier.
///
/// Capacity (`2^depth`) and the domain-tag set are derived, not stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicParams {
    depth: u32,
    hash_alg_id: String,
}

impl PublicParams {
    pub(crate) fn new(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        Ok(PublicParams {
            depth,
            hash_alg_id: HASH_ALG_ID.to_string(),
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Vector-commitment size `N = 2^depth`.
    pub fn capacity(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn hash_alg_id(&self) -> &str {
        &self.hash_alg_id
    }

    pub fn domain_tags(&self) -> &'static [DomainTag] {
        &DomainTag::ALL
    }
}

//! Fixed-depth sparse Merkle tree: the vector commitment backing both the
//! Package Tree and the Shadow Tree.
//!
//! Unoccupied slots carry the default chain `E_0 = hash(empty, "")`,
//! `E_{k+1} = hash(node, E_k || E_k)`, so the root is a commitment to all
//! `2^depth` slots while storage stays proportional to the occupied set.
//! Direction bits come from the leaf index: bit `k` (least significant =
//! leaf level) selects whether the path node is a left or right child.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{hash, hash2, Digest, DomainTag, PublicParams, HASH_ALG_ID};

/// Initialize public parameters for a tree of the given depth.
///
/// `security_bits` selects the collision-resistance level; the built-in
/// 256-bit hash provides 128-bit collision resistance, so higher requests
/// are refused rather than silently under-delivered.
pub fn setup(security_bits: u32, depth: u32) -> Result<PublicParams> {
    if security_bits == 0 || security_bits > 128 {
        return Err(Error::Usage(format!(
            "security level {security_bits} not supported; {HASH_ALG_ID} provides up to 128-bit collision resistance"
        )));
    }
    PublicParams::new(depth)
}

/// Precompute the default-subtree digests `E_0 ..= E_depth`.
pub fn empty_chain(depth: u32) -> Vec<Digest> {
    let mut chain = Vec::with_capacity(depth as usize + 1);
    let mut e = hash(DomainTag::Empty, b"");
    chain.push(e);
    for _ in 0..depth {
        e = hash2(DomainTag::Node, &e, &e);
        chain.push(e);
    }
    chain
}

/// An opening: the sibling path from one leaf slot to the root.
///
/// `siblings` is leaf-level first and always exactly `depth` long, so the
/// sibling data weighs `depth * 32` bytes for every index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opening {
    pub index: u64,
    pub leaf: Digest,
    pub siblings: Vec<Digest>,
}

/// Replay the path recursion and compare against `root`.
///
/// Total over arbitrary input: a wrong-length path or any perturbed byte
/// yields `false`, never an error. The recursion consumes the `index`
/// argument for direction bits, so an opening replayed against a different
/// index recomputes a different root.
pub fn verify_commit(root: &Digest, leaf: &Digest, index: u64, opening: &Opening) -> bool {
    if opening.siblings.len() > crate::hashing::MAX_DEPTH as usize {
        return false;
    }
    if index >> opening.siblings.len() != 0 {
        // Index points outside the capacity implied by the path length.
        return false;
    }
    let mut x = *leaf;
    for (level, sibling) in opening.siblings.iter().enumerate() {
        x = if (index >> level) & 1 == 0 {
            hash2(DomainTag::Node, &x, sibling)
        } else {
            hash2(DomainTag::Node, sibling, &x)
        };
    }
    x == *root
}

/// Sparse Merkle tree with cached non-default internal nodes.
///
/// A committed tree is immutable for `open`/`root` purposes and safely
/// shareable across threads; [`SparseTree::update`] requires exclusive
/// access and produces the logically next tree state.
#[derive(Clone, Debug)]
pub struct SparseTree {
    params: PublicParams,
    occupied: BTreeMap<u64, Digest>,
    /// (level, position) -> digest for internal nodes that differ from the
    /// default chain. Level 1..=depth; leaves live in `occupied`.
    node_cache: HashMap<(u32, u64), Digest>,
    empty_chain: Vec<Digest>,
}

impl SparseTree {
    /// Commit to a leaf map. The root is independent of insertion order and
    /// equals the dense fold over all `2^depth` slots.
    pub fn commit(params: &PublicParams, leaves: &BTreeMap<u64, Digest>) -> Result<Self> {
        let capacity = params.capacity();
        if let Some((&bad, _)) = leaves.iter().find(|(&idx, _)| idx >= capacity) {
            return Err(Error::Usage(format!(
                "leaf index {bad} out of range for capacity {capacity}"
            )));
        }
        let mut tree = SparseTree {
            params: params.clone(),
            occupied: leaves.clone(),
            node_cache: HashMap::new(),
            empty_chain: empty_chain(params.depth()),
        };
        tree.rebuild();
        Ok(tree)
    }

    pub fn empty(params: &PublicParams) -> Self {
        SparseTree {
            params: params.clone(),
            occupied: BTreeMap::new(),
            node_cache: HashMap::new(),
            empty_chain: empty_chain(params.depth()),
        }
    }

    fn rebuild(&mut self) {
        self.node_cache.clear();
        let mut dirty: BTreeSet<u64> = self.occupied.keys().map(|&i| i >> 1).collect();
        for level in 1..=self.params.depth() {
            let mut next = BTreeSet::new();
            for &pos in &dirty {
                let left = self.node_at(level - 1, pos << 1);
                let right = self.node_at(level - 1, (pos << 1) | 1);
                let digest = hash2(DomainTag::Node, &left, &right);
                if digest != self.empty_chain[level as usize] {
                    self.node_cache.insert((level, pos), digest);
                }
                next.insert(pos >> 1);
            }
            dirty = next;
        }
    }

    fn node_at(&self, level: u32, pos: u64) -> Digest {
        if level == 0 {
            return self
                .occupied
                .get(&pos)
                .copied()
                .unwrap_or(self.empty_chain[0]);
        }
        self.node_cache
            .get(&(level, pos))
            .copied()
            .unwrap_or(self.empty_chain[level as usize])
    }

    /// The root digest `g`: a pure function of (params, occupied leaves).
    pub fn root(&self) -> Digest {
        self.node_at(self.params.depth(), 0)
    }

    /// Generate the opening for a slot. Opening an unoccupied slot is
    /// allowed and yields the default-leaf opening.
    pub fn open(&self, index: u64) -> Result<Opening> {
        self.check_index(index)?;
        let depth = self.params.depth();
        let mut siblings = Vec::with_capacity(depth as usize);
        for level in 0..depth {
            siblings.push(self.node_at(level, (index >> level) ^ 1));
        }
        Ok(Opening {
            index,
            leaf: self.node_at(0, index),
            siblings,
        })
    }

    /// Replace one leaf and recompute only the path to the root. Writing the
    /// default leaf erases the slot.
    pub fn update(&mut self, index: u64, leaf: Digest) -> Result<Digest> {
        self.check_index(index)?;
        if leaf == self.empty_chain[0] {
            self.occupied.remove(&index);
        } else {
            self.occupied.insert(index, leaf);
        }
        for level in 1..=self.params.depth() {
            let pos = index >> level;
            let left = self.node_at(level - 1, pos << 1);
            let right = self.node_at(level - 1, (pos << 1) | 1);
            let digest = hash2(DomainTag::Node, &left, &right);
            if digest == self.empty_chain[level as usize] {
                self.node_cache.remove(&(level, pos));
            } else {
                self.node_cache.insert((level, pos), digest);
            }
        }
        Ok(self.root())
    }

    /// Stored leaf digest, or the default for unoccupied slots.
    pub fn leaf(&self, index: u64) -> Result<Digest> {
        self.check_index(index)?;
        Ok(self.node_at(0, index))
    }

    pub fn params(&self) -> &PublicParams {
        &self.params
    }

    pub fn occupied(&self) -> &BTreeMap<u64, Digest> {
        &self.occupied
    }

    pub fn default_leaf(&self) -> Digest {
        self.empty_chain[0]
    }

    /// Number of stored digests (occupied leaves + cached internal nodes);
    /// `node_count() * 32` is the storage footprint proxy.
    pub fn node_count(&self) -> usize {
        self.occupied.len() + self.node_cache.len()
    }

    fn check_index(&self, index: u64) -> Result<()> {
        if index >= self.params.capacity() {
            return Err(Error::Usage(format!(
                "index {index} out of range for capacity {}",
                self.params.capacity()
            )));
        }
        Ok(())
    }
}

/// Which of the two isomorphic trees a published root belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeKind {
    #[serde(rename = "PT")]
    Pt,
    #[serde(rename = "ST")]
    St,
}

/// The published root artifact.
///
/// Shadow Tree roots additionally carry the sorted policy ids they commit
/// to; the canonical set id is the ids joined with `+`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootFile {
    pub root: Digest,
    pub depth: u32,
    pub hash_alg_id: String,
    pub tree_kind: TreeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy_set: Option<Vec<String>>,
}

impl RootFile {
    pub fn package_tree(root: Digest, params: &PublicParams) -> Self {
        RootFile {
            root,
            depth: params.depth(),
            hash_alg_id: params.hash_alg_id().to_string(),
            tree_kind: TreeKind::Pt,
            policy_set: None,
        }
    }

    pub fn shadow_tree(root: Digest, params: &PublicParams, mut policy_ids: Vec<String>) -> Self {
        policy_ids.sort();
        RootFile {
            root,
            depth: params.depth(),
            hash_alg_id: params.hash_alg_id().to_string(),
            tree_kind: TreeKind::St,
            policy_set: Some(policy_ids),
        }
    }

    /// Canonical set id for an ST root; `None` for PT roots.
    pub fn set_id(&self) -> Option<String> {
        self.policy_set.as_ref().map(|ids| {
            let mut sorted = ids.clone();
            sorted.sort();
            sorted.join("+")
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("bad root file: {e}")))
    }
}

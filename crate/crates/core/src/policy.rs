//! Policy evaluation, non-compliance propagation over the dependency graph,
//! and Shadow Tree construction.
//!
//! An auditor expresses each policy as a local verdict per package
//! (`L(p) ∈ {0,1}`), then propagation lowers a package's verdict to 0
//! whenever any package reachable through its dependency edges, itself
//! included, is locally flagged. The propagated verdict is the greatest
//! fixpoint of `C(p) = L(p) * Π C(d)`, computed by pushing zeros along
//! reverse edges until stable: a cycle of clean packages stays compliant,
//! a cycle containing one flagged package is wholly non-compliant.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{hash, Digest, DomainTag, PublicParams};
use crate::registry::{dependency_key, RegistrySnapshot};
use crate::smt::SparseTree;

/// Compliance bit: 1 compliant, 0 non-compliant.
pub type Bit = u8;

/// Per-package verdict map keyed by canonical package key.
pub type BitMap = BTreeMap<String, Bit>;

/// What a policy checks. Payloads are non-empty by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum PolicyKind {
    /// Canonical keys flagged non-compliant outright.
    DenyList(BTreeSet<String>),
    /// Licenses a record must carry one of.
    LicenseAllowList(BTreeSet<String>),
    /// Per-package-name minimum version.
    VersionFloor(BTreeMap<String, String>),
}

/// A single named policy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyConstraint {
    pub policy_id: String,
    #[serde(flatten)]
    pub kind: PolicyKind,
}

impl PolicyConstraint {
    pub fn deny_list(policy_id: &str, keys: impl IntoIterator<Item = String>) -> Self {
        PolicyConstraint {
            policy_id: policy_id.to_string(),
            kind: PolicyKind::DenyList(keys.into_iter().collect()),
        }
    }

    pub fn license_allow_list(policy_id: &str, licenses: impl IntoIterator<Item = String>) -> Self {
        PolicyConstraint {
            policy_id: policy_id.to_string(),
            kind: PolicyKind::LicenseAllowList(licenses.into_iter().collect()),
        }
    }

    pub fn version_floor(policy_id: &str, floors: BTreeMap<String, String>) -> Self {
        PolicyConstraint {
            policy_id: policy_id.to_string(),
            kind: PolicyKind::VersionFloor(floors),
        }
    }

    /// Policy ids become file-name components, so keep them to a safe
    /// alphabet. Deny-list payloads may be empty (an auditor may start with
    /// nothing flagged); the other kinds need content to mean anything.
    pub fn validate(&self) -> Result<()> {
        if self.policy_id.is_empty()
            || !self
                .policy_id
                .bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_')
        {
            return Err(Error::Usage(format!(
                "policy id {:?} must be non-empty [a-z0-9_-]",
                self.policy_id
            )));
        }
        match &self.kind {
            PolicyKind::DenyList(_) => Ok(()),
            PolicyKind::LicenseAllowList(set) if set.is_empty() => Err(Error::Usage(
                "license-allow-list payload must be non-empty".to_string(),
            )),
            PolicyKind::VersionFloor(map) if map.is_empty() => Err(Error::Usage(
                "version-floor payload must be non-empty".to_string(),
            )),
            _ => Ok(()),
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let policy: PolicyConstraint = serde_json::from_slice(bytes)
            .map_err(|e| Error::Schema(format!("bad policy file: {e}")))?;
        policy.validate()?;
        Ok(policy)
    }
}

/// An ordered set of policies with a canonical identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicySet {
    policies: Vec<PolicyConstraint>,
}

impl PolicySet {
    pub fn new(policies: Vec<PolicyConstraint>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &policies {
            p.validate()?;
            if !seen.insert(p.policy_id.clone()) {
                return Err(Error::Usage(format!(
                    "duplicate policy id {:?} in set",
                    p.policy_id
                )));
            }
        }
        Ok(PolicySet { policies })
    }

    pub fn empty() -> Self {
        PolicySet { policies: vec![] }
    }

    /// Canonical id: sorted policy ids joined with `+`. Invariant under
    /// insertion order.
    pub fn set_id(&self) -> String {
        let mut ids: Vec<&str> = self.policies.iter().map(|p| p.policy_id.as_str()).collect();
        ids.sort_unstable();
        ids.join("+")
    }

    pub fn policies(&self) -> &[PolicyConstraint] {
        &self.policies
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.policies.iter().map(|p| p.policy_id.clone()).collect();
        ids.sort_unstable();
        ids
    }

    /// Union with a disjoint set of policies; id clashes are refused.
    pub fn union(&self, extra: &[PolicyConstraint]) -> Result<PolicySet> {
        let mut combined = self.policies.clone();
        combined.extend_from_slice(extra);
        PolicySet::new(combined).map_err(|_| {
            Error::Usage("policy id clash between auditor and client sets".to_string())
        })
    }

    pub fn is_empty(&self) -> bool {
        self.policies.is_empty()
    }
}

/// Local and propagated verdicts for one policy over one snapshot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplianceMap {
    pub policy_id: String,
    pub local: BitMap,
    pub propagated: BitMap,
}

/// Evaluate a policy's local verdict `L(p)` for every package.
pub fn evaluate_local(snapshot: &RegistrySnapshot, policy: &PolicyConstraint) -> BitMap {
    snapshot
        .packages()
        .iter()
        .map(|(key, record)| {
            let ok = match &policy.kind {
                PolicyKind::DenyList(denied) => !denied.contains(key),
                PolicyKind::LicenseAllowList(allowed) => allowed.contains(&record.license),
                PolicyKind::VersionFloor(floors) => match floors.get(&record.name) {
                    Some(floor) => !version_lt(&record.version, floor),
                    None => true,
                },
            };
            (key.clone(), ok as Bit)
        })
        .collect()
}

/// Propagate non-compliance: `C(p) = 0` iff some package with `L = 0` is
/// reachable from `p` along dependency edges (including `p` itself).
///
/// Zeros are pushed along reverse edges to a fixpoint, which terminates on
/// any graph, cycles included.
pub fn propagate(snapshot: &RegistrySnapshot, local: &BitMap) -> Result<BitMap> {
    for key in snapshot.packages().keys() {
        if !local.contains_key(key) {
            return Err(Error::Usage(format!("local verdict map missing key {key}")));
        }
    }
    if local.len() != snapshot.len() {
        return Err(Error::Usage(
            "local verdict map contains keys outside the snapshot".to_string(),
        ));
    }

    let mut dependents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (key, record) in snapshot.packages() {
        for dep in &record.dependencies {
            let dep_key = dependency_key(dep);
            // Resolvability was checked at snapshot load.
            let (resolved, _) = snapshot
                .packages()
                .get_key_value(&dep_key)
                .expect("snapshot invariant: dependencies resolve");
            dependents.entry(resolved).or_default().push(key);
        }
    }

    let mut out = local.clone();
    let mut queue: VecDeque<&str> = local
        .iter()
        .filter(|(_, &bit)| bit == 0)
        .map(|(k, _)| k.as_str())
        .collect();
    while let Some(zero) = queue.pop_front() {
        if let Some(parents) = dependents.get(zero) {
            for &parent in parents {
                let bit = out.get_mut(parent).expect("covered");
                if *bit == 1 {
                    *bit = 0;
                    queue.push_back(parent);
                }
            }
        }
    }
    Ok(out)
}

/// Evaluate and propagate one policy in a single call.
pub fn evaluate_policy(
    snapshot: &RegistrySnapshot,
    policy: &PolicyConstraint,
) -> Result<ComplianceMap> {
    policy.validate()?;
    let local = evaluate_local(snapshot, policy);
    let propagated = propagate(snapshot, &local)?;
    Ok(ComplianceMap {
        policy_id: policy.policy_id.clone(),
        local,
        propagated,
    })
}

/// Pointwise conjunction of propagated maps over the snapshot's key set.
/// Zero maps compose to all-compliant (the empty product).
pub fn compose(snapshot: &RegistrySnapshot, maps: &[&BitMap]) -> Result<BitMap> {
    let mut out: BitMap = snapshot.packages().keys().map(|k| (k.clone(), 1)).collect();
    for map in maps {
        if map.len() != out.len() || !map.keys().eq(out.keys()) {
            return Err(Error::Usage(
                "compliance maps cover different key sets".to_string(),
            ));
        }
        for (key, bit) in out.iter_mut() {
            *bit *= map[key];
        }
    }
    Ok(out)
}

/// Client-on-demand aggregation: evaluate the client's extra policies from
/// scratch, reuse the auditor's already-propagated maps, and compose the
/// union. The returned set id reflects the union.
pub fn aggregate_on_demand(
    snapshot: &RegistrySnapshot,
    auditor_set: &PolicySet,
    auditor_maps: &[ComplianceMap],
    client_policies: &[PolicyConstraint],
) -> Result<(PolicySet, BitMap)> {
    let auditor_ids: BTreeSet<&str> = auditor_set
        .policies()
        .iter()
        .map(|p| p.policy_id.as_str())
        .collect();
    let map_ids: BTreeSet<&str> = auditor_maps.iter().map(|m| m.policy_id.as_str()).collect();
    if auditor_ids != map_ids {
        return Err(Error::Usage(
            "auditor compliance maps do not match the auditor policy set".to_string(),
        ));
    }

    let target = auditor_set.union(client_policies)?;

    let client_maps: Vec<ComplianceMap> = client_policies
        .iter()
        .map(|p| evaluate_policy(snapshot, p))
        .collect::<Result<_>>()?;

    let all: Vec<&BitMap> = auditor_maps
        .iter()
        .chain(client_maps.iter())
        .map(|m| &m.propagated)
        .collect();
    let composed = compose(snapshot, &all)?;
    Ok((target, composed))
}

/// Shadow Tree leaf encoding for a compliance bit.
///
/// The bit is hashed under its own domain so the compliant leaf is a single
/// well-known digest: the value a dual-membership check forces.
pub fn shadow_leaf(bit: Bit) -> Digest {
    hash(DomainTag::LeafSt, &[bit])
}

/// Build a Shadow Tree isomorphic to the Package Tree: same depth, same
/// occupied indices, leaves carrying the composed compliance bits.
pub fn build_shadow_tree(
    composed: &BitMap,
    index_map: &BTreeMap<String, u64>,
    params: &PublicParams,
) -> Result<(SparseTree, Digest)> {
    let mut leaves = BTreeMap::new();
    for (key, &idx) in index_map {
        let bit = composed.get(key).ok_or_else(|| {
            Error::Usage(format!("composed map missing key {key} from index map"))
        })?;
        leaves.insert(idx, shadow_leaf(*bit));
    }
    let tree = SparseTree::commit(params, &leaves)?;
    let root = tree.root();
    Ok((tree, root))
}

/// Dotted-numeric version order: compare numeric components left to right,
/// missing components count as 0, non-numeric tails are ignored.
pub fn version_lt(a: &str, b: &str) -> bool {
    let parse = |v: &str| -> Vec<u64> {
        v.split('.')
            .map(|c| {
                let digits: String = c.chars().take_while(|ch| ch.is_ascii_digit()).collect();
                digits.parse().unwrap_or(0)
            })
            .collect()
    };
    let (va, vb) = (parse(a), parse(b));
    let len = va.len().max(vb.len());
    for i in 0..len {
        let x = va.get(i).copied().unwrap_or(0);
        let y = vb.get(i).copied().unwrap_or(0);
        if x != y {
            return x < y;
        }
    }
    false
}

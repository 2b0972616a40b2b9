//! Pluggable proof-backend contract.
//!
//! A backend supplies key generation, the fold step, compression of the fold
//! state into proof-body bytes, and body verification. All backends must
//! honor the accumulator recurrence and the dual-membership step relation;
//! how much of the witness survives into the body is the backend's choice
//! and is what `is_hiding` reports. A succinct folding backend can be
//! registered at runtime; verification of an envelope naming an unregistered
//! backend is a malformed-proof rejection.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::hashing::Digest;
use crate::proof::{FoldState, Proof, RejectReason, StepWitness};

/// Opaque key material for backends that need it. Empty for the transcript
/// backend.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackendKeys {
    pub proving_key: Vec<u8>,
    pub verifying_key: Vec<u8>,
}

impl BackendKeys {
    pub fn empty() -> Self {
        BackendKeys::default()
    }

    pub fn is_empty(&self) -> bool {
        self.proving_key.is_empty() && self.verifying_key.is_empty()
    }
}

pub trait ProofBackend: Send + Sync {
    /// Stable identifier recorded in proof envelopes.
    fn backend_id(&self) -> &'static str;

    /// Whether the proof body conceals step witnesses from the verifier.
    fn is_hiding(&self) -> bool;

    /// Produce backend key material. Backends without keys return empty.
    fn key_gen(&self) -> Result<BackendKeys>;

    /// Check one step's dual-membership predicate against the state's roots
    /// and fold it into the accumulator. Must fail with a step-ordinal-only
    /// error when the predicate does not hold.
    fn fold_step(&self, state: &mut FoldState, witness: StepWitness) -> Result<()>;

    /// Serialize the completed fold state into proof-body bytes.
    fn compress(&self, state: &FoldState) -> Result<Vec<u8>>;

    /// Verify a proof body against trusted roots: replay or succinctly check
    /// every step and the accumulator chain.
    fn verify_body(
        &self,
        proof: &Proof,
        trusted_g_pt: &Digest,
        trusted_g_st: &Digest,
    ) -> std::result::Result<(), RejectReason>;
}

/// Known backends, looked up by the envelope's `backend_id`.
pub struct BackendRegistry {
    backends: BTreeMap<&'static str, Box<dyn ProofBackend>>,
}

impl BackendRegistry {
    /// Registry with the built-in transcript backend.
    pub fn with_default() -> Self {
        let mut registry = BackendRegistry {
            backends: BTreeMap::new(),
        };
        registry.register(Box::new(super::TranscriptBackend));
        registry
    }

    pub fn empty() -> Self {
        BackendRegistry {
            backends: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, backend: Box<dyn ProofBackend>) {
        self.backends.insert(backend.backend_id(), backend);
    }

    pub fn get(&self, backend_id: &str) -> Option<&dyn ProofBackend> {
        self.backends.get(backend_id).map(|b| b.as_ref())
    }

    pub fn contains(&self, backend_id: &str) -> bool {
        self.backends.contains_key(backend_id)
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.backends.keys().copied().collect()
    }
}

impl Default for BackendRegistry {
    fn default() -> Self {
        Self::with_default()
    }
}

//! The reference transcript backend: sound and binding, not hiding.
//!
//! The body is the ordered list of step witnesses in a length-prefixed
//! binary framing; verification replays every dual-membership check and the
//! accumulator chain. It exists so the whole protocol is testable at desk
//! scale without an external succinct prover.
//!
//! Record layout (all fields fixed order, big-endian where applicable):
//!
//! ```text
//! u32 record length
//!   u64 index
//!   32B pt_leaf
//!   D x 32B pt siblings
//!   D x 32B st siblings
//!   32B randomizer
//! ```
//!
//! The sibling count D is recovered from the record length, so a transcript
//! is self-describing; the roots bind the depth regardless.

use crate::error::{Error, Result};
use crate::hashing::{Digest, DIGEST_LEN, MAX_DEPTH};
use crate::policy::shadow_leaf;
use crate::proof::{
    valid_dep, BackendKeys, FoldAccumulator, FoldState, Proof, ProofBackend, RejectReason,
    StepWitness,
};
use crate::smt::Opening;

pub const TRANSCRIPT_BACKEND_ID: &str = "transcript";

/// Fixed bytes per record in addition to the two sibling paths.
const RECORD_FIXED: usize = 8 + DIGEST_LEN + 32;

pub struct TranscriptBackend;

impl ProofBackend for TranscriptBackend {
    fn backend_id(&self) -> &'static str {
        TRANSCRIPT_BACKEND_ID
    }

    fn is_hiding(&self) -> bool {
        false
    }

    fn key_gen(&self) -> Result<BackendKeys> {
        Ok(BackendKeys::empty())
    }

    fn fold_step(&self, state: &mut FoldState, witness: StepWitness) -> Result<()> {
        if !valid_dep(&state.g_pt, &state.g_st, &witness) {
            return Err(Error::NonCompliantStep {
                step: state.accumulator.steps() + 1,
            });
        }
        state.accumulator.fold(&witness.randomizer);
        state.witnesses.push(witness);
        Ok(())
    }

    fn compress(&self, state: &FoldState) -> Result<Vec<u8>> {
        let mut body = Vec::new();
        for witness in &state.witnesses {
            let depth = witness.pt_opening.siblings.len();
            if witness.st_opening.siblings.len() != depth {
                return Err(Error::Backend(
                    "pt/st openings disagree on depth".to_string(),
                ));
            }
            let record_len = RECORD_FIXED + 2 * depth * DIGEST_LEN;
            body.extend_from_slice(&(record_len as u32).to_be_bytes());
            body.extend_from_slice(&witness.index.to_be_bytes());
            body.extend_from_slice(witness.pt_leaf.as_bytes());
            for sibling in &witness.pt_opening.siblings {
                body.extend_from_slice(sibling.as_bytes());
            }
            for sibling in &witness.st_opening.siblings {
                body.extend_from_slice(sibling.as_bytes());
            }
            body.extend_from_slice(&witness.randomizer);
        }
        Ok(body)
    }

    fn verify_body(
        &self,
        proof: &Proof,
        trusted_g_pt: &Digest,
        trusted_g_st: &Digest,
    ) -> std::result::Result<(), RejectReason> {
        let records = decode_records(&proof.body).ok_or(RejectReason::MalformedProof)?;
        if records.len() as u64 != proof.step_count {
            return Err(RejectReason::MalformedProof);
        }
        let mut accumulator = FoldAccumulator::seed(trusted_g_pt, trusted_g_st);
        for (pos, witness) in records.iter().enumerate() {
            if !valid_dep(trusted_g_pt, trusted_g_st, witness) {
                return Err(RejectReason::InvalidStep(pos as u64 + 1));
            }
            accumulator.fold(&witness.randomizer);
        }
        if accumulator.value() != proof.accumulator {
            return Err(RejectReason::AccumulatorMismatch);
        }
        Ok(())
    }
}

/// Decode the length-prefixed record stream. `None` on any framing defect:
/// truncation, trailing bytes, impossible sibling counts, or records that
/// disagree on depth.
fn decode_records(body: &[u8]) -> Option<Vec<StepWitness>> {
    let mut records = Vec::new();
    let mut rest = body;
    let mut common_depth: Option<usize> = None;
    while !rest.is_empty() {
        if rest.len() < 4 {
            return None;
        }
        let record_len = u32::from_be_bytes(rest[..4].try_into().ok()?) as usize;
        rest = &rest[4..];
        if rest.len() < record_len || record_len < RECORD_FIXED {
            return None;
        }
        let sibling_bytes = record_len - RECORD_FIXED;
        if !sibling_bytes.is_multiple_of(2 * DIGEST_LEN) {
            return None;
        }
        let depth = sibling_bytes / (2 * DIGEST_LEN);
        if depth == 0 || depth > MAX_DEPTH as usize {
            return None;
        }
        match common_depth {
            None => common_depth = Some(depth),
            Some(d) if d != depth => return None,
            Some(_) => {}
        }
        let (record, tail) = rest.split_at(record_len);
        rest = tail;

        let index = u64::from_be_bytes(record[..8].try_into().ok()?);
        let mut offset = 8;
        let pt_leaf = read_digest(record, &mut offset)?;
        let mut pt_siblings = Vec::with_capacity(depth);
        for _ in 0..depth {
            pt_siblings.push(read_digest(record, &mut offset)?);
        }
        let mut st_siblings = Vec::with_capacity(depth);
        for _ in 0..depth {
            st_siblings.push(read_digest(record, &mut offset)?);
        }
        let randomizer: [u8; 32] = record[offset..offset + 32].try_into().ok()?;

        records.push(StepWitness {
            // The transcript does not carry the dependency key; binding is
            // positional through the index and the roots.
            dep_key: String::new(),
            index,
            pt_leaf,
            pt_opening: Opening {
                index,
                leaf: pt_leaf,
                siblings: pt_siblings,
            },
            st_opening: Opening {
                index,
                leaf: shadow_leaf(1),
                siblings: st_siblings,
            },
            randomizer,
        });
    }
    Some(records)
}

fn read_digest(record: &[u8], offset: &mut usize) -> Option<Digest> {
    let bytes: [u8; DIGEST_LEN] = record.get(*offset..*offset + DIGEST_LEN)?.try_into().ok()?;
    *offset += DIGEST_LEN;
    Some(Digest::from_bytes(bytes))
}

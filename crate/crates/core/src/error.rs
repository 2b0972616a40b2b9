//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by commitment construction, ingestion, and proving.
///
/// Verification never returns an `Error`: invalid proofs are rejected with a
/// [`RejectReason`](crate::proof::RejectReason), not an exception.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on a call was violated (bad depth, unknown tag, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input could not be parsed. `line` is 1-based where line-oriented.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input parsed but does not match the expected document shape.
    #[error("schema error: {0}")]
    Schema(String),

    /// Two records in one snapshot share a canonical key.
    #[error("duplicate package key {0}")]
    DuplicatePackage(String),

    /// A record references a dependency key absent from the snapshot.
    #[error("dangling dependency {dependency} referenced by {referrer}")]
    DanglingDependency {
        referrer: String,
        dependency: String,
    },

    /// Two distinct package keys derived the same leaf slot.
    #[error("index collision at slot {index}: {existing} vs {incoming}")]
    IndexCollision {
        index: u64,
        existing: String,
        incoming: String,
    },

    /// A proof step referenced a dependency that does not resolve in the
    /// snapshot. Carries only the 1-based step ordinal; the dependency
    /// identity is deliberately withheld from machine-readable output.
    #[error("step {step}: dependency does not resolve in the registry snapshot")]
    UnresolvableDependency { step: u64 },

    /// A proof step failed the dual-membership check. Carries only the
    /// 1-based step ordinal, not the dependency identity.
    #[error("step {step}: dual-membership check failed")]
    NonCompliantStep { step: u64 },

    /// A proof backend failed internally.
    #[error("backend error: {0}")]
    Backend(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable kind string, used in CLI result objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "UsageError",
            Error::Parse { .. } => "ParseError",
            Error::Schema(_) => "SchemaError",
            Error::DuplicatePackage(_) => "DuplicatePackage",
            Error::DanglingDependency { .. } => "DanglingDependency",
            Error::IndexCollision { .. } => "IndexCollision",
            Error::UnresolvableDependency { .. } => "UnresolvableDependency",
            Error::NonCompliantStep { .. } => "NonCompliantStep",
            Error::Backend(_) => "BackendError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

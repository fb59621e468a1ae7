//! Locally compact scattered spaces built from families of sets of
//! ordinals.
//!
//! The crate is organised bottom-up:
//!
//! * [`ordinal`]: Cantor-normal-form arithmetic below ε₀ and its
//!   independent oracle;
//! * [`pointset`]: decidable subsets of an ordinal ground set;
//! * [`family`]: set families, their predicates and the operators
//!   (restriction, Δ, splitting sets, star, k-lift, amalgamation);
//! * [`space`]: the topology of a family: neighbourhoods, isolation
//!   witnesses and bounded Cantor–Bendixson analysis;
//! * [`constructions`]: the interval families, their coded copies and the
//!   amalgamation pipeline.
//!
//! Every check on an infinite object is bound-relative and returns a
//! [`family::Verdict`].

pub mod constructions;
pub mod exec;
pub mod family;
pub mod ordinal;
pub mod pointset;
pub mod random;
pub mod report;
pub mod space;

pub use family::{Budget, SetFamily, Verdict, VerdictStatus};
pub use ordinal::Ordinal;
pub use pointset::PointSet;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
    #[error("invalid ordinal: {0}")]
    InvalidOrdinal(String),
    #[error("representation overflow: {0}")]
    RepresentationOverflow(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("oracle inconclusive: {0}")]
    OracleInconclusive(String),
    #[error("unsupported gamma {0}: codings exist only for 1 <= gamma < w")]
    UnsupportedGamma(Ordinal),
    #[error("truncation required: {0}")]
    TruncationRequired(String),
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("precondition failure: {0}")]
    PreconditionFailure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Checkable polynomial-time cardinality.
//!
//! Everything here is a finite, executable stand-in for an asymptotic
//! object: languages are step-budgeted membership evaluators, partial
//! maps carry explicit clock bounds, and an equipollence is a *claim*
//! (a pair of mutually inverse partial maps) until [`witness::verify_equipollence`]
//! has exhausted every string up to a length bound without finding a
//! violation. Constructions that are proofs on paper become witness
//! builders; their correctness is re-established per instance by
//! brute force instead of by argument.

pub mod cantor_bernstein;
pub mod choice;
pub mod diag;
pub mod findiff;
pub mod iso_tools;
pub mod language;
pub mod maps;
pub mod poly;
pub mod ranking;
pub mod strings;
pub mod witness;

use thiserror::Error;

/// Unified error type for all toolkit operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size {0} is too small (need at least 2)")]
    AlphabetTooSmall(usize),
    #[error("alphabet size {0} exceeds the supported maximum of {1}")]
    AlphabetTooLarge(usize, usize),
    #[error("alphabet mismatch: expected size {expected}, got size {actual}")]
    AlphabetMismatch { expected: usize, actual: usize },
    #[error("symbol index {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },
    #[error("cannot parse string literal {0:?}: {1}")]
    StrParse(String, String),
    #[error("underflow below \u{3b5}: rank {rank} minus {delta} is negative")]
    Underflow { rank: String, delta: String },
    #[error("census infeasible: alphabet size {sigma}^{exp} exceeds the enumeration guard and no closed form is available")]
    CensusInfeasible { sigma: usize, exp: u64 },
    #[error("membership fuel exhausted for {language} on input of length {len}")]
    FuelExhausted { language: String, len: usize },
    #[error("unknown gallery construction {0:?}")]
    UnknownGallery(String),
    #[error("bad gallery parameters for {name:?}: {reason}")]
    BadGalleryParams { name: String, reason: String },
    #[error("witness endpoints do not match: {left:?} vs {right:?}")]
    EndpointMismatch { left: String, right: String },
    #[error("maps are not length-increasing: walk from {input:?} grew at {offender:?}")]
    NotLengthIncreasing { input: String, offender: String },
    #[error("chain walk from {input:?} exceeded {hops} hops; inputs are misdeclared")]
    WalkTooLong { input: String, hops: usize },
    #[error("map audit rejected {map:?}: {reason} at input {input:?}")]
    AuditFailure {
        map: String,
        reason: String,
        input: String,
    },
    #[error("rank {rank} not found in {language} within length {nmax}; bracketing interval [{lo}, {hi}]")]
    RankNotFound {
        language: String,
        rank: String,
        nmax: u64,
        lo: String,
        hi: String,
    },
    #[error("language {0} has no members in the tested range; operation requires an infinite language")]
    EmptyInRange(String),
    #[error("finite-difference sets invalid: {0}")]
    BadFiniteDiff(String),
    #[error("cardinality offsets differ: {left} vs {right}; no witness via this construction")]
    OffsetMismatch { left: i64, right: i64 },
    #[error("offset of the first difference ({left}) exceeds the second ({right}); no injection via this construction")]
    OffsetOrder { left: i64, right: i64 },
    #[error("{0} is not in the image of the base enumeration within the search horizon")]
    NotInEnumeration(String),
    #[error("anchor {0:?} is a member of the source language; reduction needs a non-member")]
    AnchorInLanguage(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("witness unverified: {0} violations up to length {1}")]
    Unverified(usize, u64),
    #[error("collection slice at {0:?} is empty within the honesty window")]
    SliceEmpty(String),
    #[error("horizon {horizon} too small to bracket the index window [{lo}, {hi}] for output length {len}")]
    HorizonTooSmall {
        horizon: u64,
        lo: u64,
        hi: u64,
        len: usize,
    },
    #[error("no output-length window declared on the relation")]
    WindowUnspecified,
    #[error("polynomial must have positive degree")]
    PolyDegreeZero,
    #[error("diagonalization state invariant breached: {0}")]
    StateInvariant(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Constructive Cantor–Bernstein for p-cardinality: two
//! length-increasing invertible injections become a verified
//! equipollence by classifying each element's back-and-forth chain.
//!
//! The bipartite graph has an edge from every a to p(a) and from every
//! b to q(b). Walking a chain backwards with the clocked inverses must
//! shrink lengths strictly at each hop, so every walk bottoms out at a
//! source; which side the source lies on decides which map the
//! constructed bijection uses.

use std::sync::Arc;

use serde::Serialize;

use crate::language::Language;
use crate::maps::InvertibleMap;
use crate::strings::Str;
use crate::witness::{audit_map, Equipollence, MapOutcome, MapValue, PartialMap, TimeBound};
use crate::{Error, Result};

/// Which endpoint a chain's source vertex belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Result of one chain classification: the source side, the backward
/// walk that found it, and the steps charged along the way.
#[derive(Clone, Debug, Serialize)]
pub struct ChainVerdict {
    pub origin: Side,
    pub walk: Vec<String>,
    pub steps_used: u64,
}

/// The inputs to the construction: injections p: A -> B and q: B -> A,
/// with caller-supplied clocked inverses.
#[derive(Clone)]
pub struct InjectionPair {
    pub p: PartialMap,
    pub p_inv: PartialMap,
    pub q: PartialMap,
    pub q_inv: PartialMap,
    pub a: Language,
    pub b: Language,
}

impl InjectionPair {
    pub fn new(p: InvertibleMap, q: InvertibleMap, a: Language, b: Language) -> Self {
        InjectionPair {
            p: p.map,
            p_inv: p.inverse,
            q: q.map,
            q_inv: q.inverse,
            a,
            b,
        }
    }
}

/// Walks a chain backwards from `x` on the given side, alternating the
/// clocked inverses until one answers bottom. Errors if any hop fails
/// to shrink the string or the walk outlives the |x|+1 hop cap.
pub fn classify(pair: &InjectionPair, x: &Str, side: Side) -> Result<ChainVerdict> {
    let max_hops = x.len() + 1;
    let mut walk = vec![x.clone()];
    let mut current = x.clone();
    let mut at = side;
    let mut steps_used = 0u64;
    loop {
        // Predecessor of an A-vertex comes through q, of a B-vertex
        // through p.
        let inv = match at {
            Side::A => &pair.q_inv,
            Side::B => &pair.p_inv,
        };
        let MapOutcome { value, steps } = inv.apply(&current)?;
        steps_used += steps;
        match value {
            MapValue::Defined(prev) => {
                if prev.len() >= current.len() {
                    return Err(Error::NotLengthIncreasing {
                        input: x.to_string(),
                        offender: prev.to_string(),
                    });
                }
                if walk.len() > max_hops {
                    return Err(Error::WalkTooLong {
                        input: x.to_string(),
                        hops: max_hops,
                    });
                }
                walk.push(prev.clone());
                current = prev;
                at = at.flip();
            }
            // Clock expiry is the hatted bottom: the source is here.
            MapValue::Undefined | MapValue::ClockExpired => {
                return Ok(ChainVerdict {
                    origin: at,
                    walk: walk.iter().map(|s| s.to_string()).collect(),
                    steps_used,
                });
            }
        }
    }
}

/// Builds the equipollence A ~ B from the injection pair, after
/// auditing both maps injective and length-increasing up to
/// `audit_upto`.
pub fn cb_witness(pair: &InjectionPair, audit_upto: u64) -> Result<Equipollence> {
    for (name, map, domain) in [("p", &pair.p, &pair.a), ("q", &pair.q, &pair.b)] {
        let scoped = map.clone().with_domain(domain.clone());
        let audit = audit_map(&scoped, audit_upto)?;
        if !audit.injective {
            let (x, y) = audit.collision.unwrap();
            return Err(Error::AuditFailure {
                map: name.to_string(),
                reason: "not injective".to_string(),
                input: format!("{x} vs {y}"),
            });
        }
        if !audit.length_increasing {
            return Err(Error::AuditFailure {
                map: name.to_string(),
                reason: "not length-increasing".to_string(),
                input: audit.length_offender.unwrap(),
            });
        }
    }

    // A chain walk makes at most n+1 clocked hops, each within the
    // inverses' bounds, followed by one application of p or an inverse.
    let hop_bound = |x: TimeBound, y: TimeBound| -> TimeBound {
        TimeBound::new(4 * x.c.max(y.c) + 4, x.e.max(y.e) + 1)
    };
    let fw_bound = hop_bound(
        pair.p.bound().join_plus_one(pair.q_inv.bound()),
        pair.p_inv.bound(),
    );
    let bw_bound = hop_bound(
        pair.q.bound().join_plus_one(pair.p_inv.bound()),
        pair.q_inv.bound(),
    );

    let fw_pair = pair.clone();
    let forward = PartialMap::new(
        format!("cb_phi({},{})", pair.p.name(), pair.q.name()),
        pair.p.source_alphabet(),
        pair.p.target_alphabet(),
        fw_bound,
        Arc::new(move |x: &Str| match classify(&fw_pair, x, Side::A) {
            Ok(verdict) => {
                let applied = match verdict.origin {
                    Side::A => fw_pair.p.apply(x),
                    Side::B => fw_pair.q_inv.apply(x),
                };
                match applied {
                    Ok(out) => (
                        out.value.as_defined().cloned(),
                        verdict.steps_used + out.steps,
                    ),
                    Err(_) => (None, verdict.steps_used),
                }
            }
            Err(_) => (None, 1),
        }),
    )
    .with_domain(pair.a.clone());

    let bw_pair = pair.clone();
    let backward = PartialMap::new(
        format!("cb_psi({},{})", pair.p.name(), pair.q.name()),
        pair.q.source_alphabet(),
        pair.q.target_alphabet(),
        bw_bound,
        Arc::new(move |y: &Str| match classify(&bw_pair, y, Side::B) {
            Ok(verdict) => {
                let applied = match verdict.origin {
                    Side::A => bw_pair.p_inv.apply(y),
                    Side::B => bw_pair.q.apply(y),
                };
                match applied {
                    Ok(out) => (
                        out.value.as_defined().cloned(),
                        verdict.steps_used + out.steps,
                    ),
                    Err(_) => (None, verdict.steps_used),
                }
            }
            Err(_) => (None, 1),
        }),
    )
    .with_domain(pair.b.clone());

    Ok(Equipollence::new(
        forward,
        backward,
        pair.a.clone(),
        pair.b.clone(),
    ))
}

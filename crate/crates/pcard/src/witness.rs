//! Partial maps with clock bounds, equipollence claims, and their
//! exhaustive verification, plus the canonical witnesses and the
//! semiring combinators.
//!
//! An [`Equipollence`] asserts that its two partial maps biject its two
//! endpoint languages; nothing is trusted until
//! [`verify_equipollence`] has walked every member up to a length
//! bound. Exceeding a declared clock yields an undefined value rather
//! than an error, so a slow map and a wrong map fail differently.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::language::{self, Language};
use crate::strings::{self, pair, rank, unpair, unrank, Alphabet, Str};
use crate::{Error, Result};

/// Clock shape t(n) = c * n^e + c.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TimeBound {
    pub c: u64,
    pub e: u32,
}

impl TimeBound {
    pub fn new(c: u64, e: u32) -> Self {
        assert!(c >= 1, "clock coefficient must be at least 1");
        TimeBound { c, e }
    }

    pub fn steps(&self, n: usize) -> u64 {
        self.c
            .saturating_mul((n as u64).saturating_pow(self.e))
            .saturating_add(self.c)
    }

    pub fn as_polynomial(&self) -> crate::poly::Polynomial {
        crate::poly::Polynomial::clock_shape(self.c, self.e)
    }

    /// Bound dominating both inputs plus one extra step.
    pub fn join_plus_one(self, other: TimeBound) -> TimeBound {
        TimeBound {
            c: self.c.max(other.c) + 1,
            e: self.e.max(other.e),
        }
    }

    /// Bound dominating inner(n) followed by outer on the intermediate
    /// value: t1(n) + t2(t1(n)).
    pub fn compose(outer: TimeBound, inner: TimeBound) -> TimeBound {
        let c = inner.c.saturating_add(
            outer
                .c
                .saturating_mul((2 * inner.c).saturating_pow(outer.e)),
        );
        TimeBound {
            c,
            e: inner.e.max(inner.e.saturating_mul(outer.e)).max(1),
        }
    }
}

/// What a clocked application produced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MapValue {
    Defined(Str),
    Undefined,
    /// The evaluator ran past the declared bound; by clock semantics
    /// the map is undefined here, but the overrun is observable.
    ClockExpired,
}

impl MapValue {
    pub fn as_defined(&self) -> Option<&Str> {
        match self {
            MapValue::Defined(y) => Some(y),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MapOutcome {
    pub value: MapValue,
    pub steps: u64,
}

type MapFn = dyn Fn(&Str) -> (Option<Str>, u64) + Send + Sync;

/// A step-budgeted partial function evaluator with a declared clock.
#[derive(Clone)]
pub struct PartialMap {
    name: String,
    source: Alphabet,
    target: Alphabet,
    evaluator: Arc<MapFn>,
    bound: TimeBound,
    domain: Option<Language>,
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialMap({})", self.name)
    }
}

impl PartialMap {
    pub fn new(
        name: impl Into<String>,
        source: Alphabet,
        target: Alphabet,
        bound: TimeBound,
        evaluator: Arc<MapFn>,
    ) -> Self {
        PartialMap {
            name: name.into(),
            source,
            target,
            evaluator,
            bound,
            domain: None,
        }
    }

    pub fn with_domain(mut self, domain: Language) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source_alphabet(&self) -> Alphabet {
        self.source
    }

    pub fn target_alphabet(&self) -> Alphabet {
        self.target
    }

    pub fn bound(&self) -> TimeBound {
        self.bound
    }

    pub fn declared_domain(&self) -> Option<&Language> {
        self.domain.as_ref()
    }

    /// Clocked application. Exceeding the declared bound yields
    /// [`MapValue::ClockExpired`].
    pub fn apply(&self, x: &Str) -> Result<MapOutcome> {
        if x.alphabet() != self.source {
            return Err(Error::AlphabetMismatch {
                expected: self.source.size(),
                actual: x.alphabet().size(),
            });
        }
        let (out, steps) = (self.evaluator)(x);
        if steps > self.bound.steps(x.len()) {
            return Ok(MapOutcome {
                value: MapValue::ClockExpired,
                steps,
            });
        }
        let value = match out {
            Some(y) => {
                if y.alphabet() != self.target {
                    return Err(Error::AlphabetMismatch {
                        expected: self.target.size(),
                        actual: y.alphabet().size(),
                    });
                }
                MapValue::Defined(y)
            }
            None => MapValue::Undefined,
        };
        Ok(MapOutcome { value, steps })
    }

    /// Clocked application, collapsing the failure modes to `None`.
    pub fn value(&self, x: &Str) -> Result<Option<Str>> {
        Ok(self.apply(x)?.value.as_defined().cloned())
    }
}

/// A claim that `a` and `b` have the same p-cardinality, with its
/// forward and backward witnesses.
#[derive(Clone)]
pub struct Equipollence {
    pub forward: PartialMap,
    pub backward: PartialMap,
    pub a: Language,
    pub b: Language,
}

impl fmt::Debug for Equipollence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Equipollence({} ~ {})", self.a.name(), self.b.name())
    }
}

impl Equipollence {
    pub fn new(forward: PartialMap, backward: PartialMap, a: Language, b: Language) -> Self {
        Equipollence {
            forward,
            backward,
            a,
            b,
        }
    }

    /// The claim read right-to-left.
    pub fn inverted(&self) -> Equipollence {
        Equipollence {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ViolationKind {
    Undefined,
    EscapesCodomain,
    RoundtripFailure,
    ClockBreach,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub input: String,
    pub direction: Direction,
    pub kind: ViolationKind,
}

/// Outcome of an exhaustive verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub checked_up_to: u64,
    pub violations: Vec<Violation>,
    /// Per input length, the largest step count observed on either map.
    pub max_steps_per_length: Vec<(u64, u64)>,
}

impl VerificationReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_side(
    from: &Language,
    to: &Language,
    ahead: &PartialMap,
    back: &PartialMap,
    direction: Direction,
    upto: u64,
    violations: &mut Vec<Violation>,
    steps_by_len: &mut std::collections::BTreeMap<u64, u64>,
) -> Result<()> {
    for x in language::enumerate_upto(from, upto)? {
        let out = ahead.apply(&x)?;
        let entry = steps_by_len.entry(x.len() as u64).or_insert(0);
        *entry = (*entry).max(out.steps);
        let y = match out.value {
            MapValue::Defined(y) => y,
            MapValue::Undefined => {
                violations.push(Violation {
                    input: x.to_string(),
                    direction,
                    kind: ViolationKind::Undefined,
                });
                continue;
            }
            MapValue::ClockExpired => {
                violations.push(Violation {
                    input: x.to_string(),
                    direction,
                    kind: ViolationKind::ClockBreach,
                });
                continue;
            }
        };
        if !to.contains(&y)? {
            violations.push(Violation {
                input: x.to_string(),
                direction,
                kind: ViolationKind::EscapesCodomain,
            });
            continue;
        }
        let round = back.apply(&y)?;
        let entry = steps_by_len.entry(y.len() as u64).or_insert(0);
        *entry = (*entry).max(round.steps);
        if round.value.as_defined() != Some(&x) {
            violations.push(Violation {
                input: x.to_string(),
                direction,
                kind: ViolationKind::RoundtripFailure,
            });
        }
    }
    Ok(())
}

/// Exhaustively checks the equipollence contract on all members of
/// both endpoints up to length `n`: forward lands in B and round-trips,
/// backward lands in A and round-trips, clocks respected.
pub fn verify_equipollence(e: &Equipollence, n: u64) -> Result<VerificationReport> {
    let mut violations = Vec::new();
    let mut steps_by_len = std::collections::BTreeMap::new();
    check_side(
        &e.a,
        &e.b,
        &e.forward,
        &e.backward,
        Direction::Forward,
        n,
        &mut violations,
        &mut steps_by_len,
    )?;
    check_side(
        &e.b,
        &e.a,
        &e.backward,
        &e.forward,
        Direction::Backward,
        n,
        &mut violations,
        &mut steps_by_len,
    )?;
    Ok(VerificationReport {
        checked_up_to: n,
        violations,
        max_steps_per_length: steps_by_len.into_iter().collect(),
    })
}

/// What an exhaustive audit of one map established.
#[derive(Clone, Debug, Serialize)]
pub struct MapAudit {
    pub injective: bool,
    pub collision: Option<(String, String)>,
    /// Least k with |x| <= |f(x)|^k + k over all tested inputs, if any
    /// k up to 8 works.
    pub honest_with: Option<u32>,
    pub length_increasing: bool,
    pub length_offender: Option<String>,
}

/// Audits injectivity, honesty, and length growth of `f` over its
/// declared domain (or all strings) up to length `n`.
pub fn audit_map(f: &PartialMap, n: u64) -> Result<MapAudit> {
    let inputs = match f.declared_domain() {
        Some(d) => language::enumerate_upto(d, n)?,
        None => strings::enumerate_upto_len(f.source_alphabet(), n),
    };
    let mut seen: std::collections::HashMap<Str, Str> = std::collections::HashMap::new();
    let mut collision = None;
    let mut length_offender = None;
    let mut pairs = Vec::new();
    for x in &inputs {
        if let Some(y) = f.value(x)? {
            if length_offender.is_none() && y.len() <= x.len() {
                length_offender = Some(x.to_string());
            }
            if let Some(prev) = seen.get(&y) {
                if collision.is_none() {
                    collision = Some((prev.to_string(), x.to_string()));
                }
            } else {
                seen.insert(y.clone(), x.clone());
            }
            pairs.push((x.len() as u64, y.len() as u64));
        }
    }
    let honest_with = (1u32..=8).find(|&k| {
        pairs
            .iter()
            .all(|&(lx, ly)| lx <= ly.saturating_pow(k) + k as u64)
    });
    Ok(MapAudit {
        injective: collision.is_none(),
        collision,
        honest_with,
        length_increasing: length_offender.is_none(),
        length_offender,
    })
}

// ---------------------------------------------------------------------------
// Canonical witnesses and combinators
// ---------------------------------------------------------------------------

fn cost(input: &Str, output: &Str) -> u64 {
    input.len() as u64 + output.len() as u64 + 1
}

/// The identity witness L ~ L.
pub fn identity_witness(l: &Language) -> Equipollence {
    let a = l.alphabet();
    let id = move |name: &str| {
        PartialMap::new(
            name.to_string(),
            a,
            a,
            TimeBound::new(2, 1),
            Arc::new(move |x: &Str| (Some(x.clone()), cost(x, x))),
        )
    };
    Equipollence::new(id("identity"), id("identity"), l.clone(), l.clone())
}

/// Tagged sum of witnesses: A + B ~ A' + B', applying the matching
/// witness under each tag.
pub fn oplus_witness(e1: &Equipollence, e2: &Equipollence) -> Result<Equipollence> {
    let a = language::oplus(&e1.a, &e2.a)?;
    let b = language::oplus(&e1.b, &e2.b)?;
    let branch = |left: PartialMap, right: PartialMap, name: String| {
        let alpha = left.source_alphabet();
        let target = left.target_alphabet();
        let bound = left.bound().join_plus_one(right.bound());
        PartialMap::new(
            name,
            alpha,
            target,
            bound,
            Arc::new(move |x: &Str| {
                let side = match x.first() {
                    Some(0) => &left,
                    Some(1) => &right,
                    _ => return (None, 1),
                };
                let tag = x.first().unwrap();
                let rest = x.untagged(tag).unwrap();
                match side.apply(&rest) {
                    Ok(MapOutcome {
                        value: MapValue::Defined(y),
                        steps,
                    }) => (y.tagged(tag).ok(), steps + 1),
                    Ok(MapOutcome { steps, .. }) => (None, steps + 1),
                    Err(_) => (None, 1),
                }
            }),
        )
    };
    Ok(Equipollence::new(
        branch(
            e1.forward.clone(),
            e2.forward.clone(),
            format!("oplus({},{})", e1.forward.name(), e2.forward.name()),
        ),
        branch(
            e1.backward.clone(),
            e2.backward.clone(),
            format!("oplus({},{})", e1.backward.name(), e2.backward.name()),
        ),
        a,
        b,
    ))
}

/// Product of witnesses through the pair encoding: (f x g)(x, y) =
/// (f(x), g(y)).
pub fn times_witness(e1: &Equipollence, e2: &Equipollence) -> Result<Equipollence> {
    let a = language::times(&e1.a, &e2.a)?;
    let b = language::times(&e1.b, &e2.b)?;
    let branch = |left: PartialMap, right: PartialMap, name: String| {
        let alpha = left.source_alphabet();
        let target = left.target_alphabet();
        // Pair encoding can double lengths, hence the quadratic slack.
        let inner = left.bound().join_plus_one(right.bound());
        let bound = TimeBound::new(inner.c.saturating_mul(4), inner.e.max(1) + 1);
        PartialMap::new(
            name,
            alpha,
            target,
            bound,
            Arc::new(move |z: &Str| {
                let (x, y) = unpair(z);
                let fx = left.apply(&x);
                let gy = right.apply(&y);
                match (fx, gy) {
                    (
                        Ok(MapOutcome {
                            value: MapValue::Defined(u),
                            steps: s1,
                        }),
                        Ok(MapOutcome {
                            value: MapValue::Defined(v),
                            steps: s2,
                        }),
                    ) => match pair(&u, &v) {
                        Ok(out) => {
                            let steps = s1 + s2 + cost(z, &out);
                            (Some(out), steps)
                        }
                        Err(_) => (None, s1 + s2 + 1),
                    },
                    _ => (None, z.len() as u64 + 1),
                }
            }),
        )
    };
    Ok(Equipollence::new(
        branch(
            e1.forward.clone(),
            e2.forward.clone(),
            format!("times({},{})", e1.forward.name(), e2.forward.name()),
        ),
        branch(
            e1.backward.clone(),
            e2.backward.clone(),
            format!("times({},{})", e1.backward.name(), e2.backward.name()),
        ),
        a,
        b,
    ))
}

/// The halving bijection witnessing that the full language has the
/// p-cardinality of its own tagged double: even ranks go under tag 0,
/// odd ranks under tag 1.
pub fn sigma_self_sum(a: Alphabet) -> Equipollence {
    let star = language::sigma_star(a);
    let b = language::oplus(&star, &star).expect("same alphabet");
    let forward = PartialMap::new(
        format!("self_sum({})", a.size()),
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| {
            let n = rank(x);
            let (tag, half) = if (&n % 2u32) == BigUint::from(0u32) {
                (0u8, n / 2u32)
            } else {
                (1u8, (n - 1u32) / 2u32)
            };
            let out = unrank(&half, a).tagged(tag).expect("tag in range");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    let backward = PartialMap::new(
        format!("self_sum_inv({})", a.size()),
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| match x.first() {
            Some(tag @ (0 | 1)) => {
                let y = x.untagged(tag).unwrap();
                let n = rank(&y) * 2u32 + u32::from(tag);
                let out = unrank(&n, a);
                let steps = cost(x, &out);
                (Some(out), steps)
            }
            _ => (None, 1),
        }),
    );
    Equipollence::new(forward, backward, star, b)
}

/// The pair-encoding bijection witnessing that the full language has
/// the p-cardinality of its own product.
pub fn sigma_self_product(a: Alphabet) -> Equipollence {
    let star = language::sigma_star(a);
    let b = language::times(&star, &star).expect("same alphabet");
    let forward = PartialMap::new(
        format!("self_product({})", a.size()),
        a,
        a,
        TimeBound::new(4, 2),
        Arc::new(move |x: &Str| {
            let (u, v) = unpair(x);
            let out = pair(&u, &v).expect("same alphabet");
            let steps = cost(x, &out) + u.len() as u64 + v.len() as u64;
            (Some(out), steps)
        }),
    );
    let backward = PartialMap::new(
        format!("self_product_inv({})", a.size()),
        a,
        a,
        TimeBound::new(4, 2),
        Arc::new(move |z: &Str| {
            let (u, v) = unpair(z);
            let out = pair(&u, &v).expect("same alphabet");
            let steps = cost(z, &out) + u.len() as u64 + v.len() as u64;
            (Some(out), steps)
        }),
    );
    Equipollence::new(forward, backward, star, b)
}

/// Shifts every string up `n` in rank order, witnessing that the full
/// language matches itself minus its `n` least strings.
pub fn shift_witness(a: Alphabet, n: u64) -> Equipollence {
    let star = language::sigma_star(a);
    let b = language::shift_set(a, n);
    let forward = PartialMap::new(
        format!("shift_up({n})"),
        a,
        a,
        TimeBound::new(n + 2, 1),
        Arc::new(move |x: &Str| {
            let out = strings::str_add(x, n as i64).expect("shift up cannot underflow");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    let backward = PartialMap::new(
        format!("shift_down({n})"),
        a,
        a,
        TimeBound::new(n + 2, 1),
        Arc::new(move |x: &Str| {
            if rank(x) < BigUint::from(n) {
                return (None, x.len() as u64 + 1);
            }
            let out = strings::str_add(x, -(n as i64)).expect("rank checked");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    )
    .with_domain(b.clone());
    Equipollence::new(forward, backward, star, b)
}

/// Composition of witnesses; the inner endpoint languages must be the
/// same construction (compared by name).
pub fn compose_witness(e1: &Equipollence, e2: &Equipollence) -> Result<Equipollence> {
    if e1.b.name() != e2.a.name() {
        return Err(Error::EndpointMismatch {
            left: e1.b.name().to_string(),
            right: e2.a.name().to_string(),
        });
    }
    let chain = |first: PartialMap, second: PartialMap, name: String| {
        let bound = TimeBound::compose(second.bound(), first.bound());
        let source = first.source_alphabet();
        let target = second.target_alphabet();
        PartialMap::new(
            name,
            source,
            target,
            bound,
            Arc::new(move |x: &Str| match first.apply(x) {
                Ok(MapOutcome {
                    value: MapValue::Defined(mid),
                    steps: s1,
                }) => match second.apply(&mid) {
                    Ok(MapOutcome { value, steps: s2 }) => {
                        (value.as_defined().cloned(), s1 + s2)
                    }
                    Err(_) => (None, s1),
                },
                Ok(MapOutcome { steps, .. }) => (None, steps),
                Err(_) => (None, 1),
            }),
        )
    };
    Ok(Equipollence::new(
        chain(
            e1.forward.clone(),
            e2.forward.clone(),
            format!("compose({},{})", e1.forward.name(), e2.forward.name()),
        ),
        chain(
            e2.backward.clone(),
            e1.backward.clone(),
            format!("compose({},{})", e2.backward.name(), e1.backward.name()),
        ),
        e1.a.clone(),
        e2.b.clone(),
    ))
}

/// Prepend-tag witness: the full language matches the set of strings
/// carrying the given leading symbol.
pub fn prepend_witness(a: Alphabet, tag: u8) -> Equipollence {
    let star = language::sigma_star(a);
    let b = language::prefix(Str::new(a, vec![tag]).expect("tag in range"));
    let forward = PartialMap::new(
        format!("prepend({tag})"),
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| {
            let out = x.tagged(tag).expect("tag in range");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    let backward = PartialMap::new(
        format!("strip({tag})"),
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| match x.untagged(tag) {
            Some(out) => {
                let steps = cost(x, &out);
                (Some(out), steps)
            }
            None => (None, 1),
        }),
    )
    .with_domain(b.clone());
    Equipollence::new(forward, backward, star, b)
}

/// Leading-symbol swap witnessing 0-prefixed ~ 1-prefixed.
pub fn flip_witness(a: Alphabet) -> Equipollence {
    let zero = language::prefix(Str::new(a, vec![0]).unwrap());
    let one = language::prefix(Str::new(a, vec![1]).unwrap());
    let swap = |from: u8, to: u8, name: String, domain: Language| {
        PartialMap::new(
            name,
            a,
            a,
            TimeBound::new(2, 1),
            Arc::new(move |x: &Str| match x.untagged(from) {
                Some(rest) => {
                    let out = rest.tagged(to).unwrap();
                    let steps = cost(x, &out);
                    (Some(out), steps)
                }
                None => (None, 1),
            }),
        )
        .with_domain(domain)
    };
    Equipollence::new(
        swap(0, 1, "flip01".into(), zero.clone()),
        swap(1, 0, "flip10".into(), one.clone()),
        zero,
        one,
    )
}

/// A deliberately wrong claim: identity forward, successor backward.
/// Every round trip fails; useful for exercising the violation paths.
pub fn broken_witness(a: Alphabet) -> Equipollence {
    let star = language::sigma_star(a);
    let forward = identity_witness(&star).forward;
    let backward = PartialMap::new(
        "successor",
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| {
            let out = strings::str_add(x, 1).expect("adding one cannot underflow");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    Equipollence::new(forward, backward, star.clone(), star)
}

/// Tag-flip commutator A + B ~ B + A.
pub fn oplus_swap_witness(a_lang: &Language, b_lang: &Language) -> Result<Equipollence> {
    let a = language::oplus(a_lang, b_lang)?;
    let b = language::oplus(b_lang, a_lang)?;
    let flip = |name: &str, alpha: Alphabet| {
        PartialMap::new(
            name.to_string(),
            alpha,
            alpha,
            TimeBound::new(2, 1),
            Arc::new(move |x: &Str| match x.first() {
                Some(t @ (0 | 1)) => {
                    let rest = x.untagged(t).unwrap();
                    let out = rest.tagged(1 - t).unwrap();
                    let steps = cost(x, &out);
                    (Some(out), steps)
                }
                _ => (None, 1),
            }),
        )
    };
    let alpha = a_lang.alphabet();
    Ok(Equipollence::new(
        flip("tag_flip", alpha),
        flip("tag_flip", alpha),
        a,
        b,
    ))
}

/// Re-association (A + B) + C ~ A + (B + C).
pub fn oplus_assoc_witness(
    a_lang: &Language,
    b_lang: &Language,
    c_lang: &Language,
) -> Result<Equipollence> {
    let lhs = language::oplus(&language::oplus(a_lang, b_lang)?, c_lang)?;
    let rhs = language::oplus(a_lang, &language::oplus(b_lang, c_lang)?)?;
    let alpha = a_lang.alphabet();
    let forward = PartialMap::new(
        "assoc_right",
        alpha,
        alpha,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| {
            // 00a -> 0a, 01b -> 10b, 1c -> 11c
            let out = match (x.first(), x.symbols().get(1).copied()) {
                (Some(0), Some(0)) => x.untagged(0).unwrap().untagged(0).map(|a| a.tagged(0).unwrap()),
                (Some(0), Some(1)) => x
                    .untagged(0)
                    .unwrap()
                    .untagged(1)
                    .map(|b| b.tagged(0).unwrap().tagged(1).unwrap()),
                (Some(1), _) => x
                    .untagged(1)
                    .map(|c| c.tagged(1).unwrap().tagged(1).unwrap()),
                _ => None,
            };
            let steps = x.len() as u64 + out.as_ref().map_or(0, |o| o.len() as u64) + 1;
            (out, steps)
        }),
    );
    let backward = PartialMap::new(
        "assoc_left",
        alpha,
        alpha,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| {
            // 0a -> 00a, 10b -> 01b, 11c -> 1c
            let out = match (x.first(), x.symbols().get(1).copied()) {
                (Some(0), _) => x
                    .untagged(0)
                    .map(|a| a.tagged(0).unwrap().tagged(0).unwrap()),
                (Some(1), Some(0)) => x
                    .untagged(1)
                    .unwrap()
                    .untagged(0)
                    .map(|b| b.tagged(1).unwrap().tagged(0).unwrap()),
                (Some(1), Some(1)) => x.untagged(1).unwrap().untagged(1).map(|c| c.tagged(1).unwrap()),
                _ => None,
            };
            let steps = x.len() as u64 + out.as_ref().map_or(0, |o| o.len() as u64) + 1;
            (out, steps)
        }),
    );
    Ok(Equipollence::new(forward, backward, lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::lit;

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn identity_verifies() {
        let e = identity_witness(&language::sigma_star(bin()));
        let report = verify_equipollence(&e, 8).unwrap();
        assert!(report.clean());
        assert_eq!(report.checked_up_to, 8);
    }

    #[test]
    fn prepend_witness_verifies() {
        let e = prepend_witness(bin(), 0);
        assert!(verify_equipollence(&e, 8).unwrap().clean());
    }

    #[test]
    fn wrong_codomain_shows_roundtrip_failures() {
        // Same maps, but B declared as the full language: backward is
        // undefined on strings starting with 1, caught from the B side.
        let good = prepend_witness(bin(), 0);
        let bad = Equipollence::new(
            good.forward.clone(),
            good.backward.clone(),
            good.a.clone(),
            language::sigma_star(bin()),
        );
        let report = verify_equipollence(&bad, 8).unwrap();
        assert!(!report.clean());
        assert!(report
            .violations
            .iter()
            .any(|v| v.direction == Direction::Backward
                && v.kind == ViolationKind::Undefined
                && v.input == "2:1"));
    }

    #[test]
    fn clock_breach_is_distinguished_from_undefined() {
        let slow = PartialMap::new(
            "slow",
            bin(),
            bin(),
            TimeBound::new(1, 1),
            Arc::new(|x: &Str| (Some(x.clone()), 1_000)),
        );
        let out = slow.apply(&lit("2:01")).unwrap();
        assert_eq!(out.value, MapValue::ClockExpired);
        let e = Equipollence::new(
            slow.clone(),
            slow,
            language::sigma_star(bin()),
            language::sigma_star(bin()),
        );
        let report = verify_equipollence(&e, 3).unwrap();
        assert!(report
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::ClockBreach));
    }

    #[test]
    fn audit_examples() {
        let prepend = prepend_witness(bin(), 0).forward;
        let audit = audit_map(&prepend, 6).unwrap();
        assert!(audit.injective);
        assert!(audit.length_increasing);
        assert_eq!(audit.honest_with, Some(1));

        let constant = PartialMap::new(
            "const_eps",
            bin(),
            bin(),
            TimeBound::new(2, 1),
            Arc::new(|x: &Str| (Some(Str::empty(x.alphabet())), x.len() as u64 + 1)),
        );
        let audit = audit_map(&constant, 10).unwrap();
        assert!(!audit.injective);
        assert_eq!(audit.collision, Some(("2:".into(), "2:0".into())));
        // |x| <= 0^k + k fails for length-10 inputs at every k <= 8.
        assert!(audit.honest_with.is_none());

        let successor = PartialMap::new(
            "successor",
            bin(),
            bin(),
            TimeBound::new(2, 1),
            Arc::new(|x: &Str| {
                let out = strings::str_add(x, 1).unwrap();
                let steps = cost(x, &out);
                (Some(out), steps)
            }),
        );
        let audit = audit_map(&successor, 6).unwrap();
        assert!(audit.injective);
        assert!(!audit.length_increasing);
    }

    #[test]
    fn self_sum_case_formula() {
        let e = sigma_self_sum(bin());
        let f = |s: &str| e.forward.value(&lit(s)).unwrap().unwrap();
        assert_eq!(f("2:"), lit("2:0"));
        assert_eq!(f("2:0"), lit("2:1"));
        assert_eq!(f("2:1"), lit("2:00"));
        assert!(verify_equipollence(&e, 8).unwrap().clean());
        let t = sigma_self_sum(Alphabet::new(3).unwrap());
        assert!(verify_equipollence(&t, 5).unwrap().clean());
    }

    #[test]
    fn self_product_verifies() {
        let e = sigma_self_product(bin());
        assert_eq!(
            e.forward.value(&Str::empty(bin())).unwrap().unwrap(),
            Str::empty(bin())
        );
        // rank("001") = 8 = pair(1, 2), i.e. the encoded ("0","1").
        let img = e.forward.value(&lit("2:001")).unwrap().unwrap();
        assert_eq!(unpair(&img), (lit("2:0"), lit("2:1")));
        assert!(verify_equipollence(&e, 6).unwrap().clean());
    }

    #[test]
    fn shift_witness_examples() {
        let e = shift_witness(bin(), 2);
        assert_eq!(e.forward.value(&Str::empty(bin())).unwrap().unwrap(), lit("2:1"));
        assert_eq!(e.forward.value(&lit("2:0")).unwrap().unwrap(), lit("2:00"));
        assert!(verify_equipollence(&e, 7).unwrap().clean());
        let id = shift_witness(bin(), 0);
        assert_eq!(id.forward.value(&lit("2:01")).unwrap().unwrap(), lit("2:01"));
    }

    #[test]
    fn oplus_witness_cases() {
        let e1 = prepend_witness(bin(), 0);
        let e2 = identity_witness(&language::sigma_star(bin()));
        let w = oplus_witness(&e1, &e2).unwrap();
        // Second branch is the identity.
        assert_eq!(w.forward.value(&lit("2:11")).unwrap().unwrap(), lit("2:11"));
        // First branch applies the prepend.
        assert_eq!(w.forward.value(&lit("2:0")).unwrap().unwrap(), lit("2:00"));
        // No tag: undefined.
        assert_eq!(w.forward.value(&Str::empty(bin())).unwrap(), None);
        assert!(verify_equipollence(&w, 7).unwrap().clean());
    }

    #[test]
    fn times_witness_cases() {
        let id = identity_witness(&language::sigma_star(bin()));
        let w = times_witness(&id, &id).unwrap();
        let z = pair(&lit("2:0"), &lit("2:1")).unwrap();
        assert_eq!(w.forward.value(&z).unwrap().unwrap(), z);
        let e1 = prepend_witness(bin(), 0);
        let w2 = times_witness(&e1, &id).unwrap();
        let eps = Str::empty(bin());
        let z0 = pair(&eps, &eps).unwrap();
        assert_eq!(
            w2.forward.value(&z0).unwrap().unwrap(),
            pair(&lit("2:0"), &eps).unwrap()
        );
        assert!(verify_equipollence(&w2, 6).unwrap().clean());
    }

    #[test]
    fn compose_witness_convention() {
        let id = identity_witness(&language::sigma_star(bin()));
        let ii = compose_witness(&id, &id).unwrap();
        assert!(verify_equipollence(&ii, 6).unwrap().clean());

        // shift(1) then shift(1) agrees with shift(2) pointwise... but
        // endpoint names must match for composition.
        let s1 = shift_witness(bin(), 1);
        let s1b = Equipollence::new(
            s1.forward.clone(),
            s1.backward.clone(),
            language::sigma_star(bin()),
            language::sigma_star(bin()),
        );
        let chained = compose_witness(&s1b, &s1b).unwrap();
        let s2 = shift_witness(bin(), 2);
        for x in strings::enumerate_upto_len(bin(), 6) {
            assert_eq!(
                chained.forward.value(&x).unwrap(),
                s2.forward.value(&x).unwrap()
            );
        }

        let mismatch = compose_witness(&s1, &s1);
        assert!(matches!(mismatch, Err(Error::EndpointMismatch { .. })));

        // Forward applies e1 first: prepend "1", then prepend "0".
        let p0 = prepend_witness(bin(), 0);
        let p1 = prepend_witness(bin(), 1);
        let p1_loose = Equipollence::new(
            p1.forward.clone(),
            p1.backward.clone(),
            language::sigma_star(bin()),
            language::sigma_star(bin()),
        );
        let p0_loose = Equipollence::new(
            p0.forward.clone(),
            p0.backward.clone(),
            language::sigma_star(bin()),
            language::sigma_star(bin()),
        );
        let c = compose_witness(&p1_loose, &p0_loose).unwrap();
        assert_eq!(c.forward.value(&Str::empty(bin())).unwrap().unwrap(), lit("2:01"));
    }

    #[test]
    fn inverted_symmetry() {
        for e in [
            sigma_self_sum(bin()),
            shift_witness(bin(), 3),
            prepend_witness(bin(), 1),
        ] {
            let direct = verify_equipollence(&e, 6).unwrap().clean();
            let flipped = verify_equipollence(&e.inverted(), 6).unwrap().clean();
            assert_eq!(direct, flipped);
        }
    }

    #[test]
    fn flip_and_broken_fixtures() {
        let flip = flip_witness(bin());
        assert_eq!(flip.forward.value(&lit("2:01")).unwrap().unwrap(), lit("2:11"));
        assert!(verify_equipollence(&flip, 7).unwrap().clean());

        let broken = broken_witness(bin());
        let report = verify_equipollence(&broken, 4).unwrap();
        assert!(!report.clean());
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::RoundtripFailure));
    }

    #[test]
    fn semiring_commutator_and_associator() {
        let a = language::prefix(lit("2:0"));
        let b = language::sigma_star(bin());
        let c = language::dedekind(bin());
        let swap = oplus_swap_witness(&a, &b).unwrap();
        assert!(verify_equipollence(&swap, 6).unwrap().clean());
        let assoc = oplus_assoc_witness(&a, &b, &c).unwrap();
        assert!(verify_equipollence(&assoc, 6).unwrap().clean());
    }
}

//! Collections of languages indexed by strings, honesty-window choice
//! functions, transversals of pairwise-disjoint collections, and
//! refinement of relations to single-valued selections.
//!
//! A collection is one language over pair-encoded (index, member)
//! strings; the slice at x is everything x pairs with. Honesty bounds
//! p <= q confine a witness's length to a polynomial window of the
//! index length, which is what makes brute-force search well-defined.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::language::{Language, ENUMERATION_GUARD};
use crate::poly::Polynomial;
use crate::strings::{self, pair, Alphabet, Str};
use crate::witness::{PartialMap, TimeBound};
use crate::{Error, Result};

/// An indexed family of languages with honesty bounds.
#[derive(Clone)]
pub struct Collection {
    carrier: Language,
    p_low: Polynomial,
    q_high: Polynomial,
}

impl Collection {
    /// Both bounds must have positive degree.
    pub fn new(carrier: Language, p_low: Polynomial, q_high: Polynomial) -> Result<Self> {
        if p_low.degree() == 0 || q_high.degree() == 0 {
            return Err(Error::PolyDegreeZero);
        }
        Ok(Collection {
            carrier,
            p_low,
            q_high,
        })
    }

    pub fn carrier(&self) -> &Language {
        &self.carrier
    }

    pub fn bounds(&self) -> (&Polynomial, &Polynomial) {
        (&self.p_low, &self.q_high)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.carrier.alphabet()
    }

    /// Is y in the slice at x?
    pub fn slice_contains(&self, x: &Str, y: &Str) -> Result<bool> {
        self.carrier.contains(&pair(x, y)?)
    }
}

fn guard_window(a: Alphabet, maxlen: u64) -> Result<()> {
    let mut total = 1u64;
    for _ in 0..=maxlen {
        total = total.saturating_mul(a.size() as u64);
        if total > ENUMERATION_GUARD {
            return Err(Error::CensusInfeasible {
                sigma: a.size(),
                exp: maxlen + 1,
            });
        }
    }
    Ok(())
}

fn strings_of_len_range(a: Alphabet, lo: u64, hi: u64) -> impl Iterator<Item = Str> {
    strings::enumerate(a)
        .skip_while(move |s| (s.len() as u64) < lo)
        .take_while(move |s| s.len() as u64 <= hi)
}

/// Per-index honesty verdict: the length-lex least window witness, if
/// any.
#[derive(Clone, Debug, Serialize)]
pub struct HonestyRow {
    pub index: String,
    pub witness: Option<String>,
}

/// Checks every index up to length `nmax` for a slice member inside
/// the honesty window.
pub fn check_honestly_nonempty(c: &Collection, nmax: u64) -> Result<Vec<HonestyRow>> {
    guard_window(c.alphabet(), c.q_high.eval(nmax))?;
    let mut rows = Vec::new();
    for x in strings::enumerate_upto_len(c.alphabet(), nmax) {
        let lo = c.p_low.eval(x.len() as u64);
        let hi = c.q_high.eval(x.len() as u64);
        let mut witness = None;
        for y in strings_of_len_range(c.alphabet(), lo, hi) {
            if c.slice_contains(&x, &y)? {
                witness = Some(y.to_string());
                break;
            }
        }
        rows.push(HonestyRow {
            index: x.to_string(),
            witness,
        });
    }
    Ok(rows)
}

/// The brute-force choice function: the length-lex least slice member
/// inside the honesty window.
pub fn choice_bruteforce(c: &Collection, x: &Str) -> Result<Str> {
    let lo = c.p_low.eval(x.len() as u64);
    let hi = c.q_high.eval(x.len() as u64);
    guard_window(c.alphabet(), hi)?;
    for y in strings_of_len_range(c.alphabet(), lo, hi) {
        if c.slice_contains(&x, &y)? {
            return Ok(y);
        }
    }
    Err(Error::SliceEmpty(x.to_string()))
}

/// Membership in the canonical transversal: y belongs when some index
/// x selects it, i.e. y is the length-lex least slice member of length
/// at least p(|x|). The index window is bracketed through the inverse
/// honesty bounds and must fit under `horizon`.
pub fn transversal_member(c: &Collection, y: &Str, horizon: u64) -> Result<bool> {
    let ylen = y.len() as u64;
    // Largest index length whose lower bound still allows y.
    let hi = match c.p_low.inverse_floor(ylen, horizon.saturating_add(1)) {
        None => return Ok(false),
        Some(m) if m > horizon => {
            return Err(Error::HorizonTooSmall {
                horizon,
                lo: 0,
                hi: m,
                len: y.len(),
            })
        }
        Some(m) => m,
    };
    // Smallest index length whose window reaches up to y.
    let lo = match c.q_high.inverse_ceil(ylen, hi) {
        Some(m) => m,
        None => return Ok(false),
    };
    guard_window(c.alphabet(), hi)?;
    guard_window(c.alphabet(), ylen)?;
    for x in strings_of_len_range(c.alphabet(), lo, hi) {
        if !c.slice_contains(&x, y)? {
            continue;
        }
        let floor = c.p_low.eval(x.len() as u64);
        if ylen < floor {
            continue;
        }
        let mut least = true;
        for y2 in strings_of_len_range(c.alphabet(), floor, ylen) {
            if y2.lex_cmp(y) != std::cmp::Ordering::Less {
                break;
            }
            if c.slice_contains(&x, &y2)? {
                least = false;
                break;
            }
        }
        if least {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A string found in two different slices.
#[derive(Clone, Debug, Serialize)]
pub struct DisjointnessViolation {
    pub member: String,
    pub first_index: String,
    pub second_index: String,
}

/// Scans for slice overlaps among indices up to `nmax`, looking at all
/// members up to the largest honesty window.
pub fn audit_pairwise_disjoint(
    c: &Collection,
    nmax: u64,
) -> Result<Vec<DisjointnessViolation>> {
    let maxlen = c.q_high.eval(nmax);
    guard_window(c.alphabet(), nmax)?;
    guard_window(c.alphabet(), maxlen)?;
    let mut owner: BTreeMap<String, Str> = BTreeMap::new();
    let mut violations = Vec::new();
    for x in strings::enumerate_upto_len(c.alphabet(), nmax) {
        for y in strings::enumerate_upto_len(c.alphabet(), maxlen) {
            if !c.slice_contains(&x, &y)? {
                continue;
            }
            match owner.get(&y.to_string()) {
                Some(prev) if *prev != x => violations.push(DisjointnessViolation {
                    member: y.to_string(),
                    first_index: prev.to_string(),
                    second_index: x.to_string(),
                }),
                Some(_) => {}
                None => {
                    owner.insert(y.to_string(), x.clone());
                }
            }
        }
    }
    Ok(violations)
}

/// A partial multivalued function presented as its graph relation,
/// with a declared search window for output lengths.
#[derive(Clone)]
pub struct MultiMap {
    pub graph: Language,
    pub output_window: Option<Polynomial>,
}

impl MultiMap {
    pub fn new(graph: Language, output_window: Option<Polynomial>) -> Self {
        MultiMap {
            graph,
            output_window,
        }
    }
}

/// Uniformizes a relation into a single-valued refinement: the
/// length-lex least related output within the declared window. The
/// domain is preserved on every index whose outputs respect the
/// window.
pub fn refine_uniformize(r: &MultiMap, nmax: u64) -> Result<PartialMap> {
    let window = r
        .output_window
        .clone()
        .ok_or(Error::WindowUnspecified)?;
    guard_window(r.graph.alphabet(), window.eval(nmax))?;
    let a = r.graph.alphabet();
    let graph = r.graph.clone();
    let w = window.clone();
    // Steps charge the selection, not the brute-force sweep behind it.
    let coeff_sum: u64 = window.coeffs().iter().sum();
    let bound = TimeBound::new(coeff_sum + 2, window.degree().max(1) as u32);
    Ok(PartialMap::new(
        format!("uniformize({})", r.graph.name()),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| {
            let hi = w.eval(x.len() as u64);
            for y in strings_of_len_range(a, 0, hi) {
                match pair(x, &y).and_then(|z| graph.contains(&z)) {
                    Ok(true) => {
                        let steps = x.len() as u64 + y.len() as u64 + 1;
                        return (Some(y), steps);
                    }
                    Ok(false) => continue,
                    Err(_) => break,
                }
            }
            (None, x.len() as u64 + 1)
        }),
    ))
}

// ---------------------------------------------------------------------------
// Collection fixtures
// ---------------------------------------------------------------------------

fn pair_language(
    name: String,
    a: Alphabet,
    relate: Arc<dyn Fn(&Str, &Str) -> bool + Send + Sync>,
) -> Language {
    Language::new(
        name,
        a,
        Arc::new(move |z, fuel| {
            let steps = (z.len() as u64 + 1).min(fuel);
            if z.len() as u64 + 1 > fuel {
                return crate::language::MembershipOutcome {
                    verdict: crate::language::Verdict::FuelExhausted,
                    steps,
                };
            }
            let (x, y) = strings::unpair(z);
            crate::language::MembershipOutcome::decided(relate(&x, &y), steps)
        }),
    )
}

/// Slices {x.b : b a single symbol}; pairwise disjoint, honestly
/// nonempty with window n+1.
pub fn suffix_collection(a: Alphabet) -> Collection {
    let carrier = pair_language(
        format!("suffix_pairs({})", a.size()),
        a,
        Arc::new(|x, y| y.len() == x.len() + 1 && y.starts_with(x)),
    );
    Collection::new(
        carrier,
        Polynomial::new(vec![1, 1]),
        Polynomial::new(vec![1, 1]),
    )
    .expect("degree one bounds")
}

/// Singleton slices {x.x}; pairwise disjoint with window 2n.
pub fn doubling_collection(a: Alphabet) -> Collection {
    let carrier = pair_language(
        format!("double_pairs({})", a.size()),
        a,
        Arc::new(|x, y| {
            y.len() == 2 * x.len()
                && y.starts_with(x)
                && y.symbols()[x.len()..] == *x.symbols()
        }),
    );
    Collection::new(
        carrier,
        Polynomial::new(vec![0, 2]),
        Polynomial::new(vec![0, 2]),
    )
    .expect("degree one bounds")
}

/// Slices {b.x : b a single symbol}; pairwise disjoint, honestly
/// nonempty with window n+1.
pub fn affix_collection(a: Alphabet) -> Collection {
    let carrier = pair_language(
        format!("affix_pairs({})", a.size()),
        a,
        Arc::new(|x, y| y.len() == x.len() + 1 && y.symbols()[1..] == *x.symbols()),
    );
    Collection::new(
        carrier,
        Polynomial::new(vec![1, 1]),
        Polynomial::new(vec![1, 1]),
    )
    .expect("degree one bounds")
}

/// Singleton slices {1.x}; pairwise disjoint with window n+1.
pub fn tag_collection(a: Alphabet) -> Collection {
    let carrier = pair_language(
        format!("tag_pairs({})", a.size()),
        a,
        Arc::new(|x, y| y.untagged(1).is_some_and(|rest| rest == *x)),
    );
    Collection::new(
        carrier,
        Polynomial::new(vec![1, 1]),
        Polynomial::new(vec![1, 1]),
    )
    .expect("degree one bounds")
}

/// Every slice is {"0"}: deliberately not pairwise disjoint.
pub fn constant_collection(a: Alphabet) -> Collection {
    let carrier = pair_language(
        format!("const_pairs({})", a.size()),
        a,
        Arc::new(|_, y| y.len() == 1 && y.first() == Some(0)),
    );
    Collection::new(
        carrier,
        Polynomial::new(vec![0, 1]),
        Polynomial::new(vec![1, 1]),
    )
    .expect("degree one bounds")
}

/// The empty collection.
pub fn empty_collection(a: Alphabet) -> Collection {
    Collection::new(
        crate::language::empty(a),
        Polynomial::new(vec![1, 1]),
        Polynomial::new(vec![1, 1]),
    )
    .expect("degree one bounds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::lit;

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn eps() -> Str {
        Str::empty(bin())
    }

    #[test]
    fn honesty_check_examples() {
        let c = suffix_collection(bin());
        let rows = check_honestly_nonempty(&c, 3).unwrap();
        assert!(rows.iter().all(|r| r.witness.is_some()));
        assert_eq!(rows[0].witness.as_deref(), Some("2:0"));

        let rows = check_honestly_nonempty(&empty_collection(bin()), 3).unwrap();
        assert!(rows.iter().all(|r| r.witness.is_none()));
    }

    #[test]
    fn choice_examples() {
        let c = suffix_collection(bin());
        assert_eq!(choice_bruteforce(&c, &eps()).unwrap(), lit("2:0"));
        assert_eq!(choice_bruteforce(&c, &lit("2:1")).unwrap(), lit("2:10"));
        assert!(matches!(
            choice_bruteforce(&empty_collection(bin()), &eps()),
            Err(Error::SliceEmpty(_))
        ));
    }

    #[test]
    fn choice_lands_in_window() {
        for c in [
            suffix_collection(bin()),
            doubling_collection(bin()),
            tag_collection(bin()),
        ] {
            for x in strings::enumerate_upto_len(bin(), 4) {
                let y = choice_bruteforce(&c, &x).unwrap();
                assert!(c.slice_contains(&x, &y).unwrap());
                let (p, q) = c.bounds();
                assert!(p.eval(x.len() as u64) <= y.len() as u64);
                assert!(y.len() as u64 <= q.eval(x.len() as u64));
            }
        }
    }

    #[test]
    fn transversal_examples() {
        let c = suffix_collection(bin());
        assert!(transversal_member(&c, &lit("2:010"), 8).unwrap());
        assert!(!transversal_member(&c, &lit("2:011"), 8).unwrap());
        assert!(!transversal_member(&c, &eps(), 8).unwrap());
    }

    #[test]
    fn transversal_hits_each_slice_once() {
        for c in [
            suffix_collection(bin()),
            doubling_collection(bin()),
            tag_collection(bin()),
        ] {
            // Collect the transversal up to output length 8.
            let mut chosen = Vec::new();
            for y in strings::enumerate_upto_len(bin(), 8) {
                if transversal_member(&c, &y, 8).unwrap() {
                    chosen.push(y);
                }
            }
            // Every index with |x| <= 3 has exactly one chosen member in
            // its slice.
            for x in strings::enumerate_upto_len(bin(), 3) {
                let hits = chosen
                    .iter()
                    .filter(|y| c.slice_contains(&x, y).unwrap())
                    .count();
                assert_eq!(hits, 1, "slice at {x} in {}", c.carrier().name());
            }
        }
    }

    #[test]
    fn transversal_horizon_error() {
        let c = suffix_collection(bin());
        // p(m) = m + 1 <= 9 holds up to m = 8 > horizon 2.
        assert!(matches!(
            transversal_member(&c, &lit("2:011011011"), 2),
            Err(Error::HorizonTooSmall { .. })
        ));
    }

    #[test]
    fn disjointness_audit() {
        assert!(audit_pairwise_disjoint(&suffix_collection(bin()), 4)
            .unwrap()
            .is_empty());
        assert!(audit_pairwise_disjoint(&empty_collection(bin()), 4)
            .unwrap()
            .is_empty());
        let violations = audit_pairwise_disjoint(&constant_collection(bin()), 3).unwrap();
        assert!(!violations.is_empty());
        assert!(violations.iter().all(|v| v.member == "2:0"));
    }

    #[test]
    fn uniformize_examples() {
        let c = suffix_collection(bin());
        let r = MultiMap::new(c.carrier().clone(), Some(Polynomial::new(vec![1, 1])));
        let f = refine_uniformize(&r, 5).unwrap();
        for x in strings::enumerate_upto_len(bin(), 4) {
            let y = f.value(&x).unwrap().unwrap();
            assert_eq!(y, x.concat(&lit("2:0")).unwrap());
            // Refinement: the selected value is in the relation.
            assert!(c.slice_contains(&x, &y).unwrap());
        }

        // Already single-valued relation: the refinement is the relation.
        let t = tag_collection(bin());
        let r = MultiMap::new(t.carrier().clone(), Some(Polynomial::new(vec![1, 1])));
        let f = refine_uniformize(&r, 5).unwrap();
        for x in strings::enumerate_upto_len(bin(), 4) {
            assert_eq!(f.value(&x).unwrap().unwrap(), x.tagged(1).unwrap());
        }

        // Empty slice: undefined there, preserving the domain.
        let e = MultiMap::new(
            empty_collection(bin()).carrier().clone(),
            Some(Polynomial::new(vec![1, 1])),
        );
        let f = refine_uniformize(&e, 5).unwrap();
        assert_eq!(f.value(&eps()).unwrap(), None);

        // Missing window is an error.
        let bare = MultiMap::new(c.carrier().clone(), None);
        assert!(matches!(
            refine_uniformize(&bare, 5),
            Err(Error::WindowUnspecified)
        ));
    }
}

//! Finite differences between languages: the piecewise-constant shift
//! function relating their ranking functions, countability transfer
//! across a finite difference, and the offset-matching equipollence
//! criterion for bases with super-polynomial gaps.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;


use crate::language::{self, Language, MembershipOutcome, Verdict};
use crate::strings::{rank, unrank, Nat, Str};
use crate::witness::{Equipollence, PartialMap, TimeBound};
use crate::{Error, Result};

/// A language expressed as finitely many edits of a base:
/// B = (base ∪ added) \ removed.
#[derive(Clone, Debug)]
pub struct FiniteDiff {
    base: Language,
    added: Vec<Str>,
    removed: Vec<Str>,
}

impl FiniteDiff {
    /// Validates that every added string is outside the base and every
    /// removed string inside it.
    pub fn new(base: Language, added: Vec<Str>, removed: Vec<Str>) -> Result<Self> {
        let mut added = added;
        let mut removed = removed;
        added.sort_by(|x, y| x.lex_cmp(y));
        added.dedup();
        removed.sort_by(|x, y| x.lex_cmp(y));
        removed.dedup();
        for p in &added {
            if base.contains(p)? {
                return Err(Error::BadFiniteDiff(format!(
                    "added string {p} is already in {}",
                    base.name()
                )));
            }
        }
        for n in &removed {
            if !base.contains(n)? {
                return Err(Error::BadFiniteDiff(format!(
                    "removed string {n} is not in {}",
                    base.name()
                )));
            }
        }
        Ok(FiniteDiff {
            base,
            added,
            removed,
        })
    }

    pub fn base(&self) -> &Language {
        &self.base
    }

    pub fn added(&self) -> &[Str] {
        &self.added
    }

    pub fn removed(&self) -> &[Str] {
        &self.removed
    }

    /// |added| - |removed|: the net cardinality change at every large
    /// enough length.
    pub fn offset(&self) -> i64 {
        self.added.len() as i64 - self.removed.len() as i64
    }

    /// One more than the longest edited string; above this length the
    /// derived language agrees with the base.
    pub fn settle_length(&self) -> u64 {
        self.added
            .iter()
            .chain(self.removed.iter())
            .map(|s| s.len() as u64 + 1)
            .max()
            .unwrap_or(0)
    }

    /// The edited language itself.
    pub fn derived(&self) -> Language {
        let name = format!(
            "findiff({},+[{}],-[{}])",
            self.base.name(),
            self.added
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(","),
            self.removed
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        let base = self.base.clone();
        let added = self.added.clone();
        let removed = self.removed.clone();
        let mut lang = Language::new(
            name,
            self.base.alphabet(),
            Arc::new(move |x, fuel| {
                if removed.iter().any(|r| r == x) {
                    return MembershipOutcome::decided(false, x.len() as u64 + 1);
                }
                if added.iter().any(|p| p == x) {
                    return MembershipOutcome::decided(true, x.len() as u64 + 1);
                }
                let out = base.verdict(x).unwrap_or(MembershipOutcome {
                    verdict: Verdict::Out,
                    steps: 1,
                });
                let _ = fuel;
                out
            }),
        );
        if self.base.has_closed_census() {
            let base = self.base.clone();
            let added: Vec<u64> = self.added.iter().map(|s| s.len() as u64).collect();
            let removed: Vec<u64> = self.removed.iter().map(|s| s.len() as u64).collect();
            lang = lang.with_census(Arc::new(move |n| {
                let plus = added.iter().filter(|&&l| l <= n).count();
                let minus = removed.iter().filter(|&&l| l <= n).count();
                language::census(&base, n).expect("closed form present") + Nat::from(plus)
                    - Nat::from(minus)
            }));
        }
        lang
    }
}

/// The piecewise-constant shift relating the base's and the derived
/// language's ranking functions. Breakpoints are the edited strings in
/// length-lex order; the value on a range counts additions minus
/// removals seen so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftFn {
    pub breakpoints: Vec<Str>,
    /// `values[0]` applies below the first breakpoint (always 0);
    /// `values[i+1]` applies from `breakpoints[i]` on.
    pub values: Vec<i64>,
}

impl ShiftFn {
    pub fn eval(&self, x: &Str) -> i64 {
        let idx = self
            .breakpoints
            .partition_point(|z| z.lex_cmp(x) != std::cmp::Ordering::Greater);
        self.values[idx]
    }
}

/// Builds the shift function of a finite difference: each added
/// breakpoint bumps the shift by one, each removed breakpoint drops it
/// by one.
pub fn shift_function(d: &FiniteDiff) -> ShiftFn {
    let mut marks: Vec<(Str, i64)> = d
        .added()
        .iter()
        .map(|s| (s.clone(), 1i64))
        .chain(d.removed().iter().map(|s| (s.clone(), -1i64)))
        .collect();
    marks.sort_by(|(x, _), (y, _)| x.lex_cmp(y));
    let mut breakpoints = Vec::with_capacity(marks.len());
    let mut values = vec![0i64];
    let mut acc = 0i64;
    for (z, delta) in marks {
        acc += delta;
        breakpoints.push(z);
        values.push(acc);
    }
    ShiftFn {
        breakpoints,
        values,
    }
}

/// Transfers an enumeration of the base across a finite difference:
/// given a verified witness full-language ~ base, produces one for the
/// derived language by enumerating the additions first, shifting the
/// base enumeration up, and skipping the removed indices.
pub fn transfer_countability(e: &Equipollence, d: &FiniteDiff) -> Result<Equipollence> {
    if e.b.name() != d.base().name() {
        return Err(Error::EndpointMismatch {
            left: e.b.name().to_string(),
            right: d.base().name().to_string(),
        });
    }
    let a = e.forward.source_alphabet();
    let s = d.added().len();
    let additions: Vec<Str> = d.added().to_vec();

    // Indices of the removed strings in the shifted enumeration g'.
    let mut skipped: Vec<BigUint> = Vec::with_capacity(d.removed().len());
    for w in d.removed() {
        let back = e
            .backward
            .value(w)?
            .ok_or_else(|| Error::NotInEnumeration(w.to_string()))?;
        skipped.push(rank(&back) + BigUint::from(s));
    }
    skipped.sort();

    let skip = Arc::new(skipped);
    let hop = {
        let skip = skip.clone();
        move |i: BigUint| -> BigUint {
            let mut v = i;
            for j in skip.iter() {
                if *j <= v {
                    v += 1u32;
                }
            }
            v
        }
    };
    let hop_inv = {
        let skip = skip.clone();
        move |v: &BigUint| -> Option<BigUint> {
            if skip.iter().any(|j| j == v) {
                return None;
            }
            let below = skip.iter().filter(|j| *j < v).count();
            Some(v - BigUint::from(below))
        }
    };

    let max_added_len = additions.iter().map(|p| p.len() as u64).max().unwrap_or(0);
    let inner_fw = e.forward.clone();
    let fw_adds = additions.clone();
    let t = skip.len() as u64;
    let fw_bound = TimeBound::new(
        e.forward.bound().c + s as u64 + t + max_added_len + 2,
        e.forward.bound().e.max(1),
    );
    let forward = PartialMap::new(
        format!("transfer_fwd({})", d.derived().name()),
        a,
        a,
        fw_bound,
        Arc::new(move |x: &Str| {
            let shifted = hop(rank(x));
            let out = if shifted < BigUint::from(s) {
                let idx: usize = shifted.try_into().expect("index below s fits usize");
                Some(fw_adds[idx].clone())
            } else {
                let inner = unrank(&(shifted - BigUint::from(s)), x.alphabet());
                match inner_fw.value(&inner) {
                    Ok(v) => v,
                    Err(_) => None,
                }
            };
            let steps = x.len() as u64 + out.as_ref().map_or(0, |o| o.len() as u64) + 1;
            (out, steps)
        }),
    );

    let inner_bw = e.backward.clone();
    let bw_adds = additions.clone();
    let bw_bound = TimeBound::new(
        e.backward.bound().c + s as u64 + t + max_added_len + 2,
        e.backward.bound().e.max(1),
    );
    let backward = PartialMap::new(
        format!("transfer_bwd({})", d.derived().name()),
        a,
        a,
        bw_bound,
        Arc::new(move |y: &Str| {
            let index = match bw_adds.iter().position(|p| p == y) {
                Some(pos) => Some(BigUint::from(pos)),
                None => match inner_bw.value(y) {
                    Ok(Some(b)) => Some(rank(&b) + BigUint::from(s)),
                    _ => None,
                },
            };
            let out = index
                .and_then(|i| hop_inv(&i))
                .map(|i| unrank(&i, y.alphabet()));
            let steps = y.len() as u64 + out.as_ref().map_or(0, |o| o.len() as u64) + 1;
            (out, steps)
        }),
    )
    .with_domain(d.derived());

    Ok(Equipollence::new(
        forward,
        backward,
        e.a.clone(),
        d.derived(),
    ))
}

fn hardcoded_tables(
    d1: &FiniteDiff,
    d2: &FiniteDiff,
) -> Result<(u64, Vec<Str>, Vec<Str>)> {
    if d1.base().name() != d2.base().name() {
        return Err(Error::EndpointMismatch {
            left: d1.base().name().to_string(),
            right: d2.base().name().to_string(),
        });
    }
    let n0 = d1.settle_length().max(d2.settle_length());
    let left = language::enumerate_upto(&d1.derived(), n0)?;
    let right = language::enumerate_upto(&d2.derived(), n0)?;
    Ok((n0, left, right))
}

/// The offset-matching equipollence between two finite edits of one
/// base: a hard-coded bijection below the settle length (pairing
/// members in length-lex order), the identity above it. Errors when
/// the offsets differ, in which case this construction cannot exist.
pub fn findiff_witness(d1: &FiniteDiff, d2: &FiniteDiff) -> Result<Equipollence> {
    if d1.offset() != d2.offset() {
        return Err(Error::OffsetMismatch {
            left: d1.offset(),
            right: d2.offset(),
        });
    }
    let (n0, left, right) = hardcoded_tables(d1, d2)?;
    debug_assert_eq!(left.len(), right.len(), "equal offsets give equal counts");
    let fwd_table: HashMap<Str, Str> = left.iter().cloned().zip(right.iter().cloned()).collect();
    let bwd_table: HashMap<Str, Str> = right.iter().cloned().zip(left.iter().cloned()).collect();
    let bound = TimeBound::new(n0 + 2, 1);
    let a = d1.base().alphabet();
    let lookup = |table: HashMap<Str, Str>, name: String, domain: Language| {
        PartialMap::new(
            name,
            a,
            a,
            bound,
            Arc::new(move |x: &Str| {
                let out = if x.len() as u64 > n0 {
                    Some(x.clone())
                } else {
                    table.get(x).cloned()
                };
                let steps = x.len() as u64 + out.as_ref().map_or(0, |o| o.len() as u64) + 1;
                (out, steps)
            }),
        )
        .with_domain(domain)
    };
    Ok(Equipollence::new(
        lookup(fwd_table, "findiff_fwd".into(), d1.derived()),
        lookup(bwd_table, "findiff_bwd".into(), d2.derived()),
        d1.derived(),
        d2.derived(),
    ))
}

/// Like [`findiff_witness`] but one-sided: an injection witnessing
/// "at most", available whenever the first offset does not exceed the
/// second.
pub fn findiff_injection(d1: &FiniteDiff, d2: &FiniteDiff) -> Result<PartialMap> {
    if d1.offset() > d2.offset() {
        return Err(Error::OffsetOrder {
            left: d1.offset(),
            right: d2.offset(),
        });
    }
    let (n0, left, right) = hardcoded_tables(d1, d2)?;
    debug_assert!(left.len() <= right.len());
    let table: HashMap<Str, Str> = left.iter().cloned().zip(right.iter().cloned()).collect();
    let bound = TimeBound::new(n0 + 2, 1);
    let a = d1.base().alphabet();
    Ok(PartialMap::new(
        format!(
            "findiff_inj({} <= {})",
            d1.derived().name(),
            d2.derived().name()
        ),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| {
            let out = if x.len() as u64 > n0 {
                Some(x.clone())
            } else {
                table.get(x).cloned()
            };
            let steps = x.len() as u64 + out.as_ref().map_or(0, |o| o.len() as u64) + 1;
            (out, steps)
        }),
    )
    .with_domain(d1.derived()))
}

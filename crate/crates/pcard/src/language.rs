//! Step-budgeted decidable languages, census utilities, and the
//! gallery of named constructions the rest of the toolkit tests
//! against.
//!
//! A [`Language`] owns a deterministic membership evaluator that
//! reports abstract steps consumed; running out of fuel is a
//! distinguished verdict, never a silent "not a member". Gallery
//! evaluators count one unit per symbol inspected.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::strings::{rank, unpair, Alphabet, Nat, Str};
use crate::{Error, Result};

/// Default per-call step budget.
pub const DEFAULT_FUEL: u64 = 10_000_000;

/// Enumeration guard: brute-force census walks at most this many
/// strings.
pub const ENUMERATION_GUARD: u64 = 1 << 26;

/// Three-way membership verdict.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    In,
    Out,
    FuelExhausted,
}

/// Result of one evaluator call: the verdict plus steps consumed.
#[derive(Clone, Copy, Debug)]
pub struct MembershipOutcome {
    pub verdict: Verdict,
    pub steps: u64,
}

impl MembershipOutcome {
    pub fn decided(member: bool, steps: u64) -> Self {
        MembershipOutcome {
            verdict: if member { Verdict::In } else { Verdict::Out },
            steps,
        }
    }
}

type MembershipFn = dyn Fn(&Str, u64) -> MembershipOutcome + Send + Sync;
type CensusFn = dyn Fn(u64) -> Nat + Send + Sync;
type RankFn = dyn Fn(&Str) -> Nat + Send + Sync;

/// A named, step-budgeted decidable language.
#[derive(Clone)]
pub struct Language {
    name: String,
    alphabet: Alphabet,
    membership: Arc<MembershipFn>,
    census_closed: Option<Arc<CensusFn>>,
    rank_closed: Option<Arc<RankFn>>,
    fuel_limit: u64,
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Language({})", self.name)
    }
}

impl Language {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        membership: Arc<MembershipFn>,
    ) -> Self {
        Language {
            name: name.into(),
            alphabet,
            membership,
            census_closed: None,
            rank_closed: None,
            fuel_limit: DEFAULT_FUEL,
        }
    }

    pub fn with_census(mut self, census: Arc<CensusFn>) -> Self {
        self.census_closed = Some(census);
        self
    }

    /// Attach a closed-form strong ranking function: the count of
    /// members length-lex at most the argument.
    pub fn with_rank(mut self, rank: Arc<RankFn>) -> Self {
        self.rank_closed = Some(rank);
        self
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel_limit = fuel;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn fuel_limit(&self) -> u64 {
        self.fuel_limit
    }

    pub fn has_closed_census(&self) -> bool {
        self.census_closed.is_some()
    }

    /// Closed-form strong rank, when the language declares one.
    pub fn closed_rank(&self, x: &Str) -> Option<Nat> {
        self.rank_closed.as_ref().map(|f| f(x))
    }

    /// Raw three-way verdict under the language's fuel limit.
    pub fn verdict(&self, x: &Str) -> Result<MembershipOutcome> {
        if x.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.size(),
                actual: x.alphabet().size(),
            });
        }
        Ok((self.membership)(x, self.fuel_limit))
    }

    /// Boolean membership; fuel exhaustion surfaces as an error.
    pub fn contains(&self, x: &Str) -> Result<bool> {
        match self.verdict(x)?.verdict {
            Verdict::In => Ok(true),
            Verdict::Out => Ok(false),
            Verdict::FuelExhausted => Err(Error::FuelExhausted {
                language: self.name.clone(),
                len: x.len(),
            }),
        }
    }
}

/// Census table rows, convertible to `n,count` CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusTable {
    pub entries: Vec<(u64, Nat)>,
}

impl CensusTable {
    pub fn compute(lang: &Language, upto: u64) -> Result<Self> {
        let entries = (0..=upto)
            .map(|n| census(lang, n).map(|c| (n, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CensusTable { entries })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count\n");
        for (n, c) in &self.entries {
            out.push_str(&format!("{n},{c}\n"));
        }
        out
    }
}

fn guard_enumeration(a: Alphabet, n: u64) -> Result<()> {
    // sigma^(n+1) strings of length <= n, up to the geometric slack.
    let mut total = 1u64;
    for _ in 0..=n {
        total = total.saturating_mul(a.size() as u64);
        if total > ENUMERATION_GUARD {
            return Err(Error::CensusInfeasible {
                sigma: a.size(),
                exp: n + 1,
            });
        }
    }
    Ok(())
}

/// Exact count of members of length at most `n`. Uses the closed form
/// when the language declares one, otherwise brute-force enumeration
/// under the guard.
pub fn census(lang: &Language, n: u64) -> Result<Nat> {
    if let Some(closed) = &lang.census_closed {
        return Ok(closed(n));
    }
    guard_enumeration(lang.alphabet(), n)?;
    let mut count = Nat::zero();
    for x in crate::strings::enumerate_upto_len(lang.alphabet(), n) {
        if lang.contains(&x)? {
            count += 1u32;
        }
    }
    Ok(count)
}

/// All members of length at most `n`, in length-lex order. Always
/// enumerates (no closed-form shortcut), so the guard applies.
pub fn enumerate_upto(lang: &Language, n: u64) -> Result<Vec<Str>> {
    guard_enumeration(lang.alphabet(), n)?;
    let mut out = Vec::new();
    for x in crate::strings::enumerate_upto_len(lang.alphabet(), n) {
        if lang.contains(&x)? {
            out.push(x);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Gallery constructions
// ---------------------------------------------------------------------------

/// The full language over `a`.
pub fn sigma_star(a: Alphabet) -> Language {
    Language::new(
        format!("sigma_star({})", a.size()),
        a,
        Arc::new(|x, fuel| {
            let steps = x.len() as u64 + 1;
            if steps > fuel {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps: fuel,
                };
            }
            MembershipOutcome::decided(true, steps)
        }),
    )
    .with_census(Arc::new(move |n| a.upto_count(n)))
    .with_rank(Arc::new(|x| rank(x) + 1u32))
}

/// The empty language over `a`.
pub fn empty(a: Alphabet) -> Language {
    Language::new(
        format!("empty({})", a.size()),
        a,
        Arc::new(|_, _| MembershipOutcome::decided(false, 1)),
    )
    .with_census(Arc::new(|_| Nat::zero()))
    .with_rank(Arc::new(|_| Nat::zero()))
}

/// A finite language given by an explicit member list.
pub fn finite(a: Alphabet, members: Vec<Str>) -> Result<Language> {
    for m in &members {
        if m.alphabet() != a {
            return Err(Error::AlphabetMismatch {
                expected: a.size(),
                actual: m.alphabet().size(),
            });
        }
    }
    let mut members = members;
    members.sort_by(|x, y| x.lex_cmp(y));
    members.dedup();
    let name = format!(
        "finite([{}])",
        members
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let lens: Vec<u64> = members.iter().map(|m| m.len() as u64).collect();
    let members = Arc::new(members);
    let members_for_census = lens;
    let members_for_rank = members.clone();
    Ok(Language::new(
        name,
        a,
        Arc::new(move |x, fuel| {
            let steps = (x.len() as u64 + 1).min(fuel);
            if x.len() as u64 + 1 > fuel {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps,
                };
            }
            MembershipOutcome::decided(members.iter().any(|m| m == x), steps)
        }),
    )
    .with_census(Arc::new(move |n| {
        Nat::from(members_for_census.iter().filter(|&&l| l <= n).count())
    }))
    .with_rank(Arc::new(move |x| {
        Nat::from(
            members_for_rank
                .iter()
                .filter(|m| m.lex_cmp(x) != std::cmp::Ordering::Greater)
                .count(),
        )
    })))
}

/// Complement of `inner` within its alphabet.
pub fn complement(inner: &Language) -> Language {
    let a = inner.alphabet();
    let inner_membership = inner.clone();
    let name = format!("complement({})", inner.name());
    let mut lang = Language::new(
        name,
        a,
        Arc::new(move |x, fuel| {
            let out = (inner_membership.membership)(x, fuel);
            MembershipOutcome {
                verdict: match out.verdict {
                    Verdict::In => Verdict::Out,
                    Verdict::Out => Verdict::In,
                    Verdict::FuelExhausted => Verdict::FuelExhausted,
                },
                steps: out.steps,
            }
        }),
    );
    if let Some(inner_census) = inner.census_closed.clone() {
        lang = lang.with_census(Arc::new(move |n| a.upto_count(n) - inner_census(n)));
    }
    if let Some(inner_rank) = inner.rank_closed.clone() {
        lang = lang.with_rank(Arc::new(move |x| rank(x) + 1u32 - inner_rank(x)));
    }
    lang
}

/// Tagged disjoint union: 0A together with 1B.
pub fn oplus(a_lang: &Language, b_lang: &Language) -> Result<Language> {
    if a_lang.alphabet() != b_lang.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: a_lang.alphabet().size(),
            actual: b_lang.alphabet().size(),
        });
    }
    let name = format!("oplus({},{})", a_lang.name(), b_lang.name());
    let left = a_lang.clone();
    let right = b_lang.clone();
    let mut lang = Language::new(
        name,
        a_lang.alphabet(),
        Arc::new(move |x, fuel| {
            if fuel == 0 {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps: 0,
                };
            }
            let side = match x.first() {
                Some(0) => &left,
                Some(1) => &right,
                _ => return MembershipOutcome::decided(false, 1),
            };
            let rest = x.untagged(x.first().unwrap()).unwrap();
            let out = (side.membership)(&rest, fuel - 1);
            MembershipOutcome {
                verdict: out.verdict,
                steps: out.steps + 1,
            }
        }),
    );
    if let (Some(ca), Some(cb)) = (a_lang.census_closed.clone(), b_lang.census_closed.clone()) {
        lang = lang.with_census(Arc::new(move |n| {
            if n == 0 {
                Nat::zero()
            } else {
                ca(n - 1) + cb(n - 1)
            }
        }));
    }
    Ok(lang)
}

/// Cartesian product under the pair encoding.
pub fn times(a_lang: &Language, b_lang: &Language) -> Result<Language> {
    if a_lang.alphabet() != b_lang.alphabet() {
        return Err(Error::AlphabetMismatch {
            expected: a_lang.alphabet().size(),
            actual: b_lang.alphabet().size(),
        });
    }
    let name = format!("times({},{})", a_lang.name(), b_lang.name());
    let left = a_lang.clone();
    let right = b_lang.clone();
    Ok(Language::new(
        name,
        a_lang.alphabet(),
        Arc::new(move |x, fuel| {
            let decode_cost = x.len() as u64 + 1;
            if decode_cost >= fuel {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps: fuel,
                };
            }
            let (p, q) = unpair(x);
            let lo = (left.membership)(&p, fuel - decode_cost);
            let ro = (right.membership)(&q, fuel - decode_cost - lo.steps);
            let steps = decode_cost + lo.steps + ro.steps;
            match (lo.verdict, ro.verdict) {
                (Verdict::FuelExhausted, _) | (_, Verdict::FuelExhausted) => MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps,
                },
                (l, r) => {
                    MembershipOutcome::decided(l == Verdict::In && r == Verdict::In, steps)
                }
            }
        }),
    ))
}

/// All strings with the given prefix.
pub fn prefix(w: Str) -> Language {
    let a = w.alphabet();
    let name = format!("prefix({w})");
    let w_census = w.clone();
    let needle = w.clone();
    Language::new(
        name,
        a,
        Arc::new(move |x, fuel| {
            let steps = (needle.len().min(x.len()) as u64 + 1).min(fuel);
            if needle.len() as u64 + 1 > fuel {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps,
                };
            }
            MembershipOutcome::decided(x.starts_with(&needle), steps)
        }),
    )
    .with_census(Arc::new(move |n| {
        if n >= w_census.len() as u64 {
            a.upto_count(n - w_census.len() as u64)
        } else {
            Nat::zero()
        }
    }))
    .with_rank(Arc::new(move |x| {
        let wl = w.len();
        if x.len() < wl {
            return Nat::zero();
        }
        // Members shorter than x, then the same-length boundary.
        let shorter = a.shorter_count(x.len() - wl);
        let sigma = BigUint::from(a.size());
        let same = match x.symbols()[..wl].cmp(w.symbols()) {
            std::cmp::Ordering::Greater => sigma.pow((x.len() - wl) as u32),
            std::cmp::Ordering::Less => Nat::zero(),
            std::cmp::Ordering::Equal => {
                let mut v = Nat::zero();
                for &s in &x.symbols()[wl..] {
                    v = v * &sigma + Nat::from(s);
                }
                v + 1u32
            }
        };
        shorter + same
    }))
}

/// The full language minus its `n` length-lex least strings.
pub fn shift_set(a: Alphabet, n: u64) -> Language {
    let name = format!("shift_set({},{})", a.size(), n);
    Language::new(
        name,
        a,
        Arc::new(move |x, fuel| {
            let steps = (x.len() as u64 + 1).min(fuel);
            if x.len() as u64 + 1 > fuel {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps,
                };
            }
            MembershipOutcome::decided(rank(x) >= Nat::from(n), steps)
        }),
    )
    .with_census(Arc::new(move |len| {
        let total = a.upto_count(len);
        if total > Nat::from(n) {
            total - Nat::from(n)
        } else {
            Nat::zero()
        }
    }))
    .with_rank(Arc::new(move |x| {
        let upto = rank(x) + 1u32;
        if upto > Nat::from(n) {
            upto - Nat::from(n)
        } else {
            Nat::zero()
        }
    }))
}

/// tow(0) = 1, tow(k+1) = 2^tow(k), truncated to the values that fit a
/// u64 length. The next value is astronomically larger than any
/// representable string length.
pub fn tow_values() -> &'static [u64] {
    &[1, 2, 4, 16, 65536]
}

fn tow_band(len: u64) -> Option<usize> {
    if len == 0 {
        return None;
    }
    Some(
        tow_values()
            .iter()
            .rposition(|&t| t <= len)
            .expect("tow(0)=1 <= any positive length"),
    )
}

fn tower_gap(a: Alphabet, even: bool) -> Language {
    let which = if even { "A0" } else { "A1" };
    let name = format!("tower_gap_{}({})", which, a.size());
    Language::new(
        name,
        a,
        Arc::new(move |x, fuel| {
            let steps = 1u64.min(fuel);
            if fuel == 0 {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps,
                };
            }
            let member = tow_band(x.len() as u64).is_some_and(|b| (b % 2 == 0) == even);
            MembershipOutcome::decided(member, steps)
        }),
    )
    .with_census(Arc::new(move |n| {
        // Geometric sums over the bands intersected with [1, n].
        let sigma = BigUint::from(a.size());
        let tow = tow_values();
        let mut total = Nat::zero();
        for (band, &lo) in tow.iter().enumerate() {
            if (band % 2 == 0) != even || lo > n {
                continue;
            }
            let hi = if band + 1 < tow.len() {
                (tow[band + 1] - 1).min(n)
            } else {
                n
            };
            // sum_{l=lo..=hi} sigma^l
            total += (sigma.pow(hi as u32 + 1) - sigma.pow(lo as u32)) / (a.size() - 1);
        }
        total
    }))
    .with_rank(Arc::new(move |x| {
        // Every string of an in-band length shorter than x, plus the
        // strings of x's own length up to x when that length is in.
        let len = x.len() as u64;
        let sigma = BigUint::from(a.size());
        let tow = tow_values();
        let mut total = Nat::zero();
        for (band, &lo) in tow.iter().enumerate() {
            if (band % 2 == 0) != even || lo >= len.max(1) {
                continue;
            }
            let hi = if band + 1 < tow.len() {
                (tow[band + 1] - 1).min(len.saturating_sub(1))
            } else {
                len.saturating_sub(1)
            };
            if lo <= hi {
                total += (sigma.pow(hi as u32 + 1) - sigma.pow(lo as u32)) / (a.size() - 1);
            }
        }
        if tow_band(len).is_some_and(|b| (b % 2 == 0) == even) {
            let mut v = Nat::zero();
            for &s in x.symbols() {
                v = v * &sigma + Nat::from(s);
            }
            total += v + 1u32;
        }
        total
    }))
}

/// Lengths in the even tow bands: [tow(2k), tow(2k+1)).
pub fn tower_gap_a0(a: Alphabet) -> Language {
    tower_gap(a, true)
}

/// Lengths in the odd tow bands: [tow(2k+1), tow(2k+2)).
pub fn tower_gap_a1(a: Alphabet) -> Language {
    tower_gap(a, false)
}

/// Lengths of the Dedekind tally set that fit a u64: each next length
/// is the previous raised to its own base-2 logarithm.
pub fn dedekind_lengths() -> &'static [u64] {
    &[4, 16, 65536]
}

fn is_dedekind_length(len: u64) -> bool {
    // len = 2^(2^(2^k)) iff repeated exact log2 three times lands on an
    // integer; within u64 only the hard-coded values qualify.
    dedekind_lengths().contains(&len)
}

/// The all-ones tally set with triple-exponential-tower lengths; an
/// infinite set p-equipollent to none of its proper subsets.
pub fn dedekind(a: Alphabet) -> Language {
    let name = format!("dedekind({})", a.size());
    Language::new(
        name,
        a,
        Arc::new(move |x, fuel| {
            let steps = (x.len() as u64 + 1).min(fuel);
            if x.len() as u64 + 1 > fuel {
                return MembershipOutcome {
                    verdict: Verdict::FuelExhausted,
                    steps,
                };
            }
            let member =
                is_dedekind_length(x.len() as u64) && x.symbols().iter().all(|&s| s == 1);
            MembershipOutcome::decided(member, steps)
        }),
    )
    .with_census(Arc::new(|n| {
        Nat::from(dedekind_lengths().iter().filter(|&&l| l <= n).count())
    }))
    .with_rank(Arc::new(|x| {
        let shorter = dedekind_lengths()
            .iter()
            .filter(|&&l| l < x.len() as u64)
            .count();
        // The all-ones member of x's own length counts when it does
        // not lexicographically exceed x.
        let ones = vec![1u8; x.len()];
        let same =
            usize::from(is_dedekind_length(x.len() as u64) && ones.as_slice() <= x.symbols());
        Nat::from(shorter + same)
    }))
}

/// Verifies the gap law between consecutive Dedekind lengths: each next
/// length equals the previous raised to its own log2. Lengths past
/// 65536 are out of range, hence the `kmax <= 2` bound.
pub fn dedekind_gap_check(kmax: u64) -> Result<bool> {
    if kmax > 2 {
        return Err(Error::Precondition(format!(
            "dedekind gap check supports kmax <= 2, got {kmax}"
        )));
    }
    let lens = dedekind_lengths();
    for k in 1..=kmax as usize {
        let l = lens[k - 1];
        let log2 = l.ilog2() as u32;
        if l.pow(log2) != lens[k] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Argument to the string-keyed gallery entry point.
#[derive(Clone, Debug)]
pub enum GalleryArg {
    Size(usize),
    Int(u64),
    Str(Str),
    Strs(Vec<Str>),
    Lang(Language),
}

/// String-keyed gallery dispatcher, mirroring the CLI DSL names.
pub fn gallery(name: &str, args: Vec<GalleryArg>) -> Result<Language> {
    let bad = |reason: &str| Error::BadGalleryParams {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    match (name, args.as_slice()) {
        ("sigma_star", [GalleryArg::Size(k)]) => Ok(sigma_star(Alphabet::new(*k)?)),
        ("empty", [GalleryArg::Size(k)]) => Ok(empty(Alphabet::new(*k)?)),
        ("finite", [GalleryArg::Strs(ms)]) => {
            let a = ms
                .first()
                .map(|m| m.alphabet())
                .ok_or_else(|| bad("finite needs at least one member to fix the alphabet"))?;
            finite(a, ms.clone())
        }
        ("complement", [GalleryArg::Lang(l)]) => Ok(complement(l)),
        ("oplus", [GalleryArg::Lang(l), GalleryArg::Lang(r)]) => oplus(l, r),
        ("times", [GalleryArg::Lang(l), GalleryArg::Lang(r)]) => times(l, r),
        ("prefix", [GalleryArg::Str(w)]) => Ok(prefix(w.clone())),
        ("shift_set", [GalleryArg::Size(k), GalleryArg::Int(n)]) => {
            Ok(shift_set(Alphabet::new(*k)?, *n))
        }
        ("tower_gap_A0", [GalleryArg::Size(k)]) => Ok(tower_gap_a0(Alphabet::new(*k)?)),
        ("tower_gap_A1", [GalleryArg::Size(k)]) => Ok(tower_gap_a1(Alphabet::new(*k)?)),
        ("dedekind", [GalleryArg::Size(k)]) => Ok(dedekind(Alphabet::new(*k)?)),
        (
            "sigma_star" | "empty" | "finite" | "complement" | "oplus" | "times" | "prefix"
            | "shift_set" | "tower_gap_A0" | "tower_gap_A1" | "dedekind",
            _,
        ) => Err(bad("wrong argument kinds or arity")),
        _ => Err(Error::UnknownGallery(name.to_string())),
    }
}

//! Ranking functions and what they buy: rank-based equipollences with
//! the full language, orderings induced by witnesses, and census /
//! density comparisons.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::language::{self, census, Language};
use crate::poly::Polynomial;
use crate::strings::{rank, unrank, Nat, Str};
use crate::witness::{Equipollence, PartialMap, TimeBound};
use crate::{Error, Result};

/// Number of members of `l` that are length-lex at most `x`. Members
/// are counted inclusively, so a member's own strong rank is >= 1.
/// Uses the language's closed-form rank when declared, brute-force
/// enumeration under the guard otherwise.
pub fn strong_rank(l: &Language, x: &Str) -> Result<Nat> {
    if let Some(r) = l.closed_rank(x) {
        return Ok(r);
    }
    let mut count = Nat::zero();
    for y in language::enumerate_upto(l, x.len() as u64)? {
        if y.lex_cmp(x) != std::cmp::Ordering::Greater {
            count += 1u32;
        }
    }
    Ok(count)
}

/// The unique member of `l` with the given strong rank (1-indexed),
/// looked up by binary search on the length-lex order. Errors carry
/// the final bracketing interval when no member matches within
/// `nmax`.
pub fn rank_inverse(l: &Language, r: &Nat, nmax: u64) -> Result<Str> {
    if r.is_zero() {
        return Err(Error::Precondition(
            "strong ranks are 1-indexed; rank 0 has no member".into(),
        ));
    }
    let a = l.alphabet();
    let mut lo = Nat::zero();
    let mut hi = a.upto_count(nmax) - 1u32;
    // strong_rank(unrank(m)) is non-decreasing in m; find the least m
    // reaching r.
    if strong_rank(l, &unrank(&hi, a))? < *r {
        return Err(Error::RankNotFound {
            language: l.name().to_string(),
            rank: r.to_string(),
            nmax,
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    while lo < hi {
        let mid = (&lo + &hi) / 2u32;
        if strong_rank(l, &unrank(&mid, a))? >= *r {
            hi = mid.clone();
        } else {
            lo = mid + 1u32;
        }
    }
    let candidate = unrank(&lo, a);
    if l.contains(&candidate)? && strong_rank(l, &candidate)? == *r {
        Ok(candidate)
    } else {
        Err(Error::RankNotFound {
            language: l.name().to_string(),
            rank: r.to_string(),
            nmax,
            lo: lo.to_string(),
            hi: hi.to_string(),
        })
    }
}

/// Builds the equipollence L ~ full language from the strong ranking
/// function: forward sends a member to the string indexed by its rank
/// minus one, backward recovers the member by rank lookup.
///
/// `probe` is the length up to which L must be inhabited for the
/// construction to make sense; an empty prefix is reported instead of
/// silently returning a vacuous witness. The backward search horizon
/// is the input length plus `SEARCH_SLACK`.
pub fn rank_witness(l: &Language, probe: u64) -> Result<Equipollence> {
    const SEARCH_SLACK: u64 = 8;
    if census(l, probe)?.is_zero() {
        return Err(Error::EmptyInRange(l.name().to_string()));
    }
    let a = l.alphabet();
    let star = language::sigma_star(a);
    let fwd_lang = l.clone();
    let forward = PartialMap::new(
        format!("rank_fwd({})", l.name()),
        a,
        a,
        TimeBound::new(4, 1),
        Arc::new(move |x: &Str| {
            if !matches!(fwd_lang.contains(x), Ok(true)) {
                return (None, x.len() as u64 + 1);
            }
            match strong_rank(&fwd_lang, x) {
                Ok(r) => {
                    let out = unrank(&(r - 1u32), x.alphabet());
                    let steps = x.len() as u64 + out.len() as u64 + 1;
                    (Some(out), steps)
                }
                Err(_) => (None, x.len() as u64 + 1),
            }
        }),
    )
    .with_domain(l.clone());
    let bwd_lang = l.clone();
    let backward = PartialMap::new(
        format!("rank_bwd({})", l.name()),
        a,
        a,
        TimeBound::new(4, 1),
        Arc::new(move |s: &Str| {
            let target = rank(s) + 1u32;
            match rank_inverse(&bwd_lang, &target, s.len() as u64 + SEARCH_SLACK) {
                Ok(out) => {
                    let steps = s.len() as u64 + out.len() as u64 + 1;
                    (Some(out), steps)
                }
                Err(_) => (None, s.len() as u64 + 1),
            }
        }),
    );
    Ok(Equipollence::new(forward, backward, l.clone(), star))
}

/// A total order on the members of a language, with an optional
/// declared length-relation polynomial.
#[derive(Clone)]
pub struct StrOrdering {
    name: String,
    compare: Arc<dyn Fn(&Str, &Str) -> Result<std::cmp::Ordering> + Send + Sync>,
    pub length_poly: Option<Polynomial>,
}

impl StrOrdering {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn compare(&self, x: &Str, y: &Str) -> Result<std::cmp::Ordering> {
        (self.compare)(x, y)
    }
}

/// The ordering a witness L ~ full language induces on L: compare
/// members by the length-lex order of their images.
pub fn induced_ordering(e: &Equipollence) -> StrOrdering {
    let fwd = e.forward.clone();
    let name = format!("induced({})", e.forward.name());
    let length_poly = Some(e.forward.bound().as_polynomial());
    StrOrdering {
        name,
        compare: Arc::new(move |x: &Str, y: &Str| {
            let fx = fwd.value(x)?.ok_or_else(|| {
                Error::Precondition(format!("ordering undefined: no image for {x}"))
            })?;
            let fy = fwd.value(y)?.ok_or_else(|| {
                Error::Precondition(format!("ordering undefined: no image for {y}"))
            })?;
            Ok(fx.lex_cmp(&fy))
        }),
        length_poly,
    }
}

/// One row of a census comparison: does c_A(n) <= c_B(p(n)), and does
/// c_B(n) <= c_A(q(n))?
#[derive(Clone, Debug, Serialize)]
pub struct CensusComparison {
    pub n: u64,
    pub a_within_b: bool,
    pub b_within_a: bool,
}

impl CensusComparison {
    pub fn pass(&self) -> bool {
        self.a_within_b && self.b_within_a
    }
}

/// Checks polynomially related censuses pointwise up to `nmax`.
pub fn census_poly_related(
    a: &Language,
    b: &Language,
    p: &Polynomial,
    q: &Polynomial,
    nmax: u64,
) -> Result<Vec<CensusComparison>> {
    (0..=nmax)
        .map(|n| {
            Ok(CensusComparison {
                n,
                a_within_b: census(a, n)? <= census(b, p.eval(n))?,
                b_within_a: census(b, n)? <= census(a, q.eval(n))?,
            })
        })
        .collect()
}

/// Outcome of an empirical exponential-density probe.
#[derive(Clone, Debug, Serialize)]
pub struct DensityVerdict {
    pub passes: bool,
    /// min over the tested window of log2(census(n)) / n^c_exp, when
    /// every census in the window is positive. Empirical only; no
    /// asymptotic claim.
    pub empirical_constant: Option<f64>,
}

/// The constant below which the empirical density probe reports
/// failure.
pub const DENSITY_FLOOR: f64 = 0.5;

fn log2_nat(n: &Nat) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        (n.to_u64().unwrap() as f64).log2()
    } else {
        let top: BigUint = n >> (bits - 53);
        (top.to_u64().unwrap() as f64).log2() + (bits - 53) as f64
    }
}

/// Estimates the least a with census(n) >= 2^(a * n^c_exp) over the
/// trailing half-window [nmax/2, nmax], and passes when the estimate
/// clears [`DENSITY_FLOOR`].
pub fn exp_density_check(l: &Language, c_exp: f64, nmax: u64) -> Result<DensityVerdict> {
    if nmax == 0 {
        return Err(Error::Precondition("density check needs nmax >= 1".into()));
    }
    let start = (nmax / 2).max(1);
    let mut constant: Option<f64> = None;
    for n in start..=nmax {
        let c = census(l, n)?;
        if c.is_zero() {
            return Ok(DensityVerdict {
                passes: false,
                empirical_constant: None,
            });
        }
        let a = log2_nat(&c) / (n as f64).powf(c_exp);
        constant = Some(constant.map_or(a, |prev: f64| prev.min(a)));
    }
    let constant = constant.expect("window is nonempty");
    Ok(DensityVerdict {
        passes: constant >= DENSITY_FLOOR,
        empirical_constant: Some(constant),
    })
}

/// Weak rank of a member under an ordering: how many members up to the
/// probe length precede-or-equal it. Brute force, for laws and tests.
pub fn weak_rank_upto(
    l: &Language,
    ord: &StrOrdering,
    x: &Str,
    upto: u64,
) -> Result<Nat> {
    let mut count = Nat::zero();
    for y in language::enumerate_upto(l, upto)? {
        if ord.compare(&y, x)? != std::cmp::Ordering::Greater {
            count += 1u32;
        }
    }
    Ok(count)
}

impl Equipollence {
    /// The forward and backward clock bounds as polynomials, the pair
    /// Lemma-4.18-style census comparisons use.
    pub fn declared_bound_polys(&self) -> (Polynomial, Polynomial) {
        (
            self.forward.bound().as_polynomial(),
            self.backward.bound().as_polynomial(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{
        complement, dedekind, empty, prefix, sigma_star, tower_gap_a0, tower_gap_a1,
    };
    use num_traits::One;
    use crate::strings::{enumerate_upto_len, lit, Alphabet};
    use crate::witness::verify_equipollence;

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn zero_star() -> Language {
        prefix(lit("2:0"))
    }

    #[test]
    fn strong_rank_examples() {
        assert_eq!(
            strong_rank(&sigma_star(bin()), &lit("2:1")).unwrap(),
            Nat::from(3u32)
        );
        // Members of the 0-prefixed language that are <=_lex "1": just "0".
        assert_eq!(
            strong_rank(&zero_star(), &lit("2:1")).unwrap(),
            Nat::from(1u32)
        );
        assert_eq!(
            strong_rank(&empty(bin()), &lit("2:0110")).unwrap(),
            Nat::zero()
        );
    }

    #[test]
    fn strong_rank_matches_enumeration_oracle() {
        let langs = [sigma_star(bin()), zero_star(), dedekind(bin())];
        for l in &langs {
            for x in enumerate_upto_len(bin(), 6) {
                let oracle = language::enumerate_upto(l, 6)
                    .unwrap()
                    .into_iter()
                    .filter(|y| y.lex_cmp(&x) != std::cmp::Ordering::Greater)
                    .count();
                assert_eq!(strong_rank(l, &x).unwrap(), Nat::from(oracle));
            }
        }
    }

    #[test]
    fn rank_inverse_examples() {
        assert_eq!(
            rank_inverse(&sigma_star(bin()), &Nat::from(5u32), 8).unwrap(),
            lit("2:01")
        );
        assert_eq!(
            rank_inverse(&zero_star(), &Nat::one(), 8).unwrap(),
            lit("2:0")
        );
        assert!(matches!(
            rank_inverse(&zero_star(), &Nat::from(10_000u32), 3),
            Err(Error::RankNotFound { .. })
        ));
        assert!(rank_inverse(&sigma_star(bin()), &Nat::zero(), 4).is_err());
    }

    #[test]
    fn rank_roundtrip_on_gallery_languages() {
        let langs = [
            sigma_star(bin()),
            zero_star(),
            complement(&zero_star()),
            language::shift_set(bin(), 3),
        ];
        for l in &langs {
            for x in language::enumerate_upto(l, 8).unwrap() {
                let r = strong_rank(l, &x).unwrap();
                assert_eq!(rank_inverse(l, &r, 8).unwrap(), x, "{}", l.name());
            }
        }
    }

    #[test]
    fn rank_witness_examples() {
        let e = rank_witness(&zero_star(), 4).unwrap();
        assert_eq!(
            e.forward.value(&lit("2:0")).unwrap().unwrap(),
            Str::empty(bin())
        );
        assert!(verify_equipollence(&e, 7).unwrap().clean());

        let id = rank_witness(&sigma_star(bin()), 4).unwrap();
        // On the full language the ranking map fixes every rank.
        for x in enumerate_upto_len(bin(), 5) {
            assert_eq!(id.forward.value(&x).unwrap().unwrap(), x);
        }

        assert!(matches!(
            rank_witness(&empty(bin()), 6),
            Err(Error::EmptyInRange(_))
        ));
    }

    #[test]
    fn induced_ordering_matches_images() {
        let e = rank_witness(&zero_star(), 4).unwrap();
        let ord = induced_ordering(&e);
        assert_eq!(
            ord.compare(&lit("2:0"), &lit("2:00")).unwrap(),
            std::cmp::Ordering::Less
        );
        assert_eq!(
            ord.compare(&lit("2:01"), &lit("2:01")).unwrap(),
            std::cmp::Ordering::Equal
        );
        // Totality and transitivity over the members up to length 6.
        let members = language::enumerate_upto(&zero_star(), 6).unwrap();
        for x in &members {
            for y in &members {
                let xy = ord.compare(x, y).unwrap();
                let yx = ord.compare(y, x).unwrap();
                assert_eq!(xy, yx.reverse());
                if xy == std::cmp::Ordering::Equal {
                    assert_eq!(x, y);
                }
                for z in &members {
                    if xy != std::cmp::Ordering::Greater
                        && ord.compare(y, z).unwrap() != std::cmp::Ordering::Greater
                    {
                        assert_ne!(ord.compare(x, z).unwrap(), std::cmp::Ordering::Greater);
                    }
                }
            }
        }
        // Weak rank under the ordering equals image rank plus one.
        for x in &members {
            let img = e.forward.value(x).unwrap().unwrap();
            assert_eq!(
                weak_rank_upto(&zero_star(), &ord, x, 6).unwrap(),
                rank(&img) + 1u32
            );
        }
        // Length-related through the honesty exponent of the forward
        // map: x below y bounds |x| by a polynomial in |y|.
        let audit = crate::witness::audit_map(&e.forward, 6).unwrap();
        let k = audit.honest_with.expect("ranking map is honest") as u32;
        for x in &members {
            for y in &members {
                if ord.compare(x, y).unwrap() == std::cmp::Ordering::Less {
                    let fy = e.forward.value(y).unwrap().unwrap();
                    assert!(
                        x.len() as u64 <= (fy.len() as u64).pow(k) + u64::from(k),
                        "length relation fails for {x} below {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn census_poly_related_examples() {
        let star = sigma_star(bin());
        let idp = Polynomial::identity();
        let rows = census_poly_related(&star, &star, &idp, &idp, 8).unwrap();
        assert!(rows.iter().all(|r| r.pass()));

        // Full language vs 0-prefixed with p(n) = n + 1.
        let p = Polynomial::new(vec![1, 1]);
        let rows = census_poly_related(&star, &zero_star(), &p, &p, 8).unwrap();
        assert!(rows.iter().all(|r| r.pass()));
    }

    #[test]
    fn tower_gaps_not_polynomially_related() {
        let a0 = tower_gap_a0(bin());
        let a1 = tower_gap_a1(bin());
        // Representative polynomials of degree <= 3 with q(20) < 65536.
        for coeffs in [
            vec![1, 1],
            vec![0, 3],
            vec![0, 0, 1],
            vec![5, 0, 2],
            vec![0, 0, 0, 1],
            vec![3, 2, 1, 5],
        ] {
            let p = Polynomial::new(coeffs);
            let rows = census_poly_related(&a0, &a1, &p, &p, 20).unwrap();
            let failing: Vec<u64> = rows.iter().filter(|r| !r.pass()).map(|r| r.n).collect();
            assert!(
                failing.iter().any(|&n| (16..=20).contains(&n)),
                "poly {p} should fail in the 16..20 band, failing = {failing:?}"
            );
        }
    }

    #[test]
    fn density_examples() {
        let v = exp_density_check(&sigma_star(bin()), 1.0, 8).unwrap();
        assert!(v.passes);
        assert!(v.empirical_constant.unwrap() >= 1.0);

        let v = exp_density_check(&zero_star(), 1.0, 8).unwrap();
        assert!(v.passes);

        let v = exp_density_check(&dedekind(bin()), 1.0, 65536).unwrap();
        assert!(!v.passes);

        // Below length 4 the Dedekind set is empty: no constant at all.
        let v = exp_density_check(&dedekind(bin()), 1.0, 6).unwrap();
        assert!(!v.passes);
        assert!(v.empirical_constant.is_none());
    }
}

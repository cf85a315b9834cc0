//! Assembling total isomorphisms out of partial equipollences, and the
//! consequences of having one: compressibility, enumeration by
//! iteration, many-one reductions, and cylinder witnesses.

use std::sync::Arc;

use num_traits::Zero;

use crate::language::{self, Language};
use crate::strings::{self, pair, unpair, Str};
use crate::witness::{
    verify_equipollence, Equipollence, MapOutcome, MapValue, PartialMap, TimeBound,
};
use crate::{Error, Result};

fn require_verified(e: &Equipollence, upto: u64) -> Result<()> {
    let report = verify_equipollence(e, upto)?;
    if !report.clean() {
        return Err(Error::Unverified(report.violations.len(), upto));
    }
    Ok(())
}

fn cost(input: &Str, output: &Str) -> u64 {
    input.len() as u64 + output.len() as u64 + 1
}

/// Welds a witness on A and a witness on its complement into one total
/// bijection: forward dispatches on the decider; backward runs both
/// inverses under their clocks and, when both answer, disambiguates by
/// the forward round trip.
///
/// Both input witnesses are re-verified up to `upto` first.
pub fn iso_from_complements(
    e: &Equipollence,
    ec: &Equipollence,
    decider: &Language,
    upto: u64,
) -> Result<Equipollence> {
    require_verified(e, upto)?;
    require_verified(ec, upto)?;
    let a = e.forward.source_alphabet();
    let target = e.forward.target_alphabet();

    let fwd_bound = e.forward.bound().join_plus_one(ec.forward.bound());
    let on = e.forward.clone();
    let off = ec.forward.clone();
    let decide = decider.clone();
    let forward = PartialMap::new(
        format!("iso_fwd({},{})", on.name(), off.name()),
        a,
        target,
        fwd_bound,
        Arc::new(move |x: &Str| {
            let in_a = match decide.contains(x) {
                Ok(v) => v,
                Err(_) => return (None, 1),
            };
            let side = if in_a { &on } else { &off };
            match side.apply(x) {
                Ok(out) => (out.value.as_defined().cloned(), out.steps + 1),
                Err(_) => (None, 1),
            }
        }),
    );

    let bw_bound = TimeBound::new(
        2 * (e.backward.bound().c.max(ec.backward.bound().c))
            + 2 * (e.forward.bound().c.max(ec.forward.bound().c))
            + 4,
        e.backward
            .bound()
            .e
            .max(ec.backward.bound().e)
            .max(e.forward.bound().e)
            .max(ec.forward.bound().e),
    );
    let back_on = e.backward.clone();
    let back_off = ec.backward.clone();
    let fwd_for_check = forward.clone();
    let backward = PartialMap::new(
        format!("iso_bwd({},{})", back_on.name(), back_off.name()),
        target,
        a,
        bw_bound,
        Arc::new(move |x: &Str| {
            // Run both inverses for their clocks.
            let run = |m: &PartialMap| -> (Option<Str>, u64) {
                match m.apply(x) {
                    Ok(MapOutcome {
                        value: MapValue::Defined(v),
                        steps,
                    }) => (Some(v), steps),
                    Ok(MapOutcome { steps, .. }) => (None, steps),
                    Err(_) => (None, 1),
                }
            };
            let (y, sy) = run(&back_on);
            let (z, sz) = run(&back_off);
            let mut steps = sy + sz;
            let out = match (y, z) {
                (Some(y), None) => Some(y),
                (None, Some(z)) => Some(z),
                (Some(y), Some(z)) if y == z => Some(y),
                (Some(y), Some(z)) => {
                    // Both inverses answered; exactly one survives the
                    // forward round trip.
                    let check = |cand: &Str| -> bool {
                        matches!(
                            fwd_for_check.apply(cand),
                            Ok(MapOutcome {
                                value: MapValue::Defined(ref img),
                                ..
                            }) if img == x
                        )
                    };
                    steps += 2;
                    if check(&y) {
                        Some(y)
                    } else if check(&z) {
                        Some(z)
                    } else {
                        None
                    }
                }
                (None, None) => None,
            };
            (out, steps)
        }),
    );

    Ok(Equipollence::new(
        forward,
        backward,
        language::sigma_star(a),
        language::sigma_star(target),
    ))
}

/// The four-witness isomorphism: tags each half-enumeration, composes
/// the tagged bijection for B with the inverse of the one for A, and
/// returns the total isomorphism carrying B onto A.
pub fn ghk_iso(
    fa: &Equipollence,
    fac: &Equipollence,
    gb: &Equipollence,
    gbc: &Equipollence,
    upto: u64,
) -> Result<Equipollence> {
    for e in [fa, fac, gb, gbc] {
        require_verified(e, upto)?;
    }
    for (name, lang) in [
        ("A", &fa.a),
        ("complement of A", &fac.a),
        ("B", &gb.a),
        ("complement of B", &gbc.a),
    ] {
        if language::census(lang, upto)?.is_zero() {
            return Err(Error::Precondition(format!(
                "{name} ({}) is empty up to length {upto}; the tagged construction needs all four parts inhabited",
                lang.name()
            )));
        }
    }

    let a = fa.forward.source_alphabet();
    // f(x) = 0.fa(x) for x in A, 1.fac(x) otherwise; g likewise for B.
    let tagged = |on: &Equipollence, off: &Equipollence| -> PartialMap {
        let decider = on.a.clone();
        let on_f = on.forward.clone();
        let off_f = off.forward.clone();
        let bound = TimeBound::new(
            on_f.bound().c.max(off_f.bound().c) + 2,
            on_f.bound().e.max(off_f.bound().e),
        );
        PartialMap::new(
            format!("tagged({},{})", on_f.name(), off_f.name()),
            a,
            a,
            bound,
            Arc::new(move |x: &Str| {
                let in_a = match decider.contains(x) {
                    Ok(v) => v,
                    Err(_) => return (None, 1),
                };
                let (tag, side) = if in_a { (0u8, &on_f) } else { (1u8, &off_f) };
                match side.apply(x) {
                    Ok(MapOutcome {
                        value: MapValue::Defined(v),
                        steps,
                    }) => match v.tagged(tag) {
                        Ok(out) => {
                            let s = steps + 1;
                            (Some(out), s)
                        }
                        Err(_) => (None, steps),
                    },
                    Ok(MapOutcome { steps, .. }) => (None, steps),
                    Err(_) => (None, 1),
                }
            }),
        )
    };
    let tagged_inv = |on: &Equipollence, off: &Equipollence| -> PartialMap {
        let on_b = on.backward.clone();
        let off_b = off.backward.clone();
        let bound = TimeBound::new(
            on_b.bound().c.max(off_b.bound().c) + 2,
            on_b.bound().e.max(off_b.bound().e),
        );
        PartialMap::new(
            format!("tagged_inv({},{})", on_b.name(), off_b.name()),
            a,
            a,
            bound,
            Arc::new(move |by: &Str| {
                let side = match by.first() {
                    Some(0) => &on_b,
                    Some(1) => &off_b,
                    _ => return (None, 1),
                };
                let rest = by.untagged(by.first().unwrap()).unwrap();
                match side.apply(&rest) {
                    Ok(out) => (out.value.as_defined().cloned(), out.steps + 1),
                    Err(_) => (None, 1),
                }
            }),
        )
    };

    let f = tagged(fa, fac);
    let f_inv = tagged_inv(fa, fac);
    let g = tagged(gb, gbc);
    let g_inv = tagged_inv(gb, gbc);

    // h = f^{-1} ∘ g maps B onto A; h^{-1} = g^{-1} ∘ f.
    let chain = |first: PartialMap, second: PartialMap, name: String| {
        let bound = TimeBound::compose(second.bound(), first.bound());
        PartialMap::new(
            name,
            a,
            a,
            bound,
            Arc::new(move |x: &Str| match first.apply(x) {
                Ok(MapOutcome {
                    value: MapValue::Defined(mid),
                    steps: s1,
                }) => match second.apply(&mid) {
                    Ok(out) => (out.value.as_defined().cloned(), s1 + out.steps),
                    Err(_) => (None, s1),
                },
                Ok(MapOutcome { steps, .. }) => (None, steps),
                Err(_) => (None, 1),
            }),
        )
    };
    Ok(Equipollence::new(
        chain(g, f_inv, "ghk_h".into()),
        chain(f, g_inv, "ghk_h_inv".into()),
        language::sigma_star(a),
        language::sigma_star(a),
    ))
}

/// Extends a witness L ~ full language to a total map: the witness on
/// members, the identity off them. The restriction to L stays a
/// bijection.
pub fn compress_extend(e: &Equipollence, decider: &Language) -> PartialMap {
    let a = e.forward.source_alphabet();
    let on = e.forward.clone();
    let decide = decider.clone();
    let bound = TimeBound::new(on.bound().c + 1, on.bound().e.max(1));
    PartialMap::new(
        format!("compress({})", on.name()),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| match decide.contains(x) {
            Ok(true) => match on.apply(x) {
                Ok(out) => (out.value.as_defined().cloned(), out.steps + 1),
                Err(_) => (None, 1),
            },
            Ok(false) => (Some(x.clone()), cost(x, x)),
            Err(_) => (None, 1),
        }),
    )
}

/// Enumeration of L by iterating a step map from a first element:
/// x0 is the member ranked first, and each step moves to the member
/// whose image is one rank higher.
#[derive(Clone, Debug)]
pub struct IterationEnumerator {
    pub x0: Str,
    pub step: PartialMap,
}

pub fn enum_by_iteration(e: &Equipollence) -> Result<IterationEnumerator> {
    let a = e.forward.source_alphabet();
    let eps = Str::empty(e.forward.target_alphabet());
    let x0 = e
        .backward
        .value(&eps)?
        .ok_or_else(|| Error::EmptyInRange(e.a.name().to_string()))?;
    let fwd = e.forward.clone();
    let bwd = e.backward.clone();
    let bound = TimeBound::new(
        fwd.bound().c + bwd.bound().c + 2,
        fwd.bound().e.max(bwd.bound().e).max(1),
    );
    let step = PartialMap::new(
        format!("iterate({})", fwd.name()),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| {
            let img = match fwd.value(x) {
                Ok(Some(v)) => v,
                _ => return (None, 1),
            };
            let next = strings::str_add(&img, 1).expect("adding one cannot underflow");
            match bwd.value(&next) {
                Ok(Some(out)) => {
                    let steps = cost(x, &out);
                    (Some(out), steps)
                }
                _ => (None, 1),
            }
        }),
    )
    .with_domain(e.a.clone());
    Ok(IterationEnumerator { x0, step })
}

/// The many-one reduction a witness yields: run the backward map under
/// its clock; fall back to the anchor on timeout, absence, or a failed
/// forward round trip.
pub fn reduction_from_witness(e: &Equipollence, a0: &Str) -> Result<PartialMap> {
    if e.a.contains(a0)? {
        return Err(Error::AnchorInLanguage(a0.to_string()));
    }
    let anchor = a0.clone();
    let bwd = e.backward.clone();
    let fwd = e.forward.clone();
    let inner = TimeBound::compose(fwd.bound(), bwd.bound());
    let bound = TimeBound::new(inner.c + anchor.len() as u64 + 2, inner.e);
    Ok(PartialMap::new(
        format!("reduction({})", bwd.name()),
        e.backward.source_alphabet(),
        e.backward.target_alphabet(),
        bound,
        Arc::new(move |x: &Str| {
            let fallback = |steps: u64| (Some(anchor.clone()), steps + 1);
            // The clock cuts a sub-run short, so a timed-out run only
            // costs its clock budget, never the overrun.
            let bwd_budget = bwd.bound().steps(x.len());
            match bwd.apply(x) {
                Ok(MapOutcome {
                    value: MapValue::Defined(y),
                    steps,
                }) => {
                    let fwd_budget = fwd.bound().steps(y.len());
                    match fwd.apply(&y) {
                        Ok(MapOutcome {
                            value: MapValue::Defined(ref img),
                            steps: s2,
                        }) if img == x => (Some(y), steps + s2),
                        Ok(MapOutcome { steps: s2, .. }) => {
                            fallback(steps + s2.min(fwd_budget))
                        }
                        Err(_) => fallback(steps),
                    }
                }
                // Timeout and plain absence both take the anchor.
                Ok(MapOutcome { steps, .. }) => fallback(steps.min(bwd_budget)),
                Err(_) => fallback(1),
            }
        }),
    ))
}

/// The cylinder witness: a total bijection of the full language onto
/// its own product carrying A onto A-times-everything, assembled from
/// witnesses for A and its complement.
pub fn cylinder_witness(
    ea: &Equipollence,
    eac: &Equipollence,
    upto: u64,
) -> Result<Equipollence> {
    require_verified(ea, upto)?;
    require_verified(eac, upto)?;
    if language::census(&eac.a, upto)?.is_zero() {
        return Err(Error::Precondition(format!(
            "complement ({}) is empty up to length {upto}",
            eac.a.name()
        )));
    }
    let a = ea.forward.source_alphabet();

    // One side: x in A maps through u = ea.forward to a string, splits
    // into a pair, and the first half returns through ea.backward so it
    // lands back in A. Symmetrically off A.
    let half = |e: &Equipollence, label: &str| -> (PartialMap, PartialMap) {
        let u = e.forward.clone();
        let u_inv = e.backward.clone();
        let c = u.bound().c.max(u_inv.bound().c);
        let e_exp = u.bound().e.max(u_inv.bound().e);
        let bound = TimeBound::new(4 * c + 4, 2 * e_exp.max(1));
        let fwd = {
            let u = u.clone();
            let u_inv = u_inv.clone();
            PartialMap::new(
                format!("cyl_fwd_{label}"),
                a,
                a,
                bound,
                Arc::new(move |x: &Str| {
                    let img = match u.value(x) {
                        Ok(Some(v)) => v,
                        _ => return (None, 1),
                    };
                    let (w1, w2) = unpair(&img);
                    let first = match u_inv.value(&w1) {
                        Ok(Some(v)) => v,
                        _ => return (None, 1),
                    };
                    match pair(&first, &w2) {
                        Ok(out) => {
                            let steps = cost(x, &out);
                            (Some(out), steps)
                        }
                        Err(_) => (None, 1),
                    }
                }),
            )
        };
        let bwd = PartialMap::new(
            format!("cyl_bwd_{label}"),
            a,
            a,
            bound,
            Arc::new(move |z: &Str| {
                let (first, w2) = unpair(z);
                let w1 = match u.value(&first) {
                    Ok(Some(v)) => v,
                    _ => return (None, 1),
                };
                match pair(&w1, &w2) {
                    Ok(mid) => match u_inv.value(&mid) {
                        Ok(Some(out)) => {
                            let steps = cost(z, &out);
                            (Some(out), steps)
                        }
                        _ => (None, 1),
                    },
                    Err(_) => (None, 1),
                }
            }),
        );
        (fwd, bwd)
    };

    let (fa, fa_inv) = half(ea, "inA");
    let (ga, ga_inv) = half(eac, "offA");
    let decider = ea.a.clone();
    let decider_b = ea.a.clone();
    let bound = TimeBound::new(
        fa.bound().c.max(ga.bound().c) + 2,
        fa.bound().e.max(ga.bound().e),
    );
    let forward = PartialMap::new(
        "cylinder_fwd",
        a,
        a,
        bound,
        Arc::new(move |x: &Str| {
            let side = match decider.contains(x) {
                Ok(true) => &fa,
                Ok(false) => &ga,
                Err(_) => return (None, 1),
            };
            match side.apply(x) {
                Ok(out) => (out.value.as_defined().cloned(), out.steps + 1),
                Err(_) => (None, 1),
            }
        }),
    );
    let backward = PartialMap::new(
        "cylinder_bwd",
        a,
        a,
        bound,
        Arc::new(move |z: &Str| {
            // The first pair component decides which half to invert.
            let (first, _) = unpair(z);
            let side = match decider_b.contains(&first) {
                Ok(true) => &fa_inv,
                Ok(false) => &ga_inv,
                Err(_) => return (None, 1),
            };
            match side.apply(z) {
                Ok(out) => (out.value.as_defined().cloned(), out.steps + 1),
                Err(_) => (None, 1),
            }
        }),
    );
    let star = language::sigma_star(a);
    let product = language::times(&star, &star)?;
    Ok(Equipollence::new(forward, backward, star, product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{complement, enumerate_upto, prefix, sigma_star};
    use crate::ranking::rank_witness;
    use crate::strings::{enumerate_upto_len, lit, Alphabet};
    use crate::witness::{flip_witness, identity_witness};

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn eps() -> Str {
        Str::empty(bin())
    }

    /// The complement-side companion of the flip witness: swaps the
    /// leading bit on 1-prefixed strings and fixes the empty string.
    fn flip_complement_witness() -> Equipollence {
        let a_side = complement(&prefix(lit("2:0")));
        let b_side = complement(&prefix(lit("2:1")));
        let swap = |from: u8, to: u8| -> PartialMap {
            PartialMap::new(
                format!("flipc({from}->{to})"),
                bin(),
                bin(),
                TimeBound::new(2, 1),
                Arc::new(move |x: &Str| {
                    if x.is_empty() {
                        return (Some(x.clone()), 1);
                    }
                    match x.untagged(from) {
                        Some(rest) => {
                            let out = rest.tagged(to).unwrap();
                            let steps = cost(x, &out);
                            (Some(out), steps)
                        }
                        None => (None, 1),
                    }
                }),
            )
        };
        Equipollence::new(swap(1, 0), swap(0, 1), a_side, b_side)
    }

    #[test]
    fn iso_swaps_leading_bits() {
        let e = flip_witness(bin());
        let ec = flip_complement_witness();
        let iso = iso_from_complements(&e, &ec, &prefix(lit("2:0")), 6).unwrap();
        assert_eq!(iso.forward.value(&lit("2:01")).unwrap().unwrap(), lit("2:11"));
        assert_eq!(iso.forward.value(&eps()).unwrap().unwrap(), eps());
        let report = verify_equipollence(&iso, 6).unwrap();
        assert!(report.clean());
        // Membership transport: the 0-prefixed strings land exactly on
        // the 1-prefixed ones.
        let a_lang = prefix(lit("2:0"));
        let b_lang = prefix(lit("2:1"));
        for x in enumerate_upto_len(bin(), 6) {
            let y = iso.forward.value(&x).unwrap().unwrap();
            assert_eq!(
                a_lang.contains(&x).unwrap(),
                b_lang.contains(&y).unwrap()
            );
        }
    }

    #[test]
    fn iso_identity_composition() {
        let zero = prefix(lit("2:0"));
        let e = identity_witness(&zero);
        let ec = identity_witness(&complement(&zero));
        let iso = iso_from_complements(&e, &ec, &zero, 6).unwrap();
        for x in enumerate_upto_len(bin(), 6) {
            assert_eq!(iso.forward.value(&x).unwrap().unwrap(), x);
        }
    }

    #[test]
    fn iso_disambiguation_picks_the_round_tripper() {
        // Backward evaluators deliberately over-extended: both answer
        // on every nonempty string, so the round-trip check must decide.
        let sloppy = |from: u8, to: u8| -> PartialMap {
            PartialMap::new(
                format!("sloppy({from}->{to})"),
                bin(),
                bin(),
                TimeBound::new(2, 1),
                Arc::new(move |x: &Str| {
                    if x.is_empty() {
                        return (Some(x.clone()), 1);
                    }
                    let rest = x.untagged(x.first().unwrap()).unwrap();
                    let out = rest.tagged(to).unwrap();
                    let _ = from;
                    let steps = cost(x, &out);
                    (Some(out), steps)
                }),
            )
        };
        let e = {
            let base = flip_witness(bin());
            Equipollence::new(base.forward.clone(), sloppy(1, 0), base.a.clone(), base.b.clone())
        };
        let ec = {
            let base = flip_complement_witness();
            Equipollence::new(base.forward.clone(), sloppy(0, 1), base.a.clone(), base.b.clone())
        };
        let iso = iso_from_complements(&e, &ec, &prefix(lit("2:0")), 6).unwrap();
        let report = verify_equipollence(&iso, 6).unwrap();
        assert!(report.clean());
        // At "2:11" both inverses answered; exactly one candidate
        // survives phi(candidate) = input.
        let y = iso.backward.value(&lit("2:11")).unwrap().unwrap();
        assert_eq!(iso.forward.value(&y).unwrap().unwrap(), lit("2:11"));
    }

    #[test]
    fn ghk_iso_preserves_membership() {
        let zero = prefix(lit("2:0"));
        let zero_c = complement(&zero);
        let fa = rank_witness(&zero, 4).unwrap();
        let fac = rank_witness(&zero_c, 4).unwrap();
        let h = ghk_iso(&fa, &fac, &fa, &fac, 5).unwrap();
        let report = verify_equipollence(&h, 5).unwrap();
        assert!(report.clean());
        for x in enumerate_upto_len(bin(), 5) {
            let y = h.forward.value(&x).unwrap().unwrap();
            assert_eq!(zero.contains(&x).unwrap(), zero.contains(&y).unwrap());
        }

        // Different endpoints: B = 1-prefixed onto A = 0-prefixed.
        let one = prefix(lit("2:1"));
        let one_c = complement(&one);
        let gb = rank_witness(&one, 4).unwrap();
        let gbc = rank_witness(&one_c, 4).unwrap();
        let h = ghk_iso(&fa, &fac, &gb, &gbc, 5).unwrap();
        assert!(verify_equipollence(&h, 5).unwrap().clean());
        let img = h.forward.value(&lit("2:10")).unwrap().unwrap();
        assert!(zero.contains(&img).unwrap());
    }

    #[test]
    fn ghk_rejects_empty_complement() {
        let star = sigma_star(bin());
        let e = identity_witness(&star);
        let ec = rank_witness(&language::empty(bin()), 4);
        assert!(ec.is_err());
        // Even with an identity-shaped stand-in, the census guard fires.
        let fake_c = identity_witness(&language::empty(bin()));
        let out = ghk_iso(&e, &fake_c, &e, &fake_c, 5);
        assert!(matches!(out, Err(Error::Precondition(_))));
    }

    #[test]
    fn compress_extend_examples() {
        let zero = prefix(lit("2:0"));
        let e = rank_witness(&zero, 4).unwrap();
        let f = compress_extend(&e, &zero);
        // Off-language inputs are fixed.
        assert_eq!(f.value(&lit("2:1")).unwrap().unwrap(), lit("2:1"));
        // On members the restriction is the witness, a bijection onto
        // everything: check pairwise distinct images exhaustively.
        let members = enumerate_upto(&zero, 7).unwrap();
        let mut images: Vec<Str> = members
            .iter()
            .map(|m| f.value(m).unwrap().unwrap())
            .collect();
        images.sort_by(|x, y| x.lex_cmp(y));
        images.dedup();
        assert_eq!(images.len(), members.len());

        // On the full language the extension is just the witness.
        let star = sigma_star(bin());
        let id = identity_witness(&star);
        let g = compress_extend(&id, &star);
        for x in enumerate_upto_len(bin(), 5) {
            assert_eq!(g.value(&x).unwrap().unwrap(), x);
        }
    }

    #[test]
    fn iteration_enumerates_without_repeats() {
        let zero = prefix(lit("2:0"));
        let e = rank_witness(&zero, 4).unwrap();
        let it = enum_by_iteration(&e).unwrap();
        assert_eq!(it.x0, lit("2:0"));
        assert_eq!(it.step.value(&lit("2:0")).unwrap().unwrap(), lit("2:00"));

        let expected = enumerate_upto(&zero, 3).unwrap();
        let mut got = vec![it.x0.clone()];
        let mut cur = it.x0.clone();
        for _ in 1..expected.len() {
            cur = it.step.value(&cur).unwrap().unwrap();
            got.push(cur.clone());
        }
        assert_eq!(got, expected);
    }

    #[test]
    fn reduction_law_and_fallbacks() {
        let e = flip_witness(bin());
        let r = reduction_from_witness(&e, &eps()).unwrap();
        // Defined path: backward answers and round-trips.
        assert_eq!(r.value(&lit("2:10")).unwrap().unwrap(), lit("2:00"));
        // Backward undefined: anchor.
        assert_eq!(r.value(&lit("2:01")).unwrap().unwrap(), eps());
        assert_eq!(r.value(&eps()).unwrap().unwrap(), eps());
        // The reduction law x in B iff r(x) in A, exhaustively.
        let a_lang = prefix(lit("2:0"));
        let b_lang = prefix(lit("2:1"));
        for x in enumerate_upto_len(bin(), 7) {
            let rx = r.value(&x).unwrap().unwrap();
            assert_eq!(
                b_lang.contains(&x).unwrap(),
                a_lang.contains(&rx).unwrap(),
                "law fails at {x}"
            );
        }
        // Anchor inside A is rejected.
        assert!(matches!(
            reduction_from_witness(&e, &lit("2:00")),
            Err(Error::AnchorInLanguage(_))
        ));
    }

    #[test]
    fn cylinder_carries_a_onto_a_times_everything() {
        let zero = prefix(lit("2:0"));
        let zero_c = complement(&zero);
        let ea = rank_witness(&zero, 4).unwrap();
        let eac = rank_witness(&zero_c, 4).unwrap();
        let h = cylinder_witness(&ea, &eac, 5).unwrap();
        assert!(verify_equipollence(&h, 5).unwrap().clean());
        for x in enumerate_upto_len(bin(), 5) {
            let z = h.forward.value(&x).unwrap().unwrap();
            let (first, _) = unpair(&z);
            assert_eq!(
                zero.contains(&x).unwrap(),
                zero.contains(&first).unwrap(),
                "membership transport fails at {x}"
            );
        }
        // Empty complement is refused.
        let star = sigma_star(bin());
        let id = identity_witness(&star);
        let bad = identity_witness(&language::empty(bin()));
        assert!(matches!(
            cylinder_witness(&id, &bad, 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn unverified_inputs_are_rejected() {
        let broken = crate::witness::broken_witness(bin());
        let ec = flip_complement_witness();
        assert!(matches!(
            iso_from_complements(&broken, &ec, &prefix(lit("2:0")), 4),
            Err(Error::Unverified(..))
        ));
    }
}

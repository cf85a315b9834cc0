//! Bounded-horizon simulator of the stage construction that squeezes a
//! language strictly between two p-cardinalities.
//!
//! Every undecidable case predicate of the construction is replaced by
//! exhaustive search up to a horizon: a search that produces a witness
//! acts exactly as the proof prescribes, and a stage whose searches
//! all come up empty is recorded as inconclusive and changes nothing.
//! The simulator demonstrates the combinatorics; it proves nothing
//! beyond the lengths it has walked.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::language::{self, census, Language};
use crate::strings::{cantor_unpair, Str};
use crate::witness::{MapValue, PartialMap};
use crate::{Error, Result};

/// One catalog row: a named (alpha, beta) machine pair.
#[derive(Clone)]
pub struct CatalogRow {
    pub name: String,
    pub alpha: PartialMap,
    pub beta: PartialMap,
}

/// The finite stand-in for an enumeration of all machine pairs. Stage
/// index k unpairs into (alpha-row, beta-row), so a run crosses rows
/// rather than walking them one by one.
#[derive(Clone)]
pub struct MachineCatalog {
    pub rows: Vec<CatalogRow>,
}

impl MachineCatalog {
    pub fn new(rows: Vec<CatalogRow>) -> Self {
        MachineCatalog { rows }
    }

    /// The (alpha, beta) row indices for requirement index k.
    pub fn pair_indices(k: u64) -> (u64, u64) {
        let (a, b) = cantor_unpair(&BigUint::from(k));
        (
            a.to_u64().expect("index fits"),
            b.to_u64().expect("index fits"),
        )
    }

    fn machines(&self, k: u64) -> Option<(u64, u64, &PartialMap, &PartialMap)> {
        let (ai, bi) = Self::pair_indices(k);
        let alpha = self.rows.get(ai as usize)?;
        let beta = self.rows.get(bi as usize)?;
        Some((ai, bi, &alpha.alpha, &beta.beta))
    }

    /// Requirement indices a run of `stages` stages will process.
    pub fn processed_pairs(&self, stages: u64) -> Vec<u64> {
        (0..)
            .take_while(|k| 3 * k + 2 <= stages)
            .filter(|&k| self.machines(k).is_some())
            .collect()
    }
}

/// What one stage did.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum StageVerdict {
    Acted,
    NoAction,
    Inconclusive,
}

/// Per-stage trace record. `case` is "seed", "1", or "2"; `subcase`
/// carries the fired subcase number when one exists; `detail` the
/// human-readable reason.
#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub stage: u64,
    pub kind: String,
    pub pair: Option<(u64, u64)>,
    pub case: String,
    pub subcase: String,
    pub detail: String,
    pub added: Vec<String>,
    pub excluded: Vec<String>,
    pub verdict: StageVerdict,
}

/// The construction state: strings added beyond the lower language and
/// strings excluded forever, plus the per-stage log.
#[derive(Clone, Debug, Default)]
pub struct DiagState {
    pub stage: u64,
    added: Vec<Str>,
    excluded: Vec<Str>,
    pub log: Vec<StageRecord>,
}

impl DiagState {
    pub fn new() -> Self {
        DiagState::default()
    }

    pub fn added(&self) -> &[Str] {
        &self.added
    }

    pub fn excluded(&self) -> &[Str] {
        &self.excluded
    }

    fn in_added(&self, x: &Str) -> bool {
        self.added.iter().any(|c| c == x)
    }

    fn in_excluded(&self, x: &Str) -> bool {
        self.excluded.iter().any(|e| e == x)
    }

    /// C-membership: the lower language plus everything added.
    pub fn c_contains(&self, a: &Language, x: &Str) -> Result<bool> {
        Ok(self.in_added(x) || a.contains(x)?)
    }

    /// The hard state invariants: additions and exclusions live inside
    /// the upper language, outside each other, and additions outside
    /// the exclusions were never in the lower language's complement...
    pub fn check_invariants(&self, a: &Language, b: &Language) -> Result<()> {
        for x in &self.added {
            if !b.contains(x)? {
                return Err(Error::StateInvariant(format!(
                    "added {x} is outside the upper language"
                )));
            }
            if self.in_excluded(x) {
                return Err(Error::StateInvariant(format!(
                    "{x} is both added and excluded"
                )));
            }
        }
        for x in &self.excluded {
            if !b.contains(x)? {
                return Err(Error::StateInvariant(format!(
                    "excluded {x} is outside the upper language"
                )));
            }
            if a.contains(x)? {
                return Err(Error::StateInvariant(format!(
                    "excluded {x} is inside the lower language"
                )));
            }
        }
        Ok(())
    }
}

/// Clocked application collapsed to an option; clock expiry is bottom.
fn mval(m: &PartialMap, x: &Str) -> Option<Str> {
    match m.apply(x) {
        Ok(out) => match out.value {
            MapValue::Defined(y) => Some(y),
            MapValue::Undefined | MapValue::ClockExpired => None,
        },
        Err(_) => None,
    }
}

fn member(l: &Language, x: &Str) -> bool {
    l.contains(x).unwrap_or(false)
}

/// Checks whether alpha restricted to `domain_members` is an
/// equipollence onto a subset of `codomain` with inverse beta,
/// as far as the listed members witness. Returns the reason it is not,
/// if any.
fn equipollence_defect(
    domain_members: &[Str],
    alpha: &PartialMap,
    beta: &PartialMap,
    codomain: Option<&Language>,
) -> Option<String> {
    let mut seen: BTreeMap<String, Str> = BTreeMap::new();
    for c in domain_members {
        let y = match mval(alpha, c) {
            Some(y) => y,
            None => return Some(format!("alpha undefined at {c}")),
        };
        if let Some(co) = codomain {
            if !member(co, &y) {
                return Some(format!("alpha escapes the codomain at {c}"));
            }
        }
        if let Some(prev) = seen.get(&y.to_string()) {
            if prev != c {
                return Some(format!("alpha collides at {prev} and {c}"));
            }
        }
        seen.insert(y.to_string(), c.clone());
        if mval(beta, &y).as_ref() != Some(c) {
            return Some(format!("beta fails to invert alpha at {c}"));
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn stage_record(
    stage: u64,
    kind: &str,
    pair: Option<(u64, u64)>,
    case: &str,
    subcase: &str,
    detail: &str,
    added: &[Str],
    excluded: &[Str],
    verdict: StageVerdict,
) -> StageRecord {
    StageRecord {
        stage,
        kind: kind.to_string(),
        pair,
        case: case.to_string(),
        subcase: subcase.to_string(),
        detail: detail.to_string(),
        added: added.iter().map(|s| s.to_string()).collect(),
        excluded: excluded.iter().map(|s| s.to_string()).collect(),
        verdict,
    }
}

/// Runs one stage of the construction, consuming the stage-s state and
/// producing the stage-(s+1) state. All searches are horizon-bounded.
pub fn run_stage(
    state: DiagState,
    a: &Language,
    b: &Language,
    cat: &MachineCatalog,
    horizon: u64,
) -> Result<DiagState> {
    state.check_invariants(a, b)?;
    let mut state = state;
    let s = state.stage;
    let next = s + 1;
    let b_upto = language::enumerate_upto(b, horizon)?;

    match s % 3 {
        0 => {
            // Growth stage: add the least upper-language string not yet
            // placed.
            let pick = b_upto
                .iter()
                .find(|y| !state.in_excluded(y) && !state.c_contains(a, y).unwrap_or(true));
            match pick {
                Some(y) => {
                    let y = y.clone();
                    state.added.push(y.clone());
                    state.log.push(stage_record(
                        next,
                        "seed",
                        None,
                        "seed",
                        "",
                        "",
                        &[y],
                        &[],
                        StageVerdict::Acted,
                    ));
                }
                None => {
                    state.log.push(stage_record(
                        next,
                        "seed",
                        None,
                        "seed",
                        "",
                        "exhausted",
                        &[],
                        &[],
                        StageVerdict::Inconclusive,
                    ));
                }
            }
        }
        1 => {
            let k = (s - 1) / 3;
            let Some((ai, bi, alpha, beta)) = cat.machines(k) else {
                state.log.push(stage_record(
                    next,
                    "r1",
                    None,
                    "catalog_exhausted",
                    "",
                    "",
                    &[],
                    &[],
                    StageVerdict::NoAction,
                ));
                state.stage = next;
                return Ok(state);
            };
            let pair = Some((ai, bi));
            let a_members = language::enumerate_upto(a, horizon)?;
            // Case 1: alpha restricted to the lower language is not an
            // equipollence onto a subset of the upper one with inverse
            // beta; nothing to do, the defect itself secures R1.
            if let Some(reason) =
                equipollence_defect(&a_members, alpha, beta, Some(b))
            {
                state.log.push(stage_record(
                    next,
                    "r1",
                    pair,
                    "1",
                    "",
                    &reason,
                    &[],
                    &[],
                    StageVerdict::NoAction,
                ));
                state.stage = next;
                return Ok(state);
            }
            // Case 2: search the upper language minus the exclusions.
            let y_set: Vec<&Str> = b_upto.iter().filter(|y| !state.in_excluded(y)).collect();
            // 2.1: beta undefined somewhere on Y.
            if let Some(y) = y_set.iter().find(|y| mval(beta, y).is_none()) {
                let y = (*y).clone();
                if !state.in_added(&y) {
                    state.added.push(y.clone());
                }
                state.log.push(stage_record(
                    next,
                    "r1",
                    pair,
                    "2",
                    "2.1",
                    "beta undefined",
                    &[y],
                    &[],
                    StageVerdict::Acted,
                ));
                state.stage = next;
                return Ok(state);
            }
            // 2.2: beta collides on Y.
            let mut seen: BTreeMap<String, Str> = BTreeMap::new();
            let mut collision = None;
            for y in &y_set {
                let img = mval(beta, y).expect("2.1 checked definedness").to_string();
                if let Some(prev) = seen.get(&img) {
                    collision = Some((prev.clone(), (*y).clone()));
                    break;
                }
                seen.insert(img, (*y).clone());
            }
            if let Some((y1, y2)) = collision {
                for y in [&y1, &y2] {
                    if !state.in_added(y) {
                        state.added.push(y.clone());
                    }
                }
                state.log.push(stage_record(
                    next,
                    "r1",
                    pair,
                    "2",
                    "2.2",
                    "beta collision",
                    &[y1, y2],
                    &[],
                    StageVerdict::Acted,
                ));
                state.stage = next;
                return Ok(state);
            }
            // 2.3: beta leaves the lower language somewhere on Y.
            if let Some(y) = y_set
                .iter()
                .find(|y| !member(a, &mval(beta, y).expect("defined")))
            {
                let y = (*y).clone();
                if !state.in_added(&y) {
                    state.added.push(y.clone());
                }
                state.log.push(stage_record(
                    next,
                    "r1",
                    pair,
                    "2",
                    "2.3",
                    "beta leaves the lower language",
                    &[y],
                    &[],
                    StageVerdict::Acted,
                ));
                state.stage = next;
                return Ok(state);
            }
            // 2.4: alpha fails to invert beta somewhere on Y.
            if let Some(y) = y_set.iter().find(|y| {
                let z = mval(beta, y).expect("defined");
                mval(alpha, &z).as_ref() != Some(*y)
            }) {
                let y = (*y).clone();
                if !state.in_added(&y) {
                    state.added.push(y.clone());
                }
                state.log.push(stage_record(
                    next,
                    "r1",
                    pair,
                    "2",
                    "2.4",
                    "alpha fails to invert beta",
                    &[y],
                    &[],
                    StageVerdict::Acted,
                ));
                state.stage = next;
                return Ok(state);
            }
            state.log.push(stage_record(
                next,
                "r1",
                pair,
                "2",
                "",
                "no witness within horizon",
                &[],
                &[],
                StageVerdict::Inconclusive,
            ));
        }
        _ => {
            let k = (s - 2) / 3;
            let Some((ai, bi, alpha, beta)) = cat.machines(k) else {
                state.log.push(stage_record(
                    next,
                    "r2",
                    None,
                    "catalog_exhausted",
                    "",
                    "",
                    &[],
                    &[],
                    StageVerdict::NoAction,
                ));
                state.stage = next;
                return Ok(state);
            };
            let pair = Some((ai, bi));
            let mut c_members = language::enumerate_upto(a, horizon)?;
            for x in &state.added {
                if !c_members.contains(x) {
                    c_members.push(x.clone());
                }
            }
            c_members.sort_by(|x, y| x.lex_cmp(y));

            // Subcase 1.1: alpha leaves the upper language on C.
            if let Some(c) = c_members.iter().find(|c| {
                mval(alpha, c).is_some_and(|w| !member(b, &w))
            }) {
                state.log.push(stage_record(
                    next,
                    "r2",
                    pair,
                    "1",
                    "1.1",
                    &format!("alpha({c}) escapes the upper language"),
                    &[],
                    &[],
                    StageVerdict::NoAction,
                ));
                state.stage = next;
                return Ok(state);
            }
            // Subcase 1.2: alpha on C with inverse beta is defective.
            if let Some(reason) = equipollence_defect(&c_members, alpha, beta, None) {
                state.log.push(stage_record(
                    next,
                    "r2",
                    pair,
                    "1",
                    "1.2",
                    &reason,
                    &[],
                    &[],
                    StageVerdict::NoAction,
                ));
                state.stage = next;
                return Ok(state);
            }
            let image: Vec<Str> = c_members
                .iter()
                .map(|c| mval(alpha, c).expect("1.2 checked definedness"))
                .collect();
            let x_set: Vec<&Str> = b_upto
                .iter()
                .filter(|x| !state.in_excluded(x) && !image.contains(x))
                .collect();
            if x_set.is_empty() {
                state.log.push(stage_record(
                    next,
                    "r2",
                    pair,
                    "2",
                    "",
                    "candidate pool empty at horizon",
                    &[],
                    &[],
                    StageVerdict::Inconclusive,
                ));
                state.stage = next;
                return Ok(state);
            }
            // Subcase 1.3: beta undefined somewhere on X.
            if let Some(x) = x_set.iter().find(|x| mval(beta, x).is_none()) {
                state.log.push(stage_record(
                    next,
                    "r2",
                    pair,
                    "1",
                    "1.3",
                    &format!("beta undefined at {x}"),
                    &[],
                    &[],
                    StageVerdict::NoAction,
                ));
                state.stage = next;
                return Ok(state);
            }
            // Case 2: exclude the least x in X, itself outside C, that
            // beta maps outside C. Restricting the pick to non-C
            // strings keeps the exclusions disjoint from C.
            let pick = x_set.iter().find(|x| {
                !state.c_contains(a, x).unwrap_or(true)
                    && !state
                        .c_contains(a, &mval(beta, x).expect("1.3 checked definedness"))
                        .unwrap_or(true)
            });
            match pick {
                Some(x) => {
                    let x = (*x).clone();
                    state.excluded.push(x.clone());
                    state.log.push(stage_record(
                        next,
                        "r2",
                        pair,
                        "2",
                        "",
                        "excluded a beta-escapee",
                        &[],
                        &[x],
                        StageVerdict::Acted,
                    ));
                }
                None => {
                    // Subcase 1.4: everything beta reaches from X stays
                    // inside C at this horizon.
                    state.log.push(stage_record(
                        next,
                        "r2",
                        pair,
                        "1",
                        "1.4",
                        "beta maps the pool back into C",
                        &[],
                        &[],
                        StageVerdict::NoAction,
                    ));
                }
            }
        }
    }
    state.stage = next;
    Ok(state)
}

/// Requirement clause labels, in the order they are scanned.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Clause {
    A,
    B,
    C,
    D,
    E,
}

/// Horizon-bounded requirement status.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum ReqStatus {
    /// Some clause has a concrete witness within the horizon.
    Satisfied(Clause, String),
    /// No witness, and every searched space was exhausted.
    Unsatisfied,
    /// No witness, but some search was cut off by the horizon.
    Inconclusive,
}

impl ReqStatus {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ReqStatus::Satisfied(..))
    }
}

/// R1/R2 status for one requirement index.
#[derive(Clone, Debug, Serialize)]
pub struct PairRequirements {
    pub k: u64,
    pub alpha_row: u64,
    pub beta_row: u64,
    pub r1: ReqStatus,
    pub r2: ReqStatus,
}

struct ClauseScan {
    witness: Option<(Clause, String)>,
    truncated: bool,
}

impl ClauseScan {
    fn new() -> Self {
        ClauseScan {
            witness: None,
            truncated: false,
        }
    }

    fn found(&mut self, clause: Clause, detail: String) {
        if self.witness.is_none() {
            self.witness = Some((clause, detail));
        }
    }

    fn status(self) -> ReqStatus {
        match self.witness {
            Some((c, w)) => ReqStatus::Satisfied(c, w),
            None if self.truncated => ReqStatus::Inconclusive,
            None => ReqStatus::Unsatisfied,
        }
    }
}

/// Whether enumerating `l` up to the horizon plausibly saw everything:
/// the census is probed a little past the horizon. A heuristic, used
/// only to tell an unsatisfied requirement from an inconclusive one.
fn space_exhausted(l: &Language, horizon: u64) -> bool {
    match (census(l, horizon), census(l, horizon + 8)) {
        (Ok(now), Ok(later)) => now == later,
        _ => false,
    }
}

fn undefined_or_collision(
    members: &[Str],
    m: &PartialMap,
) -> Option<String> {
    let mut seen: BTreeMap<String, Str> = BTreeMap::new();
    for x in members {
        match mval(m, x) {
            None => return Some(format!("undefined at {x}")),
            Some(y) => {
                if let Some(prev) = seen.get(&y.to_string()) {
                    if prev != x {
                        return Some(format!("collision at {prev} and {x}"));
                    }
                }
                seen.insert(y.to_string(), x.clone());
            }
        }
    }
    None
}

/// Evaluates R1 and R2 for every requirement index the run has
/// processed, by exhaustive search up to the horizon.
pub fn check_requirements(
    state: &DiagState,
    a: &Language,
    b: &Language,
    cat: &MachineCatalog,
    horizon: u64,
) -> Result<Vec<PairRequirements>> {
    let a_members = language::enumerate_upto(a, horizon)?;
    let b_members = language::enumerate_upto(b, horizon)?;
    let mut c_members = a_members.clone();
    for x in state.added() {
        if !c_members.contains(x) {
            c_members.push(x.clone());
        }
    }
    c_members.sort_by(|x, y| x.lex_cmp(y));
    let a_done = space_exhausted(a, horizon);
    let b_done = space_exhausted(b, horizon);
    // C is the lower language plus a finite explicit list.
    let c_done = a_done;

    let mut out = Vec::new();
    for k in cat.processed_pairs(state.stage) {
        let (ai, bi, alpha, beta) = cat.machines(k).expect("processed implies present");

        let mut r1 = ClauseScan::new();
        if let Some(w) = undefined_or_collision(&a_members, alpha) {
            r1.found(Clause::A, w);
        }
        r1.truncated |= !a_done;
        if let Some(w) = undefined_or_collision(&c_members, beta) {
            r1.found(Clause::B, w);
        }
        r1.truncated |= !c_done;
        if let Some(x) = a_members
            .iter()
            .find(|x| mval(alpha, x).is_some_and(|y| !member(b, &y)))
        {
            r1.found(Clause::C, format!("alpha({x}) escapes the upper language"));
        }
        if let Some(c) = c_members
            .iter()
            .find(|c| mval(beta, c).is_some_and(|z| !member(a, &z)))
        {
            r1.found(Clause::D, format!("beta({c}) leaves the lower language"));
        }
        let e1 = a_members.iter().find(|x| {
            mval(alpha, x)
                .is_some_and(|y| mval(beta, &y).as_ref() != Some(*x))
        });
        let e2 = c_members.iter().find(|c| {
            mval(beta, c)
                .is_some_and(|z| mval(alpha, &z).as_ref() != Some(*c))
        });
        if let Some(x) = e1 {
            r1.found(Clause::E, format!("round trip fails at {x}"));
        } else if let Some(c) = e2 {
            r1.found(Clause::E, format!("round trip fails at {c}"));
        }

        let mut r2 = ClauseScan::new();
        if let Some(w) = undefined_or_collision(&c_members, alpha) {
            r2.found(Clause::A, w);
        }
        r2.truncated |= !c_done;
        if let Some(w) = undefined_or_collision(&b_members, beta) {
            r2.found(Clause::B, w);
        }
        r2.truncated |= !b_done;
        if let Some(c) = c_members
            .iter()
            .find(|c| mval(alpha, c).is_some_and(|w| !member(b, &w)))
        {
            r2.found(Clause::C, format!("alpha({c}) escapes the upper language"));
        }
        if let Some(x) = b_members
            .iter()
            .find(|x| mval(beta, x).is_some_and(|z| state.in_excluded(&z)))
        {
            r2.found(Clause::D, format!("beta({x}) hits the excluded set"));
        }
        let e1 = c_members.iter().find(|c| {
            mval(alpha, c)
                .is_some_and(|w| mval(beta, &w).as_ref() != Some(*c))
        });
        let e2 = b_members.iter().find(|x| {
            mval(beta, x)
                .is_some_and(|z| mval(alpha, &z).as_ref() != Some(*x))
        });
        if let Some(c) = e1 {
            r2.found(Clause::E, format!("round trip fails at {c}"));
        } else if let Some(x) = e2 {
            r2.found(Clause::E, format!("round trip fails at {x}"));
        }

        out.push(PairRequirements {
            k,
            alpha_row: ai,
            beta_row: bi,
            r1: r1.status(),
            r2: r2.status(),
        });
    }
    Ok(out)
}

/// Runs the whole construction for the given number of stages and
/// packages the result as a language: the lower language plus the
/// added strings.
pub fn run_construction(
    a: &Language,
    b: &Language,
    cat: &MachineCatalog,
    stages: u64,
    horizon: u64,
) -> Result<(DiagState, Language)> {
    let mut state = DiagState::new();
    for _ in 0..stages {
        state = run_stage(state, a, b, cat, horizon)?;
    }
    let added = Arc::new(state.added.clone());
    let lower = a.clone();
    let c = Language::new(
        format!("diag_C({},{},{stages})", a.name(), b.name()),
        a.alphabet(),
        Arc::new(move |x, fuel| {
            if added.iter().any(|c| c == x) {
                return language::MembershipOutcome::decided(true, x.len() as u64 + 1);
            }
            (|| {
                let v = lower.verdict(x).ok()?;
                Some(v)
            })()
            .unwrap_or(language::MembershipOutcome::decided(false, fuel.min(1)))
        }),
    );
    Ok((state, c))
}

/// The six-row machine catalog the demonstrations ship with.
pub fn demo_catalog(a: crate::strings::Alphabet) -> MachineCatalog {
    use crate::maps;
    let zero = Str::new(a, vec![0]).expect("symbol 0 in range");
    let one = Str::new(a, vec![1]).expect("symbol 1 in range");
    let row = |name: &str, m: maps::InvertibleMap| CatalogRow {
        name: name.to_string(),
        alpha: m.map,
        beta: m.inverse,
    };
    MachineCatalog::new(vec![
        row("identity", maps::identity(a)),
        row("prepend0", maps::prepend(zero.clone())),
        row("successor", maps::successor(a)),
        row("append1", maps::append(one.clone())),
        row("prepend1", maps::prepend(one)),
        row("empty", maps::empty_map(a)),
    ])
}

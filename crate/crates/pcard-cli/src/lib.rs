//! Command-line front end: a small expression DSL plus one subcommand
//! per toolkit operation, emitting machine-readable JSON reports.
//!
//! Every run is deterministic: identical arguments produce
//! byte-identical reports, and there are no timestamps.

pub mod expr;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use pcard::cantor_bernstein::{cb_witness, classify, InjectionPair, Side};
use pcard::choice::{
    audit_pairwise_disjoint, check_honestly_nonempty, choice_bruteforce, refine_uniformize,
    transversal_member, Collection, MultiMap,
};
use pcard::diag::{
    check_requirements, demo_catalog, run_construction, CatalogRow, MachineCatalog, ReqStatus,
};
use pcard::findiff::{findiff_witness, shift_function, FiniteDiff};
use pcard::iso_tools::{
    cylinder_witness, enum_by_iteration, iso_from_complements, reduction_from_witness,
};
use pcard::language::{self, CensusTable, Language};
use pcard::poly::Polynomial;
use pcard::ranking::{census_poly_related, exp_density_check, rank_inverse, strong_rank};
use pcard::strings::{self, unpair, Nat, Str};
use pcard::witness::{audit_map, verify_equipollence, Equipollence};

use expr::{eval, parse, static_kind, Value};

#[derive(Parser, Debug)]
#[command(
    name = "pcard",
    about = "Checkable p-cardinality: witnesses, verification, and counterexample demos",
    version
)]
struct Cli {
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Accepted for interface stability; every run is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the membership fuel of top-level language arguments.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse an expression and describe its value.
    Eval {
        #[arg(long)]
        expr: String,
    },
    /// List the documented DSL constructions.
    Gallery,
    /// Census table of a language up to a length.
    Census {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        upto: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Pointwise polynomially-related census comparison.
    DensityCompare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Polynomial coefficients for the A-side bound, constant first.
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// Polynomial coefficients for the B-side bound, constant first.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long)]
        upto: u64,
        /// Also probe the exponential-density constant at this exponent.
        #[arg(long)]
        density_exp: Option<f64>,
    },
    /// Exhaustively verify an equipollence claim.
    CheckEqui {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        upto: u64,
    },
    /// Audit a map for injectivity, honesty, and length growth.
    AuditMap {
        #[arg(long)]
        map: String,
        #[arg(long)]
        upto: u64,
    },
    /// Cantor-Bernstein: build and verify a witness from two injections.
    Cb {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 6)]
        verify_upto: u64,
        /// Include the phi table and chain decomposition.
        #[arg(long)]
        emit_chains: bool,
    },
    /// Strong rank of a string in a language.
    Rank {
        #[arg(long)]
        lang: String,
        #[arg(long = "str")]
        text: String,
    },
    /// The member of a language with the given strong rank.
    UnrankIn {
        #[arg(long)]
        lang: String,
        #[arg(long)]
        rank: u64,
        #[arg(long, default_value_t = 10)]
        nmax: u64,
    },
    /// Finite-difference shift function, and the offset-matching
    /// witness when a second edit is given.
    Findiff {
        #[arg(long)]
        base: String,
        #[arg(long, value_delimiter = ',')]
        add: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        remove: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        other_add: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        other_remove: Vec<String>,
        #[arg(long, default_value_t = 7)]
        verify_upto: u64,
    },
    /// Total isomorphism from witnesses on a language and its
    /// complement.
    Iso {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        complement_witness: String,
        #[arg(long)]
        decider: String,
        #[arg(long, default_value_t = 6)]
        upto: u64,
    },
    /// Many-one reduction extracted from a witness; checks the law.
    Reduce {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        a0: String,
        #[arg(long, default_value_t = 7)]
        upto: u64,
    },
    /// Enumerate a language's members, or iterate a witness's step map.
    Enumerate {
        #[arg(long)]
        lang: Option<String>,
        #[arg(long)]
        upto: Option<u64>,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long)]
        count: Option<u64>,
    },
    /// Cylinder witness: language ~ language x everything.
    Cylinder {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        complement_witness: String,
        #[arg(long, default_value_t = 5)]
        upto: u64,
    },
    /// Brute-force choice function value at one index.
    Choice {
        #[arg(long)]
        collection: String,
        #[arg(long)]
        x: String,
        /// Also audit honesty and disjointness up to this index length.
        #[arg(long)]
        audit_upto: Option<u64>,
    },
    /// Transversal membership of one candidate string.
    Transversal {
        #[arg(long)]
        collection: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 8)]
        horizon: u64,
    },
    /// Uniformize a relation to its length-lex least refinement.
    Uniformize {
        #[arg(long)]
        relation: String,
        /// Output-length window coefficients, constant first.
        #[arg(long, value_delimiter = ',')]
        window: Vec<u64>,
        #[arg(long, default_value_t = 4)]
        upto: u64,
    },
    /// Run the stage construction between two languages.
    Diag {
        #[arg(long = "A")]
        lower: String,
        #[arg(long = "B")]
        upper: String,
        /// JSON file with [{name, alpha, beta}] map expressions;
        /// defaults to the shipped six-row catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        stages: u64,
        #[arg(long, default_value_t = 8)]
        horizon: u64,
        /// Write the per-stage trace to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

/// The report envelope every subcommand emits.
#[derive(Serialize)]
struct Report {
    command: String,
    inputs: BTreeMap<String, String>,
    checked_up_to: Option<u64>,
    violations: Vec<Json>,
    summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<Json>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            checked_up_to: None,
            violations: Vec::new(),
            summary: String::new(),
            data: None,
        }
    }

    fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<pcard::Error> for Failure {
    fn from(e: pcard::Error) -> Failure {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<expr::ExprError> for Failure {
    fn from(e: expr::ExprError) -> Failure {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Report, Failure>;

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn eval_lang(text: &str, fuel: Option<u64>) -> Result<Language, Failure> {
    match eval(&parse(text)?)? {
        Value::Lang(l) => Ok(match fuel {
            Some(k) => l.with_fuel(k),
            None => l,
        }),
        v => Err(fail(format!(
            "expected a language expression, got a {}",
            v.kind()
        ))),
    }
}

fn eval_witness(text: &str) -> Result<Equipollence, Failure> {
    match eval(&parse(text)?)? {
        Value::Wit(w) => Ok(*w),
        v => Err(fail(format!(
            "expected a witness expression, got a {}",
            v.kind()
        ))),
    }
}

fn eval_map(text: &str) -> Result<pcard::maps::InvertibleMap, Failure> {
    match eval(&parse(text)?)? {
        Value::Map(m) => Ok(*m),
        v => Err(fail(format!(
            "expected a map expression, got a {}",
            v.kind()
        ))),
    }
}

fn eval_collection(text: &str) -> Result<Collection, Failure> {
    match eval(&parse(text)?)? {
        Value::Coll(c) => Ok(*c),
        v => Err(fail(format!(
            "expected a collection expression, got a {}",
            v.kind()
        ))),
    }
}

fn parse_str(text: &str) -> Result<Str, Failure> {
    text.parse::<Str>().map_err(Failure::from)
}

fn verification_json(report: &pcard::witness::VerificationReport) -> Vec<Json> {
    report
        .violations
        .iter()
        .map(|v| serde_json::to_value(v).expect("violation serializes"))
        .collect()
}

/// Entry point shared by the binary and the tests: returns the exit
/// code and the rendered report.
pub fn run(argv: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap help/version output is a normal exit.
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let json_path = cli.json.clone();
    let outcome = dispatch(cli);
    let (code, report) = match outcome {
        Ok(report) => {
            let code = i32::from(!report.violations.is_empty());
            (code, report.render())
        }
        Err(f) => {
            let mut r = Report::new("error");
            r.summary = f.message;
            (f.code, r.render())
        }
    };
    if let Some(path) = json_path {
        let _ = std::fs::write(path, &report);
    }
    (code, report)
}

fn dispatch(cli: Cli) -> CmdResult {
    let fuel = cli.fuel;
    match cli.cmd {
        Cmd::Eval { expr: text } => {
            let tree = parse(&text)?;
            let kind = static_kind(&tree);
            let value = eval(&tree)?;
            let mut r = Report::new("eval").input("expr", &text);
            r.summary = format!("{}: {}", value.kind(), value.describe());
            r.data = Some(json!({
                "printed": tree.to_string(),
                "static_kind": kind,
                "kind": value.kind(),
                "description": value.describe(),
            }));
            Ok(r)
        }
        Cmd::Gallery => {
            let mut r = Report::new("gallery");
            let rows: Vec<Json> = expr::documented_names()
                .into_iter()
                .map(|(n, d)| json!({"name": n, "what": d}))
                .collect();
            r.summary = format!("{} documented constructions", rows.len());
            r.data = Some(Json::Array(rows));
            Ok(r)
        }
        Cmd::Census { lang, upto, csv } => {
            let l = eval_lang(&lang, fuel)?;
            let table = CensusTable::compute(&l, upto)?;
            let text = table.to_csv();
            if let Some(path) = csv {
                std::fs::write(path, &text).map_err(|e| fail(e.to_string()))?;
            }
            let mut r = Report::new("census")
                .input("lang", l.name())
                .input("upto", upto);
            r.checked_up_to = Some(upto);
            r.summary = format!(
                "census({}) = {}",
                upto,
                table.entries.last().map(|(_, c)| c.to_string()).unwrap_or_default()
            );
            r.data = Some(json!({ "csv": text }));
            Ok(r)
        }
        Cmd::DensityCompare {
            a,
            b,
            p,
            q,
            upto,
            density_exp,
        } => {
            let la = eval_lang(&a, fuel)?;
            let lb = eval_lang(&b, fuel)?;
            let pp = Polynomial::new(p);
            let qq = Polynomial::new(q);
            let rows = census_poly_related(&la, &lb, &pp, &qq, upto)?;
            let mut r = Report::new("density-compare")
                .input("a", la.name())
                .input("b", lb.name())
                .input("p", &pp)
                .input("q", &qq);
            r.checked_up_to = Some(upto);
            for row in rows.iter().filter(|row| !row.pass()) {
                r.violations.push(json!({
                    "n": row.n,
                    "a_within_b": row.a_within_b,
                    "b_within_a": row.b_within_a,
                }));
            }
            let mut data = json!({
                "rows": rows.iter().map(|row| json!({
                    "n": row.n,
                    "a_within_b": row.a_within_b,
                    "b_within_a": row.b_within_a,
                })).collect::<Vec<_>>(),
            });
            if let Some(c_exp) = density_exp {
                let da = exp_density_check(&la, c_exp, upto)?;
                let db = exp_density_check(&lb, c_exp, upto)?;
                data["density_a"] = serde_json::to_value(&da).unwrap();
                data["density_b"] = serde_json::to_value(&db).unwrap();
            }
            r.data = Some(data);
            r.summary = if r.violations.is_empty() {
                "censuses polynomially related on the tested range".to_string()
            } else {
                format!("{} lengths violate the census relation", r.violations.len())
            };
            Ok(r)
        }
        Cmd::CheckEqui { witness, upto } => {
            let w = eval_witness(&witness)?;
            let report = verify_equipollence(&w, upto)?;
            let mut r = Report::new("check-equi")
                .input("witness", &witness)
                .input("upto", upto);
            r.checked_up_to = Some(upto);
            r.violations = verification_json(&report);
            r.summary = if report.clean() {
                format!("verified {} ~ {} up to length {upto}", w.a.name(), w.b.name())
            } else {
                format!("{} violations", report.violations.len())
            };
            r.data = Some(json!({
                "max_steps_per_length": report.max_steps_per_length,
            }));
            Ok(r)
        }
        Cmd::AuditMap { map, upto } => {
            let m = eval_map(&map)?;
            let audit = audit_map(&m.map, upto)?;
            let mut r = Report::new("audit-map")
                .input("map", m.map.name())
                .input("upto", upto);
            r.checked_up_to = Some(upto);
            r.summary = format!(
                "injective: {}, honest_with: {:?}, length_increasing: {}",
                audit.injective, audit.honest_with, audit.length_increasing
            );
            r.data = Some(serde_json::to_value(&audit).unwrap());
            Ok(r)
        }
        Cmd::Cb {
            p,
            q,
            verify_upto,
            emit_chains,
        } => {
            let pm = eval_map(&p)?;
            let qm = eval_map(&q)?;
            let a = language::sigma_star(pm.map.source_alphabet());
            let b = language::sigma_star(pm.map.target_alphabet());
            let pair = InjectionPair::new(pm, qm, a.clone(), b);
            let w = cb_witness(&pair, verify_upto)?;
            let report = verify_equipollence(&w, verify_upto)?;
            let mut r = Report::new("cb")
                .input("p", &p)
                .input("q", &q)
                .input("verify_upto", verify_upto);
            r.checked_up_to = Some(verify_upto);
            r.violations = verification_json(&report);
            r.summary = if report.clean() {
                "constructed witness verifies cleanly".to_string()
            } else {
                format!("{} violations", report.violations.len())
            };
            if emit_chains {
                let mut phi = Vec::new();
                let mut chains = Vec::new();
                for x in language::enumerate_upto(&a, verify_upto)? {
                    let image = w.forward.value(&x)?;
                    phi.push(json!([x.to_string(), image.map(|y| y.to_string())]));
                    let verdict = classify(&pair, &x, Side::A)?;
                    chains.push(serde_json::to_value(&verdict).unwrap());
                }
                r.data = Some(json!({ "phi": phi, "chains": chains }));
            }
            Ok(r)
        }
        Cmd::Rank { lang, text } => {
            let l = eval_lang(&lang, fuel)?;
            let x = parse_str(&text)?;
            let rank = strong_rank(&l, &x)?;
            let mut r = Report::new("rank")
                .input("lang", l.name())
                .input("str", &x);
            r.summary = format!("strong rank of {x} in {} is {rank}", l.name());
            r.data = Some(json!({ "rank": rank.to_string() }));
            Ok(r)
        }
        Cmd::UnrankIn { lang, rank, nmax } => {
            let l = eval_lang(&lang, fuel)?;
            let member = rank_inverse(&l, &Nat::from(rank), nmax)?;
            let mut r = Report::new("unrank-in")
                .input("lang", l.name())
                .input("rank", rank);
            r.summary = format!("member of rank {rank} is {member}");
            r.data = Some(json!({ "member": member.to_string() }));
            Ok(r)
        }
        Cmd::Findiff {
            base,
            add,
            remove,
            other_add,
            other_remove,
            verify_upto,
        } => {
            let l = eval_lang(&base, fuel)?;
            let parse_all = |items: &[String]| -> Result<Vec<Str>, Failure> {
                items
                    .iter()
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_str(s))
                    .collect()
            };
            let d1 = FiniteDiff::new(l.clone(), parse_all(&add)?, parse_all(&remove)?)?;
            let sf = shift_function(&d1);
            let mut r = Report::new("findiff")
                .input("base", l.name())
                .input("derived", d1.derived().name());
            r.checked_up_to = Some(verify_upto);
            // Rank-transfer identity as the built-in check.
            let derived = d1.derived();
            for x in strings::enumerate_upto_len(l.alphabet(), verify_upto) {
                let got = num_bigint::BigInt::from(strong_rank(&derived, &x)?);
                let want = num_bigint::BigInt::from(strong_rank(&l, &x)?) + sf.eval(&x);
                if got != want {
                    r.violations.push(json!({
                        "at": x.to_string(),
                        "kind": "rank_transfer_mismatch",
                        "expected": want.to_string(),
                        "actual": got.to_string(),
                    }));
                }
            }
            let mut data = json!({
                "shift": {
                    "breakpoints": sf.breakpoints.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
                    "values": sf.values,
                },
            });
            if !other_add.is_empty() || !other_remove.is_empty() {
                let d2 =
                    FiniteDiff::new(l.clone(), parse_all(&other_add)?, parse_all(&other_remove)?)?;
                let w = findiff_witness(&d1, &d2)?;
                let report = verify_equipollence(&w, verify_upto)?;
                r.violations.extend(verification_json(&report));
                data["witness"] = json!({
                    "between": [w.a.name(), w.b.name()],
                    "clean": report.clean(),
                });
            }
            r.summary = if r.violations.is_empty() {
                "rank transfer identity holds".to_string()
            } else {
                format!("{} violations", r.violations.len())
            };
            r.data = Some(data);
            Ok(r)
        }
        Cmd::Iso {
            witness,
            complement_witness,
            decider,
            upto,
        } => {
            let e = eval_witness(&witness)?;
            let ec = eval_witness(&complement_witness)?;
            let d = eval_lang(&decider, fuel)?;
            let iso = iso_from_complements(&e, &ec, &d, upto)?;
            let report = verify_equipollence(&iso, upto)?;
            let mut r = Report::new("iso")
                .input("witness", &witness)
                .input("complement_witness", &complement_witness)
                .input("decider", d.name());
            r.checked_up_to = Some(upto);
            r.violations = verification_json(&report);
            // Membership transport check.
            let b_side = e.b.clone();
            for x in strings::enumerate_upto_len(d.alphabet(), upto) {
                if let Some(y) = iso.forward.value(&x)? {
                    if d.contains(&x)? && !b_side.contains(&y)? {
                        r.violations.push(json!({
                            "at": x.to_string(),
                            "kind": "membership_transport",
                        }));
                    }
                }
            }
            r.summary = if r.violations.is_empty() {
                "total isomorphism verified; membership transported".to_string()
            } else {
                format!("{} violations", r.violations.len())
            };
            Ok(r)
        }
        Cmd::Reduce { witness, a0, upto } => {
            let e = eval_witness(&witness)?;
            let anchor = parse_str(&a0)?;
            let red = reduction_from_witness(&e, &anchor)?;
            let mut r = Report::new("reduce")
                .input("witness", &witness)
                .input("a0", &anchor);
            r.checked_up_to = Some(upto);
            let mut table = Vec::new();
            for x in strings::enumerate_upto_len(anchor.alphabet(), upto) {
                let rx = red
                    .value(&x)?
                    .ok_or_else(|| fail(format!("reduction undefined at {x}")))?;
                let in_b = e.b.contains(&x)?;
                let in_a = e.a.contains(&rx)?;
                if in_b != in_a {
                    r.violations.push(json!({
                        "at": x.to_string(),
                        "kind": "reduction_law",
                        "in_b": in_b,
                        "r_in_a": in_a,
                    }));
                }
                if x.len() <= 3 {
                    table.push(json!([x.to_string(), rx.to_string()]));
                }
            }
            r.summary = if r.violations.is_empty() {
                "reduction law holds on the tested range".to_string()
            } else {
                format!("{} law violations", r.violations.len())
            };
            r.data = Some(json!({ "sample": table }));
            Ok(r)
        }
        Cmd::Enumerate {
            lang,
            upto,
            witness,
            count,
        } => match (lang, witness) {
            (Some(lang), None) => {
                let l = eval_lang(&lang, fuel)?;
                let n = upto.ok_or_else(|| fail("--upto is required with --lang"))?;
                let members = language::enumerate_upto(&l, n)?;
                let mut r = Report::new("enumerate")
                    .input("lang", l.name())
                    .input("upto", n);
                r.checked_up_to = Some(n);
                r.summary = format!("{} members up to length {n}", members.len());
                r.data = Some(json!({
                    "members": members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                }));
                Ok(r)
            }
            (None, Some(witness)) => {
                let e = eval_witness(&witness)?;
                let k = count.ok_or_else(|| fail("--count is required with --witness"))?;
                let it = enum_by_iteration(&e)?;
                let mut items = vec![it.x0.clone()];
                let mut cur = it.x0.clone();
                for _ in 1..k {
                    match it.step.value(&cur)? {
                        Some(next) => {
                            items.push(next.clone());
                            cur = next;
                        }
                        None => break,
                    }
                }
                let mut r = Report::new("enumerate").input("witness", &witness);
                r.summary = format!("{} iterates from {}", items.len(), it.x0);
                r.data = Some(json!({
                    "iterates": items.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                }));
                Ok(r)
            }
            _ => Err(fail("use exactly one of --lang or --witness")),
        },
        Cmd::Cylinder {
            witness,
            complement_witness,
            upto,
        } => {
            let ea = eval_witness(&witness)?;
            let eac = eval_witness(&complement_witness)?;
            let h = cylinder_witness(&ea, &eac, upto)?;
            let report = verify_equipollence(&h, upto)?;
            let mut r = Report::new("cylinder")
                .input("witness", &witness)
                .input("complement_witness", &complement_witness);
            r.checked_up_to = Some(upto);
            r.violations = verification_json(&report);
            let decider = ea.a.clone();
            for x in strings::enumerate_upto_len(decider.alphabet(), upto) {
                if let Some(z) = h.forward.value(&x)? {
                    let (first, _) = unpair(&z);
                    if decider.contains(&x)? != decider.contains(&first)? {
                        r.violations.push(json!({
                            "at": x.to_string(),
                            "kind": "membership_transport",
                        }));
                    }
                }
            }
            r.summary = if r.violations.is_empty() {
                "cylinder witness verified".to_string()
            } else {
                format!("{} violations", r.violations.len())
            };
            Ok(r)
        }
        Cmd::Choice {
            collection,
            x,
            audit_upto,
        } => {
            let c = eval_collection(&collection)?;
            let index = parse_str(&x)?;
            let value = choice_bruteforce(&c, &index)?;
            let mut r = Report::new("choice")
                .input("collection", c.carrier().name())
                .input("x", &index);
            r.summary = format!("choice({index}) = {value}");
            let mut data = json!({ "value": value.to_string() });
            if let Some(n) = audit_upto {
                let honesty = check_honestly_nonempty(&c, n)?;
                let overlaps = audit_pairwise_disjoint(&c, n)?;
                for row in honesty.iter().filter(|row| row.witness.is_none()) {
                    r.violations.push(json!({
                        "at": row.index,
                        "kind": "honesty_window_empty",
                    }));
                }
                for v in &overlaps {
                    r.violations.push(json!({
                        "at": v.member,
                        "kind": "slices_overlap",
                        "indices": [v.first_index, v.second_index],
                    }));
                }
                data["honesty"] = serde_json::to_value(&honesty).unwrap();
                r.checked_up_to = Some(n);
            }
            r.data = Some(data);
            Ok(r)
        }
        Cmd::Transversal {
            collection,
            y,
            horizon,
        } => {
            let c = eval_collection(&collection)?;
            let cand = parse_str(&y)?;
            let member = transversal_member(&c, &cand, horizon)?;
            let mut r = Report::new("transversal")
                .input("collection", c.carrier().name())
                .input("y", &cand);
            r.summary = format!("{cand} is {}in the transversal", if member { "" } else { "not " });
            r.data = Some(json!({ "member": member }));
            Ok(r)
        }
        Cmd::Uniformize {
            relation,
            window,
            upto,
        } => {
            // A collection works here too; its carrier is the relation.
            let graph = match eval(&parse(&relation)?)? {
                Value::Lang(l) => l,
                Value::Coll(c) => c.carrier().clone(),
                v => {
                    return Err(fail(format!(
                        "expected a relation (language or collection), got a {}",
                        v.kind()
                    )))
                }
            };
            let poly = if window.is_empty() {
                None
            } else {
                Some(Polynomial::new(window))
            };
            let mm = MultiMap::new(graph.clone(), poly);
            let f = refine_uniformize(&mm, upto)?;
            let mut table = Vec::new();
            for x in strings::enumerate_upto_len(graph.alphabet(), upto) {
                table.push(json!([
                    x.to_string(),
                    f.value(&x)?.map(|y| y.to_string()),
                ]));
            }
            let mut r = Report::new("uniformize").input("relation", graph.name());
            r.checked_up_to = Some(upto);
            r.summary = "selected the length-lex least related output per index".to_string();
            r.data = Some(json!({ "selection": table }));
            Ok(r)
        }
        Cmd::Diag {
            lower,
            upper,
            catalog,
            stages,
            horizon,
            trace,
        } => {
            let a = eval_lang(&lower, fuel)?;
            let b = eval_lang(&upper, fuel)?;
            let cat = match catalog {
                None => demo_catalog(a.alphabet()),
                Some(path) => {
                    let text =
                        std::fs::read_to_string(&path).map_err(|e| fail(e.to_string()))?;
                    let rows: Vec<serde_json::Map<String, Json>> =
                        serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
                    let mut out = Vec::new();
                    for row in rows {
                        let get = |k: &str| -> Result<String, Failure> {
                            row.get(k)
                                .and_then(|v| v.as_str())
                                .map(|s| s.to_string())
                                .ok_or_else(|| fail(format!("catalog row missing {k:?}")))
                        };
                        out.push(CatalogRow {
                            name: get("name")?,
                            alpha: eval_map(&get("alpha")?)?.map,
                            beta: eval_map(&get("beta")?)?.map,
                        });
                    }
                    MachineCatalog::new(out)
                }
            };
            let (state, c) = run_construction(&a, &b, &cat, stages, horizon)?;
            state.check_invariants(&a, &b)?;
            let reqs = check_requirements(&state, &a, &b, &cat, horizon)?;
            let mut r = Report::new("diag")
                .input("A", a.name())
                .input("B", b.name())
                .input("stages", stages)
                .input("horizon", horizon);
            r.checked_up_to = Some(horizon);
            for pr in &reqs {
                if matches!(pr.r1, ReqStatus::Unsatisfied) {
                    r.violations.push(json!({
                        "pair": pr.k, "requirement": "R1", "kind": "unsatisfied",
                    }));
                }
                if matches!(pr.r2, ReqStatus::Unsatisfied) {
                    r.violations.push(json!({
                        "pair": pr.k, "requirement": "R2", "kind": "unsatisfied",
                    }));
                }
            }
            if let Some(path) = trace {
                let text = serde_json::to_string_pretty(&state.log)
                    .expect("trace serializes");
                std::fs::write(path, text).map_err(|e| fail(e.to_string()))?;
            }
            r.summary = format!(
                "{} stages: |C \\ A| = {}, |E| = {}, {} requirement pairs checked",
                stages,
                state.added().len(),
                state.excluded().len(),
                reqs.len()
            );
            r.data = Some(json!({
                "c_name": c.name(),
                "added": state.added().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "excluded": state.excluded().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "requirements": reqs.iter().map(|pr| serde_json::to_value(pr).unwrap()).collect::<Vec<_>>(),
                "log": state.log.iter().map(|rec| serde_json::to_value(rec).unwrap()).collect::<Vec<_>>(),
            }));
            Ok(r)
        }
    }
}

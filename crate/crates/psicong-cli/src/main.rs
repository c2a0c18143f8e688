use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use psicong::digit_rules::Free27Reading;
use psicong::sequences::{
    self, alpha_for, apery2_by_recurrence, apery3_by_recurrence, fixture_ids, oracle_terms,
};
use psicong::{
    apery_class, check_minpoly, free27_is_one, free_class, min_degree_bound, psi_power_coeff,
    AperyKind, Error, MinPolyFixture, PsiPoly, SequenceId, TritString,
};
use serde_json::{json, Value};

/// Largest index answered by series evaluation when no digit rule applies.
const SERIES_LIMIT: u64 = 200_000;

#[derive(Parser)]
#[command(
    name = "psicong",
    version,
    about = "Sequences modulo powers of 3 via the series Psi(z)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive the representation of a sequence's generating function.
    Derive(DeriveArgs),
    /// Compare derived (or supplied) representations with brute-force terms.
    Verify(VerifyArgs),
    /// One term of a sequence modulo 3^e.
    Coeff(CoeffArgs),
    /// [z^n] Psi(z)^power from the digit rules.
    PsiCoeff(PsiCoeffArgs),
    /// Class of the free subgroup number f_lambda (m = 1).
    ClassifyFree(ClassifyArgs),
    /// Check the minimal polynomials of Psi.
    Minpoly(MinpolyArgs),
    /// Compare the conjectured Apery classes mod 9 with exact values.
    AperyScan(AperyArgs),
    /// List the supported sequence ids.
    List(JsonFlag),
}

#[derive(Args)]
struct JsonFlag {
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(long)]
    sequence: String,
    /// Work modulo 3^(3^alpha).
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    /// Reduce the result to this modulus (3, 9 or 27).
    #[arg(long = "mod")]
    modulus: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// A sequence id, or `all`.
    #[arg(long, default_value = "all")]
    sequence: String,
    #[arg(long = "mod", default_value_t = 27)]
    modulus: u64,
    #[arg(long, default_value_t = 729)]
    terms: usize,
    #[arg(long)]
    alpha: Option<u32>,
    /// Also compare the stored printed representation with the oracle.
    #[arg(long)]
    fixture_check: bool,
    /// Verify this representation (as written by `derive --json`) instead.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CoeffArgs {
    #[arg(long)]
    sequence: String,
    #[arg(long)]
    n: BigUint,
    #[arg(long = "mod", default_value_t = 27)]
    modulus: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PsiCoeffArgs {
    #[arg(long, default_value_t = 1)]
    power: u32,
    #[arg(long = "mod", default_value_t = 27)]
    modulus: u64,
    #[arg(long)]
    n: BigUint,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    n: BigUint,
    #[arg(long = "mod", default_value_t = 9)]
    modulus: u64,
    /// Use the printed run statistic in the 2212 clause (mod 27 only).
    #[arg(long)]
    as_printed: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MinpolyArgs {
    /// Series degree of the check.
    #[arg(long, default_value_t = 2000)]
    terms: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AperyArgs {
    #[arg(long, default_value_t = 6561)]
    max_n: u64,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Solver(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonUnique { .. }
            | Error::Inconsistent { .. }
            | Error::DivisibilityFailure { .. }
            | Error::BranchAmbiguous
            | Error::NoBranch
            | Error::ShapeMismatch(_)
            | Error::DivideNotExact(_)
            | Error::KernelIntegrality(_) => Failure::Solver(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn mod_exp(m: u64) -> Result<u32, Failure> {
    match m {
        3 => Ok(1),
        9 => Ok(2),
        27 => Ok(3),
        _ => Err(Failure::Usage(format!("--mod must be 3, 9 or 27, got {m}"))),
    }
}

fn parse_id(s: &str) -> Result<SequenceId, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn emit(json: bool, v: Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        println!("{}", text());
    }
}

fn derive(a: DeriveArgs) -> Outcome {
    let id = parse_id(&a.sequence)?;
    if a.alpha == 0 || a.alpha > 3 {
        return Err(Failure::Usage("--alpha must be 1, 2 or 3".into()));
    }
    let full = psicong::ring3::pow3(a.alpha) as u32;
    let e = match a.modulus {
        Some(m) => mod_exp(m)?.min(full),
        None => full,
    };
    let rep = sequences::derive(id, e, a.alpha)?;
    emit(a.json, rep.to_json(), || format!("{id}: {rep}"));
    Ok(())
}

/// Ids covered by `verify --sequence all` at modulus 3^e.
fn verify_ids(e: u32) -> Vec<SequenceId> {
    let mut ids = SequenceId::quadratic();
    if e >= 2 {
        ids.extend([SequenceId::EulerianEven, SequenceId::EulerianOdd]);
    }
    if e == 2 {
        ids.extend([
            SequenceId::FreeSubgroups(2),
            SequenceId::FreeSubgroups(4),
            SequenceId::FreeSubgroups(5),
        ]);
    }
    ids
}

/// First index where the series of `rep` and the oracle differ.
fn first_mismatch(
    rep: &PsiPoly,
    oracle: &psicong::TruncSeries,
    e: u32,
    terms: usize,
) -> Option<i64> {
    let s = rep.to_series(terms as i64 - 1).reduce(e);
    s.first_difference(oracle, terms as i64 - 1)
}

fn verify(a: VerifyArgs) -> Outcome {
    let e = mod_exp(a.modulus)?;
    if a.terms == 0 {
        return Err(Failure::Usage("--terms must be positive".into()));
    }
    let alpha = a.alpha.unwrap_or_else(|| alpha_for(e));
    let input = match &a.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|err| Failure::Usage(format!("{}: {err}", path.display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|err| Failure::Usage(format!("{}: {err}", path.display())))?;
            Some(PsiPoly::from_json(&v)?)
        }
        None => None,
    };
    let ids = if a.sequence == "all" {
        if input.is_some() {
            return Err(Failure::Usage("--input needs a single --sequence".into()));
        }
        verify_ids(e)
    } else {
        vec![parse_id(&a.sequence)?]
    };
    if let Some(rep) = &input {
        if rep.ctx().e < e {
            return Err(Failure::Usage(format!(
                "input is only valid mod 3^{}",
                rep.ctx().e
            )));
        }
    }
    let fixtures = fixture_ids();
    let rows: Vec<Result<Value, Failure>> = psicong::par::map(ids, |id| {
        let oracle = oracle_terms(id, a.terms, e);
        let rep = match &input {
            Some(r) => r.clone(),
            None => sequences::derive(id, e, alpha)?,
        };
        let derived = first_mismatch(&rep, &oracle, e, a.terms);
        let mut row = json!({
            "sequence": id.to_string(),
            "modulus": 3u64.pow(e),
            "terms": a.terms,
            "derived_ok": derived.is_none(),
            "derived_first_mismatch": derived,
        });
        if a.fixture_check && fixtures.iter().any(|k| k.id == id && k.e == e) {
            let fix = sequences::stored_fixture(id, e)?;
            let m = first_mismatch(&fix, &oracle, e, a.terms);
            row["fixture_ok"] = json!(m.is_none());
            row["fixture_first_mismatch"] = json!(m);
        }
        Ok(row)
    });
    let mut out = Vec::new();
    let mut ok = true;
    for r in rows {
        let row = r?;
        ok &= row["derived_ok"] == json!(true)
            && row.get("fixture_ok").is_none_or(|v| *v == json!(true));
        out.push(row);
    }
    emit(a.json, json!({ "ok": ok, "results": out }), || {
        out.iter()
            .map(|r| {
                let mut line = format!(
                    "{:<28} mod {:<3} derived {}",
                    r["sequence"].as_str().unwrap(),
                    r["modulus"],
                    verdict(&r["derived_ok"], &r["derived_first_mismatch"])
                );
                if let Some(f) = r.get("fixture_ok") {
                    line += &format!("  fixture {}", verdict(f, &r["fixture_first_mismatch"]));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn verdict(ok: &Value, at: &Value) -> String {
    if *ok == json!(true) {
        "ok".into()
    } else {
        format!("MISMATCH at n={at}")
    }
}

fn coeff(a: CoeffArgs) -> Outcome {
    let id = parse_id(&a.sequence)?;
    let e = mod_exp(a.modulus)?;
    let n = a.n;
    let (value, method) = match id {
        SequenceId::FreeSubgroups(1) if e <= 2 && n > BigUint::ZERO => {
            (free_class(&n, e)?.value(), "digit rule")
        }
        SequenceId::AperyZeta2 | SequenceId::AperyZeta3 if e == 2 => {
            let kind = if id == SequenceId::AperyZeta2 {
                AperyKind::Zeta2
            } else {
                AperyKind::Zeta3
            };
            (apery_class(kind, &n).value(), "digit rule (conjectural)")
        }
        _ => {
            let small = u64::try_from(&n).ok().filter(|&v| v <= SERIES_LIMIT).ok_or_else(|| {
                Failure::Usage(format!("no digit rule for {id} mod {}; series evaluation supports n <= {SERIES_LIMIT}", a.modulus))
            })?;
            let v = match id {
                SequenceId::AperyZeta2 | SequenceId::AperyZeta3 | SequenceId::FreeSubgroups(_) => {
                    oracle_terms(id, small as usize + 1, e).coeff(small as i64)
                }
                _ => sequences::derive(id, e, alpha_for(e))?
                    .to_series(small as i64)
                    .reduce(e)
                    .coeff(small as i64),
            };
            (v, "series")
        }
    };
    residue_out(a.json, &id.to_string(), &n, value, a.modulus, method);
    Ok(())
}

fn residue_out(json: bool, what: &str, n: &BigUint, value: u64, modulus: u64, method: &str) {
    emit(
        json,
        json!({ "what": what, "n": n.to_string(), "value": value, "modulus": modulus, "method": method }),
        || format!("{value} (mod {modulus})"),
    );
}

fn psi_coeff(a: PsiCoeffArgs) -> Outcome {
    let e = mod_exp(a.modulus)?;
    if ![1, 3, 5].contains(&a.power) {
        return Err(Failure::Usage("--power must be 1, 3 or 5".into()));
    }
    let r = psi_power_coeff(a.power, e, &a.n)?;
    residue_out(
        a.json,
        &format!("Psi^{}", a.power),
        &a.n,
        r.value(),
        a.modulus,
        "digit rule",
    );
    Ok(())
}

fn classify_free(a: ClassifyArgs) -> Outcome {
    let e = mod_exp(a.modulus)?;
    if a.n == BigUint::ZERO {
        return Err(Failure::Usage("lambda must be at least 1".into()));
    }
    if e == 3 {
        let reading = if a.as_printed {
            Free27Reading::AsPrinted
        } else {
            Free27Reading::default()
        };
        let one = psicong::digit_rules::free27_is_one_with(&a.n, reading);
        debug_assert!(a.as_printed || one == free27_is_one(&a.n));
        emit(
            a.json,
            json!({ "n": a.n.to_string(), "modulus": 27, "is_one": one }),
            || {
                if one {
                    "1 (mod 27)".into()
                } else {
                    "not 1 (mod 27)".into()
                }
            },
        );
        return Ok(());
    }
    let r = free_class(&a.n, e)?;
    residue_out(
        a.json,
        "free_subgroups,m=1",
        &a.n,
        r.value(),
        a.modulus,
        "digit rule",
    );
    Ok(())
}

fn minpoly(a: MinpolyArgs) -> Outcome {
    let table = MinPolyFixture::table();
    let results: Vec<(MinPolyFixture, bool)> =
        psicong::par::map(table, |f| (f, check_minpoly(&f, a.terms)));
    let ok = results.iter().all(|r| r.1);
    let rows: Vec<Value> = results
        .iter()
        .map(|(f, pass)| {
            json!({
                "name": f.name,
                "modulus_exp": f.mod_exp,
                "degree": f.degree(),
                "degree_bound": min_degree_bound(f.mod_exp as u64),
                "ok": pass,
            })
        })
        .collect();
    emit(
        a.json,
        json!({ "ok": ok, "series_degree": a.terms, "rows": rows }),
        || {
            results
                .iter()
                .map(|(f, pass)| {
                    format!(
                        "{:<10} mod 3^{:<2} degree {:<2} (bound {:<2}) {}",
                        f.name,
                        f.mod_exp,
                        f.degree(),
                        min_degree_bound(f.mod_exp as u64),
                        if *pass { "ok" } else { "FAIL" }
                    )
                })
                .collect::<Vec<_>>()
                .join("\n")
        },
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn apery_scan(a: AperyArgs) -> Outcome {
    let count = usize::try_from(a.max_n)
        .ok()
        .and_then(|c| c.checked_add(1))
        .ok_or_else(|| Failure::Usage("--max-n too large".into()))?;
    let mut findings = Vec::new();
    for (kind, seq) in [
        (AperyKind::Zeta2, apery2_by_recurrence(count)),
        (AperyKind::Zeta3, apery3_by_recurrence(count)),
    ] {
        let classes = psicong::par::map_range(0..count as u64, |n| apery_class(kind, n).value());
        for (n, (x, &c)) in seq.iter().zip(&classes).enumerate() {
            let exact = psicong::Residue::from_bigint(x, 2).value();
            if exact != c {
                findings.push(json!({
                    "kind": kind,
                    "n": n,
                    "trits": TritString::from(n as u64).to_string(),
                    "predicted": c,
                    "exact": exact,
                }));
            }
        }
    }
    let ok = findings.is_empty();
    emit(
        a.json,
        json!({ "max_n": a.max_n, "counterexamples": findings }),
        || {
            if ok {
                format!("no counterexamples for n <= {}", a.max_n)
            } else {
                findings
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        },
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn list(a: JsonFlag) -> Outcome {
    let fixtures = fixture_ids();
    let mut ids = SequenceId::all();
    ids.extend([
        SequenceId::FreeSubgroups(2),
        SequenceId::FreeSubgroups(4),
        SequenceId::FreeSubgroups(5),
    ]);
    let rows: Vec<Value> = ids
        .iter()
        .map(|id| {
            let printed: Vec<u64> = fixtures
                .iter()
                .filter(|k| k.id == *id)
                .map(|k| 3u64.pow(k.e))
                .collect();
            let derivable = sequences::catalog(*id).is_ok()
                || matches!(id, SequenceId::EulerianEven | SequenceId::EulerianOdd);
            json!({ "id": id.to_string(), "derivable": derivable, "printed_moduli": printed })
        })
        .collect();
    emit(a.json, Value::Array(rows.clone()), || {
        rows.iter()
            .map(|r| {
                format!(
                    "{:<28} derive: {:<3} printed: {}",
                    r["id"].as_str().unwrap(),
                    if r["derivable"] == json!(true) {
                        "yes"
                    } else {
                        "no"
                    },
                    r["printed_moduli"]
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Derive(a) => derive(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Coeff(a) => coeff(a),
        Cmd::PsiCoeff(a) => psi_coeff(a),
        Cmd::ClassifyFree(a) => classify_free(a),
        Cmd::Minpoly(a) => minpoly(a),
        Cmd::AperyScan(a) => apery_scan(a),
        Cmd::List(a) => list(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            ExitCode::from(3)
        }
    }
}

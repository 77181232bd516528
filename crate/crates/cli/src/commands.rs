//! Command implementations. Each returns a [`Report`]; rendering happens in `output`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use qlambert::arith::parse_rat;
use qlambert::cyclotomic::{check_lemma_a1, check_lemma_a2, common_factor_threshold, is_prime, totient_sum_check};
use qlambert::denomfactory::{summarize, verify_range_with, ApproxRecord, DenomError, FactorKind};
use qlambert::measures::table;
use qlambert::qseries::eval_h;
use qlambert::{QParams, Sign};
use serde_json::{json, Value};

use crate::cache::RecordCache;
use crate::output::Report;
use crate::{CliError, CycloCommand, ParamArgs};

/// Precision doublings `eval` tries before giving up on the requested digits.
const EVAL_DOUBLINGS: u32 = 4;

fn invalid(msg: impl ToString) -> CliError {
    CliError::Invalid(msg.to_string())
}

fn parse_int(name: &str, s: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("--{name} '{s}' is not an integer")))
}

pub fn parse_params(a: &ParamArgs) -> Result<QParams, CliError> {
    let special = a.p.is_some() || a.r1.is_some() || a.r2.is_some();
    let general = a.q1.is_some() || a.p2.is_some();
    match (special, general) {
        (true, true) => Err(invalid("give either --q1/--p2 or --p/--r1/--r2, not both")),
        (false, false) => Err(invalid("missing parameters: give --q1 and --p2, or --p, --r1 and --r2")),
        (true, false) => {
            let (Some(p), Some(r1), Some(r2)) = (&a.p, a.r1, a.r2) else {
                return Err(invalid("special parameters need all of --p, --r1 and --r2"));
            };
            QParams::special(parse_int("p", p)?, r1, r2).map_err(invalid)
        }
        (false, true) => {
            let (Some(q1), Some(p2)) = (&a.q1, &a.p2) else {
                return Err(invalid("general parameters need both --q1 and --p2"));
            };
            let q1 = parse_rat(q1).ok_or_else(|| invalid(format!("--q1 '{q1}' is not a fraction")))?;
            QParams::new(q1, parse_int("p2", p2)?).map_err(invalid)
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

pub fn eval(args: &ParamArgs, sign: Sign, digits: usize, precision: Option<u64>) -> Result<Report, CliError> {
    let params = parse_params(args)?;
    if digits == 0 {
        return Err(invalid("--digits must be at least 1"));
    }
    let config = json!({
        "command": "eval",
        "params": to_value(&params),
        "sign": sign,
        "digits": digits,
        "precision": precision,
    });
    let mut bits = precision.unwrap_or((digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 32);
    for _ in 0..=EVAL_DOUBLINGS {
        let v = eval_h(&params, sign, bits).map_err(invalid)?;
        if let Some(decimal) = v.value.certified_decimal(digits) {
            let row = json!({
                "sign": sign,
                "digits": digits,
                "value": decimal,
                "terms_used": v.terms_used,
                "precision_bits": bits,
            });
            return Ok(Report {
                config,
                rows: vec![row],
                human: format!("h{}({params}) = {decimal}\n", sign_symbol(sign)),
                failure: None,
            });
        }
        bits *= 2;
    }
    Err(CliError::Failed(format!(
        "could not certify {digits} digits at {bits} bits"
    )))
}

fn sign_symbol(sign: Sign) -> &'static str {
    match sign {
        Sign::Minus => "-",
        Sign::Plus => "+",
    }
}

fn denom_error(e: DenomError) -> CliError {
    match e {
        DenomError::IntegralityViolation { .. } | DenomError::PrecisionExhausted { .. } => {
            CliError::Failed(e.to_string())
        }
        _ => invalid(e),
    }
}

fn cached_records(
    cache: Option<&RecordCache>,
    params: &QParams,
    sign: Sign,
    kind: FactorKind,
    n_max: usize,
    precision: Option<u64>,
) -> Option<Vec<ApproxRecord>> {
    let cache = cache?;
    (1..=n_max)
        .map(|n| cache.get(params, sign, kind, n, precision))
        .collect()
}

pub fn verify(
    args: &ParamArgs,
    sign: Sign,
    kind: FactorKind,
    n_max: usize,
    precision: Option<u64>,
    cache: Option<&RecordCache>,
) -> Result<Report, CliError> {
    let params = parse_params(args)?;
    if kind != FactorKind::General && params.special_case().is_none() {
        return Err(invalid(DenomError::MissingSpecialStructure(kind)));
    }
    if n_max == 0 {
        return Err(invalid("--nmax must be at least 1"));
    }
    let records = match cached_records(cache, &params, sign, kind, n_max, precision) {
        Some(r) => r,
        None => {
            let report = verify_range_with(&params, sign, kind, n_max, precision).map_err(denom_error)?;
            if let Some(c) = cache {
                for r in &report.records {
                    c.put(&params, precision, r)?;
                }
            }
            report.records
        }
    };
    let report = summarize(&params, sign, kind, n_max, records);

    let config = json!({
        "command": "verify",
        "params": to_value(&params),
        "sign": sign,
        "kind": kind,
        "n_max": n_max,
        "precision": precision,
    });
    let rows: Vec<Value> = report.records.iter().map(to_value).collect();

    let mut human = format!("{params}, sign {sign}, {kind} factor, n = 1..{n_max}\n");
    let _ = writeln!(
        human,
        "{:>4}  {:>10}  {:>10}  {:>12}  {:>9}",
        "n", "exponent", "b exponent", "log2 residual", "e integer"
    );
    for r in &report.records {
        let _ = writeln!(
            human,
            "{:>4}  {:>10.5}  {:>10.5}  {:>12.2}  {:>9}",
            r.n,
            r.exponent,
            r.b_exponent(params.p2()),
            r.residual.mid().log2_abs(),
            r.e_integral
        );
    }
    let ceiling = format!(
        "exponent at n = {n_max} {} the ceiling {:.4} + slack",
        if report.ceiling_ok { "within" } else { "above" },
        report.ceiling
    );
    let failure = if report.passed() {
        let _ = writeln!(
            human,
            "PASS: a, b integral and residual positive for every n; {ceiling}"
        );
        None
    } else {
        let bad: Vec<String> = report
            .records
            .iter()
            .filter(|r| !r.residual.is_positive())
            .map(|r| r.n.to_string())
            .collect();
        let msg = format!("residual not certified positive at n = {}", bad.join(", "));
        let _ = writeln!(human, "FAIL: {msg}");
        Some(msg)
    };
    Ok(Report {
        config,
        rows,
        human,
        failure,
    })
}

pub fn tables(which: u8) -> Result<Report, CliError> {
    let rows = table(which).map_err(invalid)?;
    let mut human = format!("Table {which}\n");
    for r in &rows {
        let _ = writeln!(
            human,
            "r2 = {:>2}   minus {} = {}   plus {} = {}",
            r.r2, r.minus, r.minus_decimal, r.plus, r.plus_decimal
        );
    }
    Ok(Report {
        config: json!({ "command": "tables", "which": which }),
        rows: rows.iter().map(to_value).collect(),
        human,
        failure: None,
    })
}

/// Shared shape of the two lemma checks.
fn lemma_report(
    name: &str,
    config: Value,
    n: u64,
    r: u64,
    check: impl Fn(u64, u64) -> Result<bool, qlambert::cyclotomic::CycloError>,
) -> Result<Report, CliError> {
    if n == 0 || r == 0 {
        return Err(invalid("--n and --r must be at least 1"));
    }
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for ni in 1..=n {
        for ri in 1..=r {
            let holds = check(ni, ri).map_err(invalid)?;
            if !holds {
                failed.push(format!("(n = {ni}, r = {ri})"));
            }
            rows.push(json!({ "n": ni, "r": ri, "holds": holds }));
        }
    }
    let total = rows.len();
    let (human, failure) = if failed.is_empty() {
        (
            format!("{name}: {total}/{total} cases hold for n <= {n}, r <= {r}\nPASS\n"),
            None,
        )
    } else {
        let msg = format!("{name} fails at {}", failed.join(", "));
        (format!("{msg}\nFAIL\n"), Some(msg))
    };
    Ok(Report {
        config,
        rows,
        human,
        failure,
    })
}

pub fn cyclo(cmd: CycloCommand) -> Result<Report, CliError> {
    match cmd {
        CycloCommand::LemmaA1 { n, r } => {
            let config = json!({ "command": "cyclo lemma-a1", "n": n, "r": r });
            lemma_report("Lemma A1", config, n, r, check_lemma_a1)
        }
        CycloCommand::LemmaA2 { n, r, sigma } => {
            if !is_prime(sigma) {
                return Err(invalid(format!("--sigma {sigma} is not prime")));
            }
            let config = json!({ "command": "cyclo lemma-a2", "n": n, "r": r, "sigma": sigma });
            lemma_report("Lemma A2", config, n, r, |ni, ri| check_lemma_a2(ni, ri, sigma))
        }
        CycloCommand::NiceP { p, r1, r2, sign, nmax } => {
            let base = parse_int("p", &p)?;
            if base <= BigInt::one() {
                return Err(invalid(format!("--p must be at least 2, got {base}")));
            }
            if r1 == 0 || r2 == 0 || num_integer::gcd(r1, r2) != 1 {
                return Err(invalid(format!("r1 = {r1} and r2 = {r2} must be positive and coprime")));
            }
            if nmax < 2 {
                return Err(invalid("--nmax must be at least 2"));
            }
            let rep = common_factor_threshold(&base, r1, r2, sign, nmax);
            let rows: Vec<Value> = rep
                .rows
                .iter()
                .map(|&(n, m, calm)| json!({ "n": n, "c_divides_m": m, "c_divides_calm": calm }))
                .collect();
            let human = match rep.threshold {
                Some(t) => format!("C_n divides both multiples for {t} <= n <= {nmax}\n"),
                None => format!("C_{nmax} does not divide both multiples\n"),
            };
            Ok(Report {
                config: json!({ "command": "cyclo nice-p", "p": base.to_string(), "r1": r1, "r2": r2, "sign": sign, "n_max": nmax }),
                rows,
                human,
                failure: None,
            })
        }
        CycloCommand::TotientSum {
            variant,
            a,
            b,
            big_n,
            tolerance,
        } => {
            let rep = totient_sum_check(a, b, variant, big_n).map_err(invalid)?;
            let variant_name = format!("{variant:?}").to_ascii_lowercase();
            let row = json!({
                "variant": variant_name,
                "a": a,
                "b": b,
                "N": big_n,
                "empirical": rep.empirical,
                "theoretical_coeff": rep.theoretical_coeff.to_string(),
                "theoretical": rep.theoretical,
                "rel_error": rep.rel_error,
            });
            let ok = rep.rel_error < tolerance;
            let human = format!(
                "{variant_name} a = {a} b = {b} N = {big_n}: {:.8} vs ({})/π² = {:.8}, relative error {:.3e}\n{}\n",
                rep.empirical,
                rep.theoretical_coeff,
                rep.theoretical,
                rep.rel_error,
                if ok { "PASS" } else { "FAIL" }
            );
            Ok(Report {
                config: json!({ "command": "cyclo totient-sum", "variant": variant_name, "a": a, "b": b, "N": big_n, "tolerance": tolerance }),
                rows: vec![row],
                human,
                failure: (!ok).then(|| format!("relative error {:.3e} exceeds {tolerance}", rep.rel_error)),
            })
        }
    }
}

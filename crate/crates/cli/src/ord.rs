//! `lcs ord`: evaluate, compare or divide ordinal expressions.

use std::cmp::Ordering;

use lcs_core::ordinal::oracle::{ocmp, oracle_eval, OracleOp, DEFAULT_PROBE_DEPTH};
use lcs_core::ordinal::{eval_with, parse_ordinal};
use lcs_core::{Error, Ordinal, Result};
use serde::Serialize;

use crate::output::Outcome;
use crate::source::split_args;

#[derive(Serialize)]
struct OrdReport {
    expr: String,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

fn call(expr: &str, name: &str) -> Result<Option<(Ordinal, Ordinal)>> {
    let Some(rest) = expr.strip_prefix(name) else {
        return Ok(None);
    };
    let Some(inner) = rest.trim_start().strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
        return Ok(None);
    };
    match split_args(inner).as_slice() {
        [a, b] => Ok(Some((parse_ordinal(a)?, parse_ordinal(b)?))),
        _ => Err(Error::Invalid(format!("{name} takes two ordinals"))),
    }
}

fn by_oracle(op: OracleOp, a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
    oracle_eval(op, a, b, DEFAULT_PROBE_DEPTH)
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "LT",
        Ordering::Equal => "EQ",
        Ordering::Greater => "GT",
    }
}

/// Oracle agreement: `Ok(true)` agree, `Ok(false)` disagree, `Err` inconclusive.
fn oracle_check(expr: &str) -> Result<bool> {
    if let Some((a, b)) = call(expr, "cmp")? {
        return Ok(ocmp(&a, &b) == a.cmp(&b));
    }
    if let Some((a, d)) = call(expr, "divmod")? {
        let (q, r) = a.divmod(&d)?;
        let back = by_oracle(OracleOp::Add, &by_oracle(OracleOp::Mul, &d, &q)?, &r)?;
        return Ok(ocmp(&back, &a) == Ordering::Equal && ocmp(&r, &d) == Ordering::Less);
    }
    let fast = parse_ordinal(expr)?;
    let slow = eval_with(expr, &by_oracle)?;
    Ok(ocmp(&fast, &slow) == Ordering::Equal)
}

pub fn run(expr: &str, oracle: bool) -> Result<Outcome> {
    let expr = expr.trim();
    let value = if let Some((a, b)) = call(expr, "cmp")? {
        ordering_name(a.cmp(&b)).to_string()
    } else if let Some((a, d)) = call(expr, "divmod")? {
        let (q, r) = a.divmod(&d)?;
        format!("({q}, {r})")
    } else {
        parse_ordinal(expr)?.to_string()
    };
    let mut lines = vec![value.clone()];
    let mut code = 0;
    let verdict = if oracle {
        let v = match oracle_check(expr) {
            Ok(true) => "agree".to_string(),
            Ok(false) => {
                code = 1;
                "disagree".to_string()
            }
            Err(e) => {
                code = 2;
                format!("inconclusive: {e}")
            }
        };
        lines.push(format!("oracle: {v}"));
        Some(v)
    } else {
        None
    };
    Outcome::new(
        lines,
        OrdReport {
            expr: expr.to_string(),
            value,
            oracle: verdict,
        },
        code,
    )
}

//! Independent validation oracle for ordinal arithmetic.
//!
//! Nothing here calls the Cantor-normal-form fast path in the parent
//! module: comparison, sums, products and powers used by the oracle are
//! re-derived locally, with different decompositions, so that agreement
//! between the two is evidence rather than tautology.
//!
//! `oracle_eval` follows the order-theoretic recursion on the right
//! argument: zero gives the base value, a successor `b+1` unfolds into the
//! defining identity (`a+(b+1) = (a+b)+1`, `a·(b+1) = a·b + a`,
//! `a^(b+1) = a^b·a`), and a limit `b` is resolved as the supremum of the
//! values at the fundamental sequence `b[n]`. The supremum is certified
//! against a bounded pool of notations: it must be the least pool notation
//! strictly above every probed value such that no smaller pool notation
//! escapes the probes. Pool candidates are taken relative to the common
//! prefix of the probed values, which keeps the pool small while still
//! letting large prefixes through. A candidate whose own fundamental
//! sequence overtakes the last probe at the same index is rejected: the
//! true supremum then lies outside the pool, and the answer is
//! inconclusive.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{Ordinal, Term, MAX_COEFF, MAX_DEPTH};
use crate::{Error, Result};

/// Coefficient bound for pool notations.
pub const POOL_COEFF: u64 = 8;
/// Maximum number of terms in a pool notation.
pub const POOL_TERMS: usize = 3;
/// Exponent nesting of the pool: exponents come from the depth-1 pool.
pub const POOL_DEPTH: usize = 2;
pub const DEFAULT_PROBE_DEPTH: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleOp {
    Add,
    Mul,
    Exp,
}

fn inconclusive(msg: impl Into<String>) -> Error {
    Error::OracleInconclusive(msg.into())
}

/// Ordinal comparison, written independently of `Ord for Ordinal`.
pub fn ocmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    let (ta, tb) = (a.terms(), b.terms());
    let mut i = 0;
    loop {
        match (ta.get(i), tb.get(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => {
                let e = ocmp(&x.exp, &y.exp);
                if e != Ordering::Equal {
                    return e;
                }
                if x.coeff != y.coeff {
                    return x.coeff.cmp(&y.coeff);
                }
            }
        }
        i += 1;
    }
}

fn lt(a: &Ordinal, b: &Ordinal) -> bool {
    ocmp(a, b) == Ordering::Less
}

fn mk(terms: Vec<Term>) -> Ordinal {
    Ordinal::from_terms_unchecked(terms)
}

fn nat(n: u64) -> Ordinal {
    if n == 0 {
        mk(vec![])
    } else {
        mk(vec![Term::new(mk(vec![]), n)])
    }
}

fn is_zero(a: &Ordinal) -> bool {
    a.terms().is_empty()
}

fn check_coeff(c: Option<u64>) -> Result<u64> {
    c.filter(|&c| c <= MAX_COEFF)
        .ok_or_else(|| inconclusive("coefficient overflow in oracle"))
}

// ---------------------------------------------------------------------------
// Secondary evaluator: stack-based sums, monomial-wise products, and powers
// via the exponent laws over the additive decomposition of the exponent.

/// Appends `t` to a term stack read as a left-to-right sum: smaller
/// trailing terms are absorbed, equal exponents merge.
fn absorb(stack: &mut Vec<Term>, t: &Term) -> Result<()> {
    while stack.last().is_some_and(|top| lt(&top.exp, &t.exp)) {
        stack.pop();
    }
    match stack.last_mut() {
        Some(top) if ocmp(&top.exp, &t.exp) == Ordering::Equal => {
            top.coeff = check_coeff(top.coeff.checked_add(t.coeff))?;
        }
        _ => stack.push(t.clone()),
    }
    Ok(())
}

fn alt_add(a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
    let mut stack: Vec<Term> = Vec::with_capacity(a.terms().len() + b.terms().len());
    stack.extend_from_slice(a.terms());
    for t in b.terms() {
        absorb(&mut stack, t)?;
    }
    Ok(mk(stack))
}

/// Sum of `a · ω^e · c` over the monomials of `b`, one stack throughout.
fn alt_mul(a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
    if is_zero(a) || is_zero(b) {
        return Ok(nat(0));
    }
    let first = &a.terms()[0];
    let mut stack: Vec<Term> = Vec::new();
    for t in b.terms() {
        if is_zero(&t.exp) {
            let lead = Term::new(first.exp.clone(), check_coeff(first.coeff.checked_mul(t.coeff))?);
            absorb(&mut stack, &lead)?;
            for u in &a.terms()[1..] {
                absorb(&mut stack, u)?;
            }
        } else {
            absorb(&mut stack, &Term::new(alt_add(&first.exp, &t.exp)?, t.coeff))?;
        }
    }
    Ok(mk(stack))
}

fn alt_pow_nat(a: &Ordinal, k: u64) -> Result<Ordinal> {
    let mut acc = nat(1);
    for _ in 0..k {
        acc = alt_mul(&acc, a)?;
        if acc.depth() > MAX_DEPTH {
            return Err(inconclusive("depth overflow in oracle"));
        }
    }
    Ok(acc)
}

/// `a^(ω^e)` for `e > 0`.
fn alt_pow_principal(a: &Ordinal, e: &Ordinal) -> Result<Ordinal> {
    match a.as_nat() {
        Some(0) => Ok(nat(0)),
        Some(1) => Ok(nat(1)),
        Some(_) => {
            // n^(ω^e) = ω^(ω^(e-1)) since ω^e = ω · ω^(e-1)
            let e_minus_one = left_minus_one(e);
            Ok(mk(vec![Term::new(
                mk(vec![Term::new(e_minus_one, 1)]),
                1,
            )]))
        }
        None => {
            let lead = a.terms()[0].exp.clone();
            let power = mk(vec![Term::new(e.clone(), 1)]);
            Ok(mk(vec![Term::new(alt_mul(&lead, &power)?, 1)]))
        }
    }
}

/// The `x` with `1 + x = e`, for `e > 0`.
fn left_minus_one(e: &Ordinal) -> Ordinal {
    match e.as_nat() {
        Some(n) => nat(n - 1),
        None => e.clone(),
    }
}

fn alt_pow(a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
    if is_zero(b) {
        return Ok(nat(1));
    }
    let mut acc = nat(1);
    for t in b.terms() {
        let factor = if is_zero(&t.exp) {
            alt_pow_nat(a, t.coeff)?
        } else {
            alt_pow_nat(&alt_pow_principal(a, &t.exp)?, t.coeff)?
        };
        acc = alt_mul(&acc, &factor)?;
        if acc.depth() > MAX_DEPTH {
            return Err(inconclusive("depth overflow in oracle"));
        }
    }
    Ok(acc)
}

fn alt_apply(op: OracleOp, a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
    match op {
        OracleOp::Add => alt_add(a, b),
        OracleOp::Mul => alt_mul(a, b),
        OracleOp::Exp => alt_pow(a, b),
    }
}

// ---------------------------------------------------------------------------
// Fundamental sequences.

/// The standard fundamental sequence of a limit ordinal at index `n`.
pub fn fundamental(b: &Ordinal, n: u64) -> Result<Ordinal> {
    let terms = b.terms();
    let last = terms
        .last()
        .filter(|t| !is_zero(&t.exp))
        .ok_or_else(|| inconclusive(format!("{b} is not a limit")))?;
    let mut head: Vec<Term> = terms[..terms.len() - 1].to_vec();
    if last.coeff > 1 {
        head.push(Term::new(last.exp.clone(), last.coeff - 1));
    }
    let e = &last.exp;
    let tail = if e.terms().last().is_some_and(|t| is_zero(&t.exp)) {
        // ω^(β+1)[n] = ω^β · n
        let mut pred_terms = e.terms().to_vec();
        let lt = pred_terms.last_mut().expect("successor exponent");
        if lt.coeff == 1 {
            pred_terms.pop();
        } else {
            lt.coeff -= 1;
        }
        if n == 0 {
            nat(0)
        } else {
            mk(vec![Term::new(mk(pred_terms), n)])
        }
    } else {
        // ω^λ[n] = ω^(λ[n])
        mk(vec![Term::new(fundamental(e, n)?, 1)])
    };
    alt_add(&mk(head), &tail)
}

// ---------------------------------------------------------------------------
// Notation pool.

/// Membership in the bounded notation pool of the given depth. Depth 0 is
/// the naturals up to [`POOL_COEFF`].
pub fn in_pool(v: &Ordinal, depth: usize) -> bool {
    if depth == 0 {
        return v.as_nat().is_some_and(|n| n <= POOL_COEFF);
    }
    v.terms().len() <= POOL_TERMS
        && v
            .terms()
            .iter()
            .all(|t| t.coeff <= POOL_COEFF && in_pool(&t.exp, depth - 1))
}

/// The least pool notation of the given depth strictly above `v`.
pub fn least_pool_above(v: &Ordinal, depth: usize) -> Option<Ordinal> {
    if depth == 0 {
        return match v.as_nat() {
            Some(n) if n < POOL_COEFF => Some(nat(n + 1)),
            _ => None,
        };
    }
    let terms = v.terms();
    let valid = |t: &Term| t.coeff <= POOL_COEFF && in_pool(&t.exp, depth - 1);
    let mut valid_prefix = 0;
    while valid_prefix < terms.len().min(POOL_TERMS) && valid(&terms[valid_prefix]) {
        valid_prefix += 1;
    }
    // Deviating later gives a smaller notation, so try the longest
    // agreeing prefix first.
    for k in (0..=valid_prefix).rev() {
        if k >= POOL_TERMS {
            continue;
        }
        let prefix = &terms[..k];
        let prev_exp = prefix.last().map(|t| &t.exp);
        let candidate = match terms.get(k) {
            None => {
                // v itself is the prefix: append the smallest possible term.
                if prev_exp.is_none_or(|e| !is_zero(e)) {
                    Some(Term::new(nat(0), 1))
                } else {
                    None
                }
            }
            Some(t) => {
                if t.coeff < POOL_COEFF && in_pool(&t.exp, depth - 1) {
                    Some(Term::new(t.exp.clone(), t.coeff + 1))
                } else {
                    least_pool_above(&t.exp, depth - 1)
                        .filter(|e| prev_exp.is_none_or(|p| lt(e, p)))
                        .map(|e| Term::new(e, 1))
                }
            }
        };
        if let Some(term) = candidate {
            let mut out = prefix.to_vec();
            out.push(term);
            return Some(mk(out));
        }
    }
    None
}

// ---------------------------------------------------------------------------

/// Evaluates `op(a, b)` by transfinite recursion on `b`, certifying every
/// limit step against the notation pool. `probe_depth` is the largest index
/// of the fundamental sequence that is probed; it must exceed the pool
/// coefficient bound for certification to be meaningful.
pub fn oracle_eval(op: OracleOp, a: &Ordinal, b: &Ordinal, probe_depth: u64) -> Result<Ordinal> {
    Oracle::new(probe_depth)?.eval(op, a, b)
}

type Key = (OracleOp, Ordinal, Ordinal);

/// A reusable evaluator that remembers every value it has certified, so
/// runs sharing left arguments and limit parts do the limit work once.
pub struct Oracle {
    depth: u64,
    memo: HashMap<Key, std::result::Result<Ordinal, String>>,
}

impl Oracle {
    pub fn new(probe_depth: u64) -> Result<Self> {
        if probe_depth <= POOL_COEFF {
            return Err(inconclusive(format!(
                "probe depth {probe_depth} does not exceed the pool coefficient bound {POOL_COEFF}"
            )));
        }
        Ok(Oracle { depth: probe_depth, memo: HashMap::new() })
    }

    pub fn eval(&mut self, op: OracleOp, a: &Ordinal, b: &Ordinal) -> Result<Ordinal> {
        // b = limit_part + k, k finite
        let terms = b.terms();
        let (limit_part, k) = match terms.last() {
            Some(t) if is_zero(&t.exp) => (mk(terms[..terms.len() - 1].to_vec()), t.coeff),
            _ => (b.clone(), 0),
        };
        let mut acc = if is_zero(&limit_part) {
            match op {
                OracleOp::Add => a.clone(),
                OracleOp::Mul => nat(0),
                OracleOp::Exp => nat(1),
            }
        } else {
            let depth = self.depth;
            self.remember((op, a.clone(), limit_part.clone()), |_| limit_step(op, a, &limit_part, depth))?
        };
        let mut arg = limit_part;
        for _ in 0..k {
            arg = successor(&arg);
            acc = self.remember((op, a.clone(), arg.clone()), |me| match op {
                OracleOp::Add => Ok(successor(&acc)),
                OracleOp::Mul => me.eval(OracleOp::Add, &acc, a),
                OracleOp::Exp => me.eval(OracleOp::Mul, &acc, a),
            })?;
        }
        Ok(acc)
    }

    fn remember(&mut self, key: Key, f: impl FnOnce(&mut Self) -> Result<Ordinal>) -> Result<Ordinal> {
        if let Some(r) = self.memo.get(&key) {
            return r.clone().map_err(Error::OracleInconclusive);
        }
        let r = f(self).map_err(|e| match e {
            Error::OracleInconclusive(m) => m,
            other => other.to_string(),
        });
        self.memo.insert(key, r.clone());
        r.map_err(Error::OracleInconclusive)
    }
}

fn successor(a: &Ordinal) -> Ordinal {
    let mut terms = a.terms().to_vec();
    match terms.last_mut() {
        Some(t) if is_zero(&t.exp) => t.coeff += 1,
        _ => terms.push(Term::new(nat(0), 1)),
    }
    mk(terms)
}

/// Supremum of `op(a, b[n])`. Both the fundamental sequence and the
/// operations are monotone in `b`, so the probed sequence is represented by
/// its first member and its last two members.
fn limit_step(op: OracleOp, a: &Ordinal, b: &Ordinal, depth: u64) -> Result<Ordinal> {
    let probe = |n: u64| -> Result<Ordinal> { alt_apply(op, a, &fundamental(b, n)?) };
    let first = probe(1)?;
    let last = probe(depth)?;
    if lt(&last, &first) {
        return Err(inconclusive(format!("probes of {op:?}({a}, {b}) not monotone")));
    }
    let common = first
        .terms()
        .iter()
        .zip(last.terms())
        .take_while(|(x, y)| x == y)
        .count();
    let prefix = mk(last.terms()[..common].to_vec());
    let rest = mk(last.terms()[common..].to_vec());
    let step = least_pool_above(&rest, POOL_DEPTH);
    // strictly increasing in the right argument unless a is 0, or 1 under exp
    let strict = match op {
        OracleOp::Add => true,
        OracleOp::Mul => !is_zero(a),
        OracleOp::Exp => a.as_nat().is_none_or(|n| n >= 2),
    };
    if strict && step.is_none() {
        return Err(inconclusive(format!("no pool notation above {rest} for {op:?}({a}, {b})")));
    }
    let penultimate = probe(depth - 1)?;
    if lt(&last, &penultimate) || lt(&penultimate, &first) {
        return Err(inconclusive(format!("probes of {op:?}({a}, {b}) not monotone")));
    }
    if ocmp(&penultimate, &last) == Ordering::Equal {
        // eventually constant sequence: the supremum is attained
        return Ok(last);
    }
    let step = step.ok_or_else(|| {
        inconclusive(format!("no pool notation above {rest} for {op:?}({a}, {b})"))
    })?;
    // Every pool notation below `step` is <= rest, so every smaller
    // candidate is dominated by the last probe.
    let candidate = alt_add(&prefix, &step)?;
    let is_limit = candidate.terms().last().is_some_and(|t| !is_zero(&t.exp));
    if !is_limit || !lt(&last, &candidate) {
        return Err(inconclusive(format!(
            "candidate {candidate} does not certify the supremum of {op:?}({a}, {b})"
        )));
    }
    // The supremum may lie outside the pool, strictly between the probes and
    // the candidate; then the candidate's own sequence overtakes the probes
    // by the same index.
    if lt(&last, &fundamental(&candidate, depth)?) {
        return Err(inconclusive(format!(
            "supremum of {op:?}({a}, {b}) lies below the pool candidate {candidate}"
        )));
    }
    Ok(candidate)
}

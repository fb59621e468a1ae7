use std::sync::Arc;

use lcs_core::constructions::{block_family, BlockFamily, SegmentFamily};
use lcs_core::exec::Exec;
use lcs_core::family::{rank, verify_property, Family, Property, SetFamily};
use lcs_core::ordinal::oracle::{Oracle, OracleOp, DEFAULT_PROBE_DEPTH};
use lcs_core::ordinal::{Ordinal, Term};
use lcs_core::space::ordinal_space_check;
use lcs_core::{Budget, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

/// Every CNF ordinal with at most three terms, exponents from
/// `{0, 1, 2, 3, w, w+1, w^2}` and coefficients at most 3.
fn corpus() -> Vec<Ordinal> {
    let exps: Vec<Ordinal> = ["w^2", "w+1", "w", "3", "2", "1", "0"].map(o).to_vec();
    let mut out = vec![Ordinal::zero()];
    let mut frontier: Vec<(usize, Vec<Term>)> = vec![(0, Vec::new())];
    for _ in 0..3 {
        let mut next = Vec::new();
        for (start, terms) in &frontier {
            for (i, e) in exps.iter().enumerate().skip(*start) {
                for c in 1..=3 {
                    let mut t = terms.clone();
                    t.push(Term::new(e.clone(), c));
                    out.push(Ordinal::from_terms(t.clone()).unwrap());
                    next.push((i + 1, t));
                }
            }
        }
        frontier = next;
    }
    out
}

#[derive(Default)]
struct Tally {
    compared: usize,
    skipped: usize,
    mismatches: Vec<String>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.compared += other.compared;
        self.skipped += other.skipped;
        self.mismatches.extend(other.mismatches);
        self
    }
}

pub fn oracle_corpus() -> Result<String, String> {
    let c = corpus();
    if c.len() != 1 + 21 + 189 + 945 {
        return Err(format!("corpus has {} ordinals", c.len()));
    }
    let rows = Exec::Parallel.map(&c, |a| {
        let mut t = Tally::default();
        let mut oracle = Oracle::new(DEFAULT_PROBE_DEPTH).expect("probe depth above the pool bound");
        for b in &c {
            for (op, fast) in [
                (OracleOp::Add, a.checked_add(b)),
                (OracleOp::Mul, a.checked_mul(b)),
                (OracleOp::Exp, a.pow(b)),
            ] {
                match (oracle.eval(op, a, b), fast) {
                    (Ok(slow), Ok(fast)) if slow == fast => t.compared += 1,
                    (Ok(slow), Ok(fast)) => {
                        t.compared += 1;
                        t.mismatches.push(format!("{op:?}({a}, {b}): {fast} vs {slow}"));
                    }
                    // add and mul never overflow on this corpus; exp is compared where both conclude
                    (Err(_), _) | (_, Err(_)) if op == OracleOp::Exp => t.skipped += 1,
                    (Err(e), _) | (_, Err(e)) => t.mismatches.push(format!("{op:?}({a}, {b}): {e}")),
                }
            }
        }
        t
    });
    let t = rows.into_iter().fold(Tally::default(), Tally::merge);
    let summary = format!(
        "{} ordinals, {} comparisons, {} exp cases inconclusive, {} mismatches",
        c.len(),
        t.compared,
        t.skipped,
        t.mismatches.len()
    );
    match t.mismatches.first() {
        None => Ok(summary),
        Some(m) => Err(format!("{summary}; first: {m}")),
    }
}

fn random_below_omega6(rng: &mut ChaCha8Rng) -> Ordinal {
    let mut exps: Vec<u64> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(0..6)).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    let terms = exps
        .into_iter()
        .map(|e| Term::new(Ordinal::nat(e), rng.gen_range(1..=9)))
        .collect();
    Ordinal::from_terms(terms).unwrap()
}

pub fn algebraic_laws() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    let mut overflow = 0;
    for _ in 0..10_000 {
        let (a, b, c) = (
            random_below_omega6(&mut rng),
            random_below_omega6(&mut rng),
            random_below_omega6(&mut rng),
        );
        let laws = || -> lcs_core::Result<Vec<(&'static str, Ordinal, Ordinal)>> {
            Ok(vec![
                ("add assoc", a.checked_add(&b)?.checked_add(&c)?, a.checked_add(&b.checked_add(&c)?)?),
                ("mul assoc", a.checked_mul(&b)?.checked_mul(&c)?, a.checked_mul(&b.checked_mul(&c)?)?),
                ("distrib", a.checked_mul(&b.checked_add(&c)?)?, a.checked_mul(&b)?.checked_add(&a.checked_mul(&c)?)?),
                ("exp sum", a.pow(&b.checked_add(&c)?)?, a.pow(&b)?.checked_mul(&a.pow(&c)?)?),
                ("exp product", a.pow(&b.checked_mul(&c)?)?, a.pow(&b)?.pow(&c)?),
            ])
        };
        match laws() {
            Ok(ls) => {
                for (name, l, r) in ls {
                    if l != r {
                        failures.push(format!("{name} at ({a}, {b}, {c})"));
                    }
                }
            }
            Err(Error::RepresentationOverflow(_)) => overflow += 1,
            Err(e) => failures.push(format!("({a}, {b}, {c}): {e}")),
        }
    }
    let mut divmod_fail = 0;
    for _ in 0..10_000 {
        let (a, d) = (random_below_omega6(&mut rng), random_below_omega6(&mut rng));
        if d.is_zero() {
            continue;
        }
        let (q, r) = a.divmod(&d).map_err(|e| e.to_string())?;
        if r >= d || &(&d * &q) + &r != a {
            divmod_fail += 1;
        }
    }
    let summary = format!(
        "10000 triples ({overflow} past the coefficient range), {} law failures, {divmod_fail} divmod failures",
        failures.len()
    );
    if failures.is_empty() && divmod_fail == 0 && overflow < 1000 {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", failures.first().map_or("", |s| s.as_str())))
    }
}

/// Index `α` of a block, `log_κ(len) - 1` for explicit blocks.
fn block_alpha(f: &dyn SetFamily, blocks: Option<&BlockFamily>, kappa: u64, m: &lcs_core::PointSet) -> Option<u64> {
    match blocks {
        Some(b) => match b.block_index(m) {
            Some((alpha, _)) => Some(alpha as u64),
            None if m == &lcs_core::PointSet::below(f.ground().clone()) => Some(b.gamma() - 1),
            None => None,
        },
        None => {
            let mut len = m.len()? as u64;
            let mut j = 0;
            while len > 1 && len.is_multiple_of(kappa) {
                len /= kappa;
                j += 1;
            }
            (len == 1 && j >= 1).then(|| j - 1)
        }
    }
}

pub fn block_structure() -> Result<String, String> {
    let mut lines = Vec::new();
    for (k, g, bound) in [("w", 2u64, "w*32"), ("w", 3, "w^2*3"), ("2", 2, "4"), ("3", 3, "27")] {
        let f: Family = block_family(&o(k), &Ordinal::nat(g)).map_err(|e| e.to_string())?;
        let blocks = (k == "w").then(|| BlockFamily::new(g));
        let budget = Budget { samples: 1000, ..Budget::with_bound(o(bound)) };
        for p in [Property::CapClosed, Property::TreeLike, Property::WellFounded] {
            let v = verify_property(f.as_ref(), p, &budget);
            if !v.is_verified() {
                return Err(format!("{v}"));
            }
        }
        let members = f.enumerate(&budget.bound, budget.cap).members;
        let kappa = o(k).as_nat().unwrap_or(0);
        let mut checked = 0;
        for m in &members {
            let alpha = block_alpha(f.as_ref(), blocks.as_ref(), kappa, m)
                .ok_or_else(|| format!("{m} is not a block of {}", f.label()))?;
            let cert = rank(f.as_ref(), m, &budget).map_err(|e| e.to_string())?;
            if cert.rank != Ordinal::nat(alpha) {
                return Err(format!("{}: rank({m}) = {} but index {alpha}", f.label(), cert.rank));
            }
            checked += 1;
        }
        lines.push(format!("{} {checked} ranks", f.label()));
    }
    Ok(format!("3 properties verified; {}", lines.join(", ")))
}

pub fn ordinal_spaces() -> Result<String, String> {
    let budget = Budget::with_bound(Ordinal::nat(128));
    let mut divergence = false;
    for t in ["5", "17", "w", "w+1", "w*2"] {
        let alpha = o(t);
        let v = ordinal_space_check(&SegmentFamily::new(alpha.clone()), &alpha, &budget);
        if !v.is_verified() {
            return Err(format!("{v}"));
        }
        if t == "w+1" {
            divergence = v.notes.iter().any(|n| n.contains("divergence: [0, w + 1) has level 0"));
        }
    }
    if !divergence {
        return Err("the w+1 instance did not report the level 0, rank > 0 segment".into());
    }
    Ok("5 order types verified; w+1 shows [0, w + 1) at level 0 with rank w + 1".into())
}

pub fn arc<F: SetFamily + 'static>(f: F) -> Family {
    Arc::new(f)
}

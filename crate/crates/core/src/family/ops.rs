//! Predicates, rank, restriction, Δ, splitting sets and the
//! characterization check.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Budget, ExplicitFamily, Restriction, SetFamily, Verdict};
use crate::ordinal::{grid, Ordinal};
use crate::pointset::PointSet;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    CapClosed,
    TreeLike,
    ChainClosed,
    WellFounded,
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cap_closed" => Ok(Property::CapClosed),
            "tree_like" => Ok(Property::TreeLike),
            "chain_closed" => Ok(Property::ChainClosed),
            "well_founded" => Ok(Property::WellFounded),
            _ => Err(Error::Invalid(format!(
                "unknown property {s:?} (cap_closed, tree_like, chain_closed, well_founded)"
            ))),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::CapClosed => "cap_closed",
            Property::TreeLike => "tree_like",
            Property::ChainClosed => "chain_closed",
            Property::WellFounded => "well_founded",
        })
    }
}

/// Index pairs `i < j`: all of them when few enough, otherwise a seeded sample.
pub(crate) fn sample_pairs(n: usize, samples: usize, seed: u64) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    let total = n * (n - 1) / 2;
    if total <= samples {
        return (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            (i.min(j), i.max(j))
        })
        .collect()
}

pub fn verify_property(f: &dyn SetFamily, prop: Property, budget: &Budget) -> Verdict {
    let check = format!("{prop}({})", f.label());
    let listing = f.enumerate(&budget.bound, budget.cap);
    let m = &listing.members;
    let mut undecided = 0usize;
    let scope = format!(
        "{} members enumerated ({})",
        m.len(),
        if listing.complete { "exhaustive" } else { "truncated" }
    );
    match prop {
        Property::CapClosed | Property::TreeLike => {
            for (i, j) in sample_pairs(m.len(), budget.samples, budget.seed) {
                let (a, b) = (&m[i], &m[j]);
                let meet = match a.intersect(b) {
                    Ok(x) => x,
                    Err(_) => {
                        undecided += 1;
                        continue;
                    }
                };
                if prop == Property::CapClosed {
                    match f.contains(&meet) {
                        Ok(true) => {}
                        Ok(false) if meet.is_empty() => {}
                        Ok(false) => return Verdict::falsified(check, &budget.bound, &[a, b, &meet]),
                        Err(_) => undecided += 1,
                    }
                } else {
                    let nested = meet.is_empty() || meet == *a || meet == *b;
                    if !nested {
                        return Verdict::falsified(check, &budget.bound, &[a, b]);
                    }
                }
            }
        }
        Property::ChainClosed => {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            let rounds = budget.samples.min(m.len() * 4);
            for _ in 0..rounds {
                let mut order: Vec<usize> = (0..m.len()).collect();
                order.shuffle(&mut rng);
                let mut chain: Vec<&PointSet> = Vec::new();
                for &k in &order {
                    let c = &m[k];
                    let comparable = chain.iter().all(|d| {
                        c.subset(d).unwrap_or(false) || d.subset(c).unwrap_or(false)
                    });
                    if comparable && rng.gen_bool(0.6) {
                        chain.push(c);
                    }
                }
                let Some(first) = chain.first() else { continue };
                let union = chain[1..]
                    .iter()
                    .try_fold((*first).clone(), |acc, c| acc.union(c));
                match union.and_then(|u| f.contains(&u).map(|ok| (u, ok))) {
                    Ok((_, true)) => {}
                    Ok((u, false)) => {
                        let mut w: Vec<String> = chain.iter().map(|c| c.to_string()).collect();
                        w.push(format!("union {u}"));
                        return Verdict::falsified(check, &budget.bound, &w);
                    }
                    Err(_) => undecided += 1,
                }
            }
        }
        Property::WellFounded => {
            return Verdict::verified(check, &budget.bound)
                .note(scope)
                .note("strict inclusion is a strict order on the enumerated members");
        }
    }
    if undecided > 0 {
        return Verdict::inconclusive(check, &budget.bound, format!("{undecided} comparisons undecidable"))
            .note(scope);
    }
    Verdict::verified(check, &budget.bound).note(scope)
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub member: PointSet,
    pub rank: Ordinal,
    /// `exact` (full down-set recursion) or `formula` (closed form, sampled).
    pub method: String,
    /// A ⊂-chain ending at `member` realizing the rank.
    pub chain: Vec<PointSet>,
    /// Proper sub-members compared against the claim.
    pub checked: usize,
    pub complete: bool,
}

fn exact_rank(f: &dyn SetFamily, a: &PointSet, e: &ExplicitFamily) -> Result<RankCertificate> {
    let r = e
        .rank_of(a)
        .ok_or_else(|| Error::PreconditionFailure(format!("{a} is not a member of {}", f.label())))?;
    let mut chain = vec![a.clone()];
    let mut cur = a.clone();
    for level in (0..r).rev() {
        let next = e
            .members()
            .iter()
            .find(|b| e.rank_of(b) == Some(level) && **b != cur && b.subset(&cur).unwrap_or(false))
            .cloned()
            .ok_or_else(|| Error::CertificateFailure(format!("no rank-{level} member below {cur}")))?;
        chain.push(next.clone());
        cur = next;
    }
    chain.reverse();
    Ok(RankCertificate {
        member: a.clone(),
        rank: Ordinal::nat(r),
        method: "exact".into(),
        chain,
        checked: e.len(),
        complete: true,
    })
}

/// `rk(A) = sup{rk(B) + 1 : B ⊊ A}` with a certificate.
pub fn rank(f: &dyn SetFamily, a: &PointSet, budget: &Budget) -> Result<RankCertificate> {
    if !f.contains(a)? {
        return Err(Error::PreconditionFailure(format!("{a} is not a member of {}", f.label())));
    }
    if let Some(e) = f.as_explicit() {
        return exact_rank(f, a, e);
    }
    let below = f.members_below(a, budget.cap);
    if let Some(claim) = f.rank_formula(a) {
        let mut checked = 0;
        for b in below.members.iter().filter(|b| *b != a) {
            let rb = f.rank_formula(b);
            if rb.as_ref().is_none_or(|r| *r >= claim) {
                return Err(Error::CertificateFailure(format!(
                    "{b} ⊊ {a} has rank {} but {a} claims {claim}",
                    rb.map_or("unknown".to_string(), |r| r.to_string())
                )));
            }
            checked += 1;
        }
        let mut chain = vec![a.clone()];
        if let Some(r) = claim.as_nat() {
            let mut cur = a.clone();
            for level in (0..r).rev() {
                let sub = f.members_below(&cur, budget.cap);
                let lv = Ordinal::nat(level);
                let next = sub
                    .members
                    .iter()
                    .find(|b| **b != cur && f.rank_formula(b).as_ref() == Some(&lv))
                    .cloned()
                    .ok_or_else(|| {
                        Error::CertificateFailure(format!(
                            "{a} claims rank {claim} but no rank-{level} member lies below {cur}"
                        ))
                    })?;
                chain.push(next.clone());
                cur = next;
            }
        }
        chain.reverse();
        return Ok(RankCertificate {
            member: a.clone(),
            rank: claim,
            method: "formula".into(),
            chain,
            checked,
            complete: below.complete,
        });
    }
    if below.complete {
        let e = ExplicitFamily::new(f.label(), f.ground().clone(), below.members)?;
        return exact_rank(f, a, &e);
    }
    Err(Error::TruncationRequired(format!(
        "down-set of {a} exceeds the enumeration cap and {} has no rank formula",
        f.label()
    )))
}

/// Exhibits `n` distinct members `B ⊊ A` of rank `α`.
pub fn rk_good_witness(f: &dyn SetFamily, a: &PointSet, alpha: &Ordinal, n: usize, budget: &Budget) -> Verdict {
    let check = format!("rk_good({a}, {alpha}, n={n})");
    let below = f.members_below(a, budget.cap);
    let mut found = Vec::new();
    for b in below.members.iter().filter(|b| *b != a) {
        let r = match f.rank_formula(b) {
            Some(r) => Some(r),
            None => rank(f, b, budget).ok().map(|c| c.rank),
        };
        if r.as_ref() == Some(alpha) {
            found.push(b.clone());
            if found.len() == n {
                let mut v = Verdict::verified(check, &budget.bound);
                v.witness = found.iter().map(|b| b.to_string()).collect();
                return v.note("finite evidence only: rk-goodness asks for infinitely many");
            }
        }
    }
    if below.complete {
        Verdict::falsified(check, &budget.bound, &found).note(format!("only {} found", found.len()))
    } else {
        Verdict::inconclusive(check, &budget.bound, format!("only {} found before the cap", found.len()))
    }
}

pub fn restrict(f: &dyn SetFamily, xi: &Ordinal, budget: &Budget) -> Restriction {
    f.restrict(xi, budget.cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaOutcome {
    /// First grid point where the restrictions differ; `exact` when the
    /// preceding grid point is its predecessor.
    Found { delta: Ordinal, exact: bool },
    EqualUpToBound { bound: Ordinal },
    Inconclusive { at: Ordinal, reason: String },
}

impl DeltaOutcome {
    pub fn value(&self) -> Option<&Ordinal> {
        match self {
            DeltaOutcome::Found { delta, .. } => Some(delta),
            _ => None,
        }
    }
}

impl fmt::Display for DeltaOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaOutcome::Found { delta, exact: true } => write!(f, "{delta}"),
            DeltaOutcome::Found { delta, exact: false } => write!(f, "<= {delta}"),
            DeltaOutcome::EqualUpToBound { bound } => write!(f, "equal up to {bound}"),
            DeltaOutcome::Inconclusive { at, reason } => write!(f, "inconclusive at {at}: {reason}"),
        }
    }
}

/// `Δ(F0, F1) = min{δ : F0↾δ ≠ F1↾δ}`, searched over the ordinal grid of
/// the bound. Restrictions agree below Δ and differ from Δ on.
pub fn delta(f0: &dyn SetFamily, f1: &dyn SetFamily, budget: &Budget) -> DeltaOutcome {
    let candidates = grid(&budget.bound, budget.digits(), budget.cap);
    delta_over(f0, f1, &candidates, budget.cap)
}

pub fn delta_over(f0: &dyn SetFamily, f1: &dyn SetFamily, candidates: &[Ordinal], cap: usize) -> DeltaOutcome {
    for (k, d) in candidates.iter().enumerate() {
        let r0 = f0.restrict(d, cap);
        let r1 = f1.restrict(d, cap);
        match r0.same_family(&r1) {
            Some(true) => continue,
            Some(false) if r0.complete && r1.complete => {
                let exact = k == 0 || candidates[k - 1].succ() == *d;
                return DeltaOutcome::Found {
                    delta: d.clone(),
                    exact,
                };
            }
            Some(false) => {
                return DeltaOutcome::Inconclusive {
                    at: d.clone(),
                    reason: "restriction truncated".into(),
                }
            }
            None => {
                return DeltaOutcome::Inconclusive {
                    at: d.clone(),
                    reason: "mixed starred comparison of infinite traces".into(),
                }
            }
        }
    }
    DeltaOutcome::EqualUpToBound {
        bound: candidates.last().cloned().unwrap_or_default(),
    }
}

/// `S(α, β) = ∪{A ∈ F : α ∈ A, β ∉ A}`.
pub fn split(f: &dyn SetFamily, alpha: &Ordinal, beta: &Ordinal) -> Result<PointSet> {
    if alpha == beta {
        return Ok(PointSet::empty());
    }
    f.containing(alpha)
        .into_iter()
        .filter(|c| !c.member(beta))
        .try_fold(PointSet::empty(), |acc, c| acc.union(&c))
}

/// Both inclusions of `F ∖ {∅} = {ground} ∪ {S(α, β)} ∖ {∅}` below the bound.
pub fn char_check(f: &dyn SetFamily, budget: &Budget) -> Verdict {
    let check = format!("char({})", f.label());
    let ground = PointSet::below(f.ground().clone());
    let gates = [
        verify_property(f, Property::TreeLike, budget),
        verify_property(f, Property::ChainClosed, budget),
        verify_property(f, Property::WellFounded, budget),
    ];
    for g in &gates {
        if !g.is_verified() {
            return Verdict::inconclusive(check, &budget.bound, format!("precondition violation: {g}; check skipped"));
        }
    }
    if !f.contains(&ground).unwrap_or(false) {
        return Verdict::inconclusive(check, &budget.bound, "precondition violation: ground is not a member; check skipped");
    }
    let listing = f.enumerate(&budget.bound, budget.cap);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut recovered = 0usize;
    for a in listing.members.iter().filter(|a| !a.is_empty() && **a != ground) {
        let alpha = a.min_point().expect("nonempty");
        let ups: Vec<PointSet> = f
            .containing(&alpha)
            .into_iter()
            .filter(|d| d != a && a.subset(d).unwrap_or(false))
            .collect();
        let Some(d) = ups
            .iter()
            .find(|d| ups.iter().all(|e| d.subset(e).unwrap_or(false)))
        else {
            return Verdict::falsified(check, &budget.bound, &[a]).note("no least strict superset");
        };
        let Some(beta) = d.first_outside(a) else {
            return Verdict::inconclusive(check, &budget.bound, format!("no point of {d} outside {a} found"));
        };
        let (pts, _) = a.enumerate_below(&a.strict_sup().unwrap_or_default(), 64);
        let other = pts.choose(&mut rng).cloned().unwrap_or_else(|| alpha.clone());
        for al in [&alpha, &other] {
            match split(f, al, &beta) {
                Ok(s) if s == *a => {}
                Ok(s) => {
                    return Verdict::falsified(check, &budget.bound, &[a.to_string(), al.to_string(), beta.to_string(), s.to_string()])
                        .note("member is not recovered as S(alpha, beta)")
                }
                Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
            }
        }
        recovered += 1;
    }
    let pool: Vec<Ordinal> = grid(f.ground(), budget.digits(), budget.cap)
        .into_iter()
        .filter(|p| p < f.ground())
        .collect();
    let mut splits = 0usize;
    if !pool.is_empty() {
        for _ in 0..budget.samples {
            let al = pool.choose(&mut rng).expect("nonempty");
            let be = pool.choose(&mut rng).expect("nonempty");
            match split(f, al, be) {
                Ok(s) if s.is_empty() || f.contains(&s).unwrap_or(false) => splits += 1,
                Ok(s) => {
                    return Verdict::falsified(check, &budget.bound, &[al.to_string(), be.to_string(), s.to_string()])
                        .note("S(alpha, beta) is neither empty nor a member")
                }
                Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
            }
        }
    }
    Verdict::verified(check, &budget.bound)
        .note(format!("{recovered} members recovered as splitting sets"))
        .note(format!("{splits} sampled splitting sets are members or empty"))
}

//! Compactness, subspace, ordinal-space and star-level checks.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::isolation_witness;
use crate::family::{star, Budget, Family, SetFamily, Verdict};
use crate::ordinal::{grid, Ordinal};
use crate::pointset::PointSet;
use crate::{Error, Result};

/// Points of a basic neighbourhood needed by the star-level check.
const Z_POINTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Piece {
    Up(PointSet),
    Co(PointSet),
}

impl Piece {
    fn covers(&self, d: &PointSet) -> bool {
        match self {
            Piece::Up(p) => d.subset(p).unwrap_or(false),
            Piece::Co(c) => !d.subset(c).unwrap_or(true),
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::Up(p) => write!(f, "[{p}]"),
            Piece::Co(c) => write!(f, "X - [{c}]"),
        }
    }
}

/// Finite subcover of `[x]`: an `Up` piece above `x`, or a `Co` piece
/// missing `x` followed by a subcover of `[x ∩ C]`.
fn subcover(f: &dyn SetFamily, x: &PointSet, cover: &[Piece]) -> Result<Option<Vec<Piece>>> {
    if let Some(p) = cover.iter().find(|p| matches!(p, Piece::Up(_)) && p.covers(x)) {
        return Ok(Some(vec![p.clone()]));
    }
    let Some(Piece::Co(c)) = cover.iter().find(|p| matches!(p, Piece::Co(_)) && p.covers(x)) else {
        return Ok(None);
    };
    let rest = x.intersect(c)?;
    let mut out = vec![Piece::Co(c.clone())];
    if rest.is_empty() && !f.contains(&rest)? {
        return Ok(Some(out));
    }
    if !f.contains(&rest)? {
        return Err(Error::CertificateFailure(format!("{x} ∩ {c} = {rest} is not a member")));
    }
    match subcover(f, &rest, cover)? {
        Some(more) => {
            out.extend(more);
            Ok(Some(out))
        }
        None => Ok(None),
    }
}

/// Seeded subbase covers of `[A]` each admit a finite subcover.
pub fn compact_spotcheck(f: &dyn SetFamily, a: &PointSet, budget: &Budget) -> Verdict {
    let check = format!("compact({a})");
    match f.contains(a) {
        Ok(true) => {}
        Ok(false) => return Verdict::inconclusive(check, &budget.bound, format!("{a} is not a member")),
        Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
    }
    let down = f.members_below(a, budget.cap);
    let mut pool = f.enumerate(&budget.bound, budget.cap).members;
    pool.extend(down.members.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let trials = budget.samples.clamp(1, 32);
    for _ in 0..trials {
        let mut cover: Vec<Piece> = pool
            .choose_multiple(&mut rng, pool.len().min(6))
            .map(|m| if rng.gen_bool(0.5) { Piece::Up(m.clone()) } else { Piece::Co(m.clone()) })
            .collect();
        cover.shuffle(&mut rng);
        for d in &down.members {
            if !cover.iter().any(|p| p.covers(d)) {
                cover.push(Piece::Up(d.clone()));
            }
        }
        let sub = match subcover(f, a, &cover) {
            Ok(Some(s)) => s,
            Ok(None) => {
                return Verdict::inconclusive(check, &budget.bound, "recursion left the enumerated members")
            }
            Err(e @ Error::CertificateFailure(_)) => {
                return Verdict::falsified(check, &budget.bound, &cover).note(e.to_string())
            }
            Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
        };
        if let Some(d) = down.members.iter().find(|d| !sub.iter().any(|p| p.covers(d))) {
            let mut w: Vec<String> = sub.iter().map(|p| p.to_string()).collect();
            w.push(format!("uncovered {d}"));
            return Verdict::falsified(check, &budget.bound, &w);
        }
    }
    Verdict::verified(check, &budget.bound).note(format!("{trials} covers, {} points", down.members.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceMode {
    Open,
    Closed,
}

/// `X(sub)` open or closed in `X(whole)`, on sampled members.
pub fn subspace_check(sub: &dyn SetFamily, whole: &dyn SetFamily, mode: SubspaceMode, budget: &Budget) -> Verdict {
    let check = format!(
        "{}_subspace({} in {})",
        if mode == SubspaceMode::Open { "open" } else { "closed" },
        sub.label(),
        whole.label()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let pick = |v: Vec<PointSet>, rng: &mut ChaCha8Rng| -> Vec<PointSet> {
        let n = budget.samples.min(v.len());
        v.choose_multiple(rng, n).cloned().collect()
    };
    let subs = sub.enumerate(&budget.bound, budget.cap).members;
    for a in &subs {
        match whole.contains(a) {
            Ok(true) => {}
            Ok(false) => return Verdict::falsified(check, &budget.bound, &[a]).note("not a member of the whole family"),
            Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
        }
    }
    let mut checked = 0;
    match mode {
        SubspaceMode::Open => {
            for a in pick(subs, &mut rng) {
                for b in whole.members_below(&a, budget.cap).members {
                    if !sub.contains(&b).unwrap_or(false) {
                        return Verdict::falsified(check, &budget.bound, &[&a, &b])
                            .note("a neighbourhood in the whole family leaves the subspace");
                    }
                }
                checked += 1;
            }
        }
        SubspaceMode::Closed => {
            let outside: Vec<PointSet> = whole
                .enumerate(&budget.bound, budget.cap)
                .members
                .into_iter()
                .filter(|b| !sub.contains(b).unwrap_or(true))
                .collect();
            for b in pick(outside, &mut rng) {
                // a complete down-set always yields a cover
                if isolation_witness(whole, &b, &[], budget).is_none() {
                    return Verdict::inconclusive(check, &budget.bound, format!("no separating neighbourhood for {b}"));
                }
                checked += 1;
            }
        }
    }
    Verdict::verified(check, &budget.bound).note(format!("{checked} members checked"))
}

fn seg(x: &Ordinal) -> PointSet {
    PointSet::below(x.clone())
}

/// `X(F) ≅ α + 1` for the initial segments `T_x = [0, x)`, `x ≤ α`, on the
/// ordinal grid of the bound.
pub fn ordinal_space_check(f: &dyn SetFamily, alpha: &Ordinal, budget: &Budget) -> Verdict {
    let check = format!("ordinal_space({alpha})");
    let xs = grid(alpha, budget.digits(), budget.cap);
    let mut notes = Vec::new();
    for x in &xs {
        let t = seg(x);
        if !f.contains(&t).unwrap_or(false) {
            return Verdict::falsified(check, &budget.bound, &[t]).note("initial segment missing");
        }
        if !x.is_limit() {
            let bs: Vec<PointSet> = x.pred().map(|p| seg(&p)).into_iter().collect();
            let w = f.nbhd(&t, &bs, budget.cap);
            if !w.complete || w.members != [t.clone()] {
                let mut wit = vec![t.to_string()];
                wit.extend(w.members.iter().map(|m| m.to_string()));
                return Verdict::falsified(check, &budget.bound, &wit).note("successor segment not isolated by its predecessor");
            }
            if x.pred().is_some_and(|p| p.is_limit()) {
                notes.push(format!("divergence: {t} has level 0 and rank {x}"));
            }
            continue;
        }
        if let Some(bs) = isolation_witness(f, &t, &[], budget) {
            let mut wit = vec![t.to_string()];
            wit.extend(bs.iter().map(|b| b.to_string()));
            return Verdict::falsified(check, &budget.bound, &wit).note("limit segment isolated");
        }
        for y in xs.iter().filter(|y| *y < x) {
            let w = f.nbhd(&t, &[seg(y)], budget.cap);
            let inside = |z: &Ordinal| w.members.contains(&seg(z));
            let stray = w.members.iter().find(|m| {
                m.strict_sup().is_none_or(|s| s <= *y || s > *x) || !m.subset(&t).unwrap_or(false)
            });
            if !inside(&y.succ()) || !xs.iter().filter(|z| *z > y && *z <= x).all(inside) || stray.is_some() {
                return Verdict::falsified(check, &budget.bound, &[t.to_string(), seg(y).to_string()])
                    .note("neighbourhood is not a final segment");
            }
        }
    }
    let mut v = Verdict::verified(check, &budget.bound).note(format!("{} segments", xs.len()));
    v.notes.extend(notes);
    v
}

/// Star-level evidence for a family of cofinal subsets of its ground.
///
/// For sampled isolated `A` with witness `Bs`, `η` is the least point of `A`
/// outside every `Bᵢ`; the traces `A ∩ ξ`, `η < ξ`, must be star members
/// that form a chain, avoid `A ∩ η` and every `Bᵢ`, and be the only members
/// of `W*(A; A ∩ η, Bs)`. Isolated star members must be finite.
pub fn star_level_check(f: &Family, budget: &Budget) -> Result<Verdict> {
    let check = format!("star_level({})", f.label());
    let ground = f.ground().clone();
    let members = f.enumerate(&budget.bound, budget.cap).members;
    if let Some(m) = members.iter().find(|m| m.strict_sup().as_ref() != Some(&ground)) {
        return Err(Error::PreconditionFailure(format!("{m} is not cofinal in {ground}")));
    }
    let s = star(f.clone());
    let isolated: Vec<(PointSet, Vec<PointSet>)> = members
        .iter()
        .filter_map(|a| isolation_witness(f.as_ref(), a, &[], budget).map(|bs| (a.clone(), bs)))
        .take(4)
        .collect();
    let mut traced = usize::MAX;
    for (a, bs) in &isolated {
        let (pts, _) = a.enumerate_below(&ground, 4 * Z_POINTS);
        let Some(eta) = pts.iter().find(|p| !bs.iter().any(|b| b.member(p))).cloned() else {
            return Ok(Verdict::inconclusive(check, &budget.bound, format!("{a} is covered by its witness")));
        };
        let low = a.truncate(&eta)?;
        let mut prev = low.clone();
        let mut n = 0;
        for p in pts.iter().filter(|p| **p >= eta).take(Z_POINTS) {
            let z = a.truncate(&p.succ())?;
            let ok = s.contains(&z)?
                && prev.subset(&z)?
                && prev != z
                && !z.subset(&low)?
                && !bs.iter().any(|b| z.subset(b).unwrap_or(true));
            if !ok {
                return Ok(Verdict::falsified(check, &budget.bound, &[a, &z]).note(format!("trace at eta = {eta} fails")));
            }
            prev = z;
            n += 1;
        }
        let mut blockers = vec![low.clone()];
        blockers.extend(bs.iter().cloned());
        for c in s.nbhd(a, &blockers, budget.cap).members {
            let is_trace = c == *a || c.strict_sup().is_some_and(|x| a.truncate(&x).ok() == Some(c.clone()));
            if !is_trace {
                return Ok(Verdict::falsified(check, &budget.bound, &[a, &c]).note("neighbourhood member is not a trace"));
            }
        }
        traced = traced.min(n);
    }
    let listed = s.enumerate(&budget.bound, budget.cap).members;
    for m in listed.iter().filter(|m| !m.is_finite()).take(8) {
        if isolation_witness(s.as_ref(), m, &[], budget).is_some() {
            return Ok(Verdict::falsified(check, &budget.bound, &[m]).note("isolated star member is infinite"));
        }
    }
    if isolated.is_empty() {
        return Ok(Verdict::inconclusive(check, &budget.bound, "no isolated member found"));
    }
    Ok(Verdict::verified(check, &budget.bound)
        .note(format!("{} isolated members, at least {traced} traces each", isolated.len())))
}

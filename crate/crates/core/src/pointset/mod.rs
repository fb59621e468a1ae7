//! Decidable subsets of an ordinal ground set.
//!
//! Every constructor normalizes, so structural equality and hashing of a
//! [`PointSet`] are canonical except across different codings.

mod coding;
mod parse;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ordinal::Ordinal;
use crate::{Error, Result};

pub use coding::{pair, unpair, Coding};
pub use parse::parse_pointset;

/// Finite sets up to this size are stored point by point.
pub const EXPLICIT_LIMIT: u64 = 4096;
/// Decode steps spent scanning a coded set before giving up on completeness.
pub const CODED_SCAN_LIMIT: u64 = 1 << 20;

/// Half-open interval `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Ordinal,
    pub hi: Ordinal,
}

impl Interval {
    pub fn new(lo: Ordinal, hi: Ordinal) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, p: &Ordinal) -> bool {
        self.lo <= *p && *p < self.hi
    }

    /// Length as a natural number, if finite.
    pub fn finite_len(&self) -> Option<u64> {
        self.hi.left_sub(&self.lo).and_then(|d| d.as_nat())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Explicit(Vec<Ordinal>),
    Intervals(Vec<Interval>),
    Coded { coding: Coding, base: Box<PointSet> },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(Repr);

fn normalize_intervals(mut v: Vec<Interval>) -> Vec<Interval> {
    v.retain(|i| i.lo < i.hi);
    v.sort();
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for i in v {
        match out.last_mut() {
            Some(last) if i.lo <= last.hi => {
                if i.hi > last.hi {
                    last.hi = i.hi;
                }
            }
            _ => out.push(i),
        }
    }
    out
}

fn intersect_intervals(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = a[i].lo.clone().max(b[j].lo.clone());
        let hi = a[i].hi.clone().min(b[j].hi.clone());
        if lo < hi {
            out.push(Interval::new(lo, hi));
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

impl PointSet {
    pub fn empty() -> Self {
        PointSet(Repr::Explicit(Vec::new()))
    }

    pub fn from_points<I: IntoIterator<Item = Ordinal>>(points: I) -> Self {
        let mut v: Vec<Ordinal> = points.into_iter().collect();
        v.sort();
        v.dedup();
        PointSet(Repr::Explicit(v))
    }

    pub fn interval(lo: Ordinal, hi: Ordinal) -> Self {
        PointSet::from_intervals(vec![Interval::new(lo, hi)])
    }

    /// The initial segment `[0, hi)`.
    pub fn below(hi: Ordinal) -> Self {
        PointSet::interval(Ordinal::zero(), hi)
    }

    pub fn from_intervals(v: Vec<Interval>) -> Self {
        let v = normalize_intervals(v);
        let mut total: u64 = 0;
        let all_small = v.iter().all(|i| match i.finite_len() {
            Some(n) => {
                total = total.saturating_add(n);
                total <= EXPLICIT_LIMIT
            }
            None => false,
        });
        if all_small {
            let mut pts = Vec::with_capacity(total as usize);
            for i in &v {
                let n = i.finite_len().expect("finite");
                pts.extend((0..n).map(|k| &i.lo + &Ordinal::nat(k)));
            }
            PointSet(Repr::Explicit(pts))
        } else {
            PointSet(Repr::Intervals(v))
        }
    }

    /// The image of `base ⊆ ω^γ` under `coding`, as a subset of `ω`.
    pub fn coded(coding: Coding, base: PointSet) -> Result<Self> {
        let ground = coding.source_ground();
        if let Some(sup) = base.strict_sup() {
            if sup > ground {
                return Err(Error::Invalid(format!(
                    "coded base {base} is not inside w^{}",
                    coding.gamma()
                )));
            }
        }
        if base.is_finite() {
            let pts = base
                .explicit_points()
                .expect("finite base")
                .iter()
                .map(|p| coding.encode(p).map(Ordinal::nat))
                .collect::<Result<Vec<_>>>()?;
            return Ok(PointSet::from_points(pts));
        }
        if base == PointSet::below(ground) && !coding.is_corrupted() {
            return Ok(PointSet::below(Ordinal::omega()));
        }
        Ok(PointSet(Repr::Coded {
            coding,
            base: Box::new(base),
        }))
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.0, Repr::Explicit(v) if v.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.0, Repr::Explicit(_))
    }

    pub fn is_coded(&self) -> bool {
        matches!(self.0, Repr::Coded { .. })
    }

    pub fn explicit_points(&self) -> Option<&[Ordinal]> {
        match &self.0 {
            Repr::Explicit(v) => Some(v),
            _ => None,
        }
    }

    /// Interval form, unavailable for coded images.
    pub fn to_intervals(&self) -> Option<Vec<Interval>> {
        match &self.0 {
            Repr::Explicit(v) => Some(normalize_intervals(
                v.iter().map(|p| Interval::new(p.clone(), p.succ())).collect(),
            )),
            Repr::Intervals(v) => Some(v.clone()),
            Repr::Coded { .. } => None,
        }
    }

    pub fn coding(&self) -> Option<(&Coding, &PointSet)> {
        match &self.0 {
            Repr::Coded { coding, base } => Some((coding, base)),
            _ => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.explicit_points().map(|v| v.len())
    }

    pub fn member(&self, p: &Ordinal) -> bool {
        match &self.0 {
            Repr::Explicit(v) => v.binary_search(p).is_ok(),
            Repr::Intervals(v) => {
                let idx = v.partition_point(|i| i.lo <= *p);
                idx > 0 && v[idx - 1].contains(p)
            }
            Repr::Coded { coding, base } => match p.as_nat() {
                Some(n) => base.member(&coding.decode(n)),
                None => false,
            },
        }
    }

    pub fn min_point(&self) -> Option<Ordinal> {
        match &self.0 {
            Repr::Explicit(v) => v.first().cloned(),
            Repr::Intervals(v) => v.first().map(|i| i.lo.clone()),
            Repr::Coded { .. } => {
                let (pts, _) = self.enumerate_below(&Ordinal::omega(), 1);
                pts.into_iter().next()
            }
        }
    }

    /// Least `ξ` with `self ⊆ ξ`; `None` for the empty set is never returned,
    /// the empty set gives `Some(0)`.
    pub fn strict_sup(&self) -> Option<Ordinal> {
        match &self.0 {
            Repr::Explicit(v) => Some(v.last().map(|p| p.succ()).unwrap_or_default()),
            Repr::Intervals(v) => Some(v.last().map(|i| i.hi.clone()).unwrap_or_default()),
            Repr::Coded { .. } => Some(Ordinal::omega()),
        }
    }

    /// `self ∩ ξ`.
    pub fn truncate(&self, xi: &Ordinal) -> Result<PointSet> {
        if let (Repr::Coded { .. }, Some(_)) = (&self.0, xi.as_nat()) {
            let (pts, complete) = self.enumerate_below(xi, EXPLICIT_LIMIT as usize);
            if complete {
                return Ok(PointSet::from_points(pts));
            }
        }
        self.intersect(&PointSet::below(xi.clone()))
    }

    /// Drops the given points; exact for every representation.
    pub fn minus_points(&self, pts: &[Ordinal]) -> PointSet {
        match &self.0 {
            Repr::Explicit(v) => PointSet::from_points(v.iter().filter(|p| !pts.contains(p)).cloned()),
            Repr::Intervals(v) => {
                let mut cur = v.clone();
                for p in pts {
                    let mut next = Vec::with_capacity(cur.len() + 1);
                    for i in cur {
                        if i.contains(p) {
                            next.push(Interval::new(i.lo.clone(), p.clone()));
                            next.push(Interval::new(p.succ(), i.hi.clone()));
                        } else {
                            next.push(i);
                        }
                    }
                    cur = next;
                }
                PointSet::from_intervals(cur)
            }
            Repr::Coded { coding, base } => {
                let decoded: Vec<Ordinal> = pts
                    .iter()
                    .filter_map(|p| p.as_nat())
                    .map(|n| coding.decode(n))
                    .collect();
                PointSet::coded(coding.clone(), base.minus_points(&decoded))
                    .expect("subset of a valid base")
            }
        }
    }

    /// Least point of `self` outside `other`.
    pub fn first_outside(&self, other: &PointSet) -> Option<Ordinal> {
        match &self.0 {
            Repr::Explicit(v) => v.iter().find(|p| !other.member(p)).cloned(),
            Repr::Intervals(v) => {
                for i in v {
                    let mut c = i.lo.clone();
                    let mut steps = 0u64;
                    while c < i.hi && steps < CODED_SCAN_LIMIT {
                        if !other.member(&c) {
                            return Some(c);
                        }
                        c = other.run_end(&c);
                        steps += 1;
                    }
                }
                None
            }
            Repr::Coded { .. } => (0..CODED_SCAN_LIMIT)
                .map(Ordinal::nat)
                .find(|p| self.member(p) && !other.member(p)),
        }
    }

    // for p in self: a point above p such that [p, end) ⊆ self
    fn run_end(&self, p: &Ordinal) -> Ordinal {
        if let Repr::Intervals(v) = &self.0 {
            let idx = v.partition_point(|i| i.lo <= *p);
            if idx > 0 && v[idx - 1].contains(p) {
                return v[idx - 1].hi.clone();
            }
        }
        p.succ()
    }

    pub fn intersect(&self, other: &PointSet) -> Result<PointSet> {
        use Repr::*;
        match (&self.0, &other.0) {
            (Explicit(v), _) => Ok(PointSet::from_points(v.iter().filter(|p| other.member(p)).cloned())),
            (_, Explicit(v)) => Ok(PointSet::from_points(v.iter().filter(|p| self.member(p)).cloned())),
            (Intervals(a), Intervals(b)) => Ok(PointSet::from_intervals(intersect_intervals(a, b))),
            (Coded { coding: c1, base: b1 }, Coded { coding: c2, base: b2 }) => {
                if c1 == c2 {
                    PointSet::coded(c1.clone(), b1.intersect(b2)?)
                } else {
                    Err(Error::TruncationRequired(format!(
                        "intersection of images under different codings ({} vs {})",
                        c1.gamma(),
                        c2.gamma()
                    )))
                }
            }
            (Coded { .. }, Intervals(v)) => self.intersect_with_omega_intervals(v),
            (Intervals(v), Coded { .. }) => other.intersect_with_omega_intervals(v),
        }
    }

    // self is coded, hence a subset of ω
    fn intersect_with_omega_intervals(&self, v: &[Interval]) -> Result<PointSet> {
        let omega = Ordinal::omega();
        let clipped: Vec<Interval> = v
            .iter()
            .filter(|i| i.lo < omega)
            .map(|i| Interval::new(i.lo.clone(), i.hi.clone().min(omega.clone())))
            .collect();
        let mut finite_pts = Vec::new();
        let mut tail: Option<u64> = None;
        for i in &clipped {
            let lo = i.lo.as_nat().expect("below ω");
            match i.hi.as_nat() {
                Some(hi) => finite_pts.extend(lo..hi),
                None => tail = Some(lo),
            }
        }
        let mut pieces: Vec<Ordinal> = finite_pts
            .into_iter()
            .map(Ordinal::nat)
            .filter(|p| self.member(p))
            .collect();
        let Some(start) = tail else {
            return Ok(PointSet::from_points(pieces));
        };
        if start > CODED_SCAN_LIMIT {
            return Err(Error::TruncationRequired(format!(
                "coded set intersected with [{start}, w)"
            )));
        }
        let drop: Vec<Ordinal> = (0..start).map(Ordinal::nat).collect();
        let tail_set = self.minus_points(&drop);
        if pieces.is_empty() {
            return Ok(tail_set);
        }
        pieces.retain(|p| !tail_set.member(p));
        tail_set.union(&PointSet::from_points(pieces))
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        use Repr::*;
        match (&self.0, &other.0) {
            (Coded { coding: c1, base: b1 }, Coded { coding: c2, base: b2 }) if c1 == c2 => {
                PointSet::coded(c1.clone(), b1.union(b2)?)
            }
            (Coded { coding, base }, Explicit(v)) | (Explicit(v), Coded { coding, base }) => {
                let extra = v
                    .iter()
                    .map(|p| match p.as_nat() {
                        Some(n) => Ok(coding.decode(n)),
                        None => Err(Error::TruncationRequired(format!(
                            "point {p} outside the coded ground"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                PointSet::coded(coding.clone(), base.union(&PointSet::from_points(extra))?)
            }
            (Coded { .. }, _) | (_, Coded { .. }) => {
                if self.subset(other)? {
                    Ok(other.clone())
                } else if other.subset(self)? {
                    Ok(self.clone())
                } else {
                    Err(Error::TruncationRequired("union across codings".into()))
                }
            }
            _ => {
                let mut v = self.to_intervals().expect("uncoded");
                v.extend(other.to_intervals().expect("uncoded"));
                Ok(PointSet::from_intervals(v))
            }
        }
    }

    pub fn subset(&self, other: &PointSet) -> Result<bool> {
        if let Repr::Explicit(v) = &self.0 {
            if let Repr::Explicit(w) = &other.0 {
                // both sorted: one merge pass
                let mut rest = w.iter();
                return Ok(v.iter().all(|p| rest.any(|q| q == p)));
            }
            return Ok(v.iter().all(|p| other.member(p)));
        }
        let meet = self.intersect(other)?;
        self.equal(&meet)
    }

    pub fn equal(&self, other: &PointSet) -> Result<bool> {
        use Repr::*;
        match (&self.0, &other.0) {
            (Coded { coding: c1, .. }, Coded { coding: c2, .. }) if c1 != c2 => Err(
                Error::TruncationRequired("equality across different codings".into()),
            ),
            (Coded { .. }, Intervals(_)) | (Intervals(_), Coded { .. }) => {
                // a coded image of a non-full base is never the whole of ω
                let (coded, plain) = if self.is_coded() { (self, other) } else { (other, self) };
                if plain.strict_sup() > Some(Ordinal::omega()) {
                    return Ok(false);
                }
                Err(Error::TruncationRequired(format!(
                    "comparison of coded image with {plain}: {coded}"
                )))
            }
            _ => Ok(self == other),
        }
    }

    pub fn disjoint(&self, other: &PointSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// The first at most `cap` points below `bound`, increasing, and whether
    /// the list is exhaustive.
    pub fn enumerate_below(&self, bound: &Ordinal, cap: usize) -> (Vec<Ordinal>, bool) {
        let mut out = Vec::new();
        match &self.0 {
            Repr::Explicit(v) => {
                for p in v.iter().take_while(|p| *p < bound) {
                    if out.len() == cap {
                        return (out, false);
                    }
                    out.push(p.clone());
                }
                (out, true)
            }
            Repr::Intervals(v) => {
                for i in v {
                    if i.lo >= *bound {
                        break;
                    }
                    let mut p = i.lo.clone();
                    while p < i.hi && p < *bound {
                        if out.len() == cap {
                            return (out, false);
                        }
                        out.push(p.clone());
                        p = p.succ();
                    }
                    if p < i.hi {
                        // stopped by bound inside the interval
                        return (out, true);
                    }
                }
                (out, true)
            }
            Repr::Coded { coding, base } => {
                let limit = bound.as_nat().unwrap_or(u64::MAX);
                if let Some(r) = stream_codes(coding, base, limit, cap) {
                    return r;
                }
                let mut n = 0u64;
                while n < limit {
                    if n >= CODED_SCAN_LIMIT || out.len() == cap {
                        return (out, false);
                    }
                    let p = Ordinal::nat(n);
                    if self.member(&p) {
                        out.push(p);
                    }
                    n += 1;
                }
                (out, true)
            }
        }
    }
}

/// Codes of `base` below `limit` in increasing order, when every interval
/// of `base` is at most `ω` long. Inside such an interval only the units
/// digit varies, and codes increase with it.
fn stream_codes(coding: &Coding, base: &PointSet, limit: u64, cap: usize) -> Option<(Vec<Ordinal>, bool)> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    if coding.is_corrupted() {
        return None;
    }
    let ivs = base.to_intervals()?;
    let w = Ordinal::omega();
    let lens: Vec<Option<u64>> = ivs
        .iter()
        .map(|i| i.hi.left_sub(&i.lo).filter(|l| *l <= w).map(|l| l.as_nat()))
        .collect::<Option<_>>()?;
    let code = |k: usize, b: u64| coding.encode(&(&ivs[k].lo + &Ordinal::nat(b))).ok();
    let mut heap = BinaryHeap::new();
    for k in 0..ivs.len() {
        if lens[k] != Some(0) {
            heap.push(Reverse((code(k, 0)?, k, 0u64)));
        }
    }
    let mut out = Vec::new();
    while let Some(Reverse((c, k, b))) = heap.pop() {
        if c >= limit {
            return Some((out, true));
        }
        if out.len() == cap {
            return Some((out, false));
        }
        out.push(Ordinal::nat(c));
        if lens[k].is_none_or(|n| b + 1 < n) {
            match code(k, b + 1) {
                Some(next) => heap.push(Reverse((next, k, b + 1))),
                None => return Some((out, false)),
            }
        }
    }
    Some((out, true))
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Explicit(v) => {
                f.write_str("{")?;
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("}")
            }
            Repr::Intervals(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Repr::Intervals(v) => {
                f.write_str("union(")?;
                for (i, iv) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{iv}")?;
                }
                f.write_str(")")
            }
            Repr::Coded { coding, base } => write!(f, "coded(gamma={}, {base})", coding.gamma()),
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet({self})")
    }
}

impl std::str::FromStr for PointSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pointset(s)
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

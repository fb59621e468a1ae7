//! Bounded Cantor-Bendixson decomposition.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Serialize, Serializer};

use super::isolation_witness;
use crate::family::{rank, rk_good_witness, Budget, SetFamily};
use crate::ordinal::Ordinal;
use crate::pointset::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelMethod {
    /// A finite `Bs` with `W(A; Bs) = {A}`.
    Witness,
    /// The closed-form level of an initial-segment family.
    Structural,
    /// Rank certificate plus rk-good evidence at every lower rank; the
    /// level equals the rank for ∩-closed rk-good families.
    RankShortcut,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberLevel {
    pub member: PointSet,
    #[serde(serialize_with = "level_or_unresolved")]
    pub level: Option<Ordinal>,
    pub method: LevelMethod,
    pub witness: Vec<PointSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<Ordinal>,
}

fn level_or_unresolved<S: Serializer>(level: &Option<Ordinal>, s: S) -> Result<S::Ok, S::Error> {
    match level {
        Some(l) => s.collect_str(l),
        None => s.serialize_str("unresolved"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSize {
    pub level: Ordinal,
    /// An exact count, or `≥n` when more members exist beyond the bound.
    pub size: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceReport {
    pub family: String,
    pub bound: Ordinal,
    pub cap: usize,
    pub level_cap: u64,
    pub members: Vec<MemberLevel>,
    pub level_sizes: Vec<LevelSize>,
    pub unresolved: usize,
    /// `1 + max` assigned level; zero when nothing is resolved.
    pub height_lower_bound: Ordinal,
    pub notes: Vec<String>,
}

fn resolve(f: &dyn SetFamily, a: &PointSet, level_cap: u64, budget: &Budget) -> MemberLevel {
    let rk = match f.as_explicit() {
        Some(e) => e.rank_of(a).map(Ordinal::nat),
        None => f.rank_formula(a),
    };
    let mut out = MemberLevel {
        member: a.clone(),
        level: None,
        method: LevelMethod::Unresolved,
        witness: Vec::new(),
        rank: rk.clone(),
    };
    if let Some(bs) = isolation_witness(f, a, &[], budget) {
        out.level = Some(Ordinal::zero());
        out.method = LevelMethod::Witness;
        out.witness = bs;
        return out;
    }
    if let Some(l) = f.structural_level(a) {
        if l.as_nat().is_some_and(|n| n <= level_cap) {
            out.level = Some(l);
            out.method = LevelMethod::Structural;
        }
        return out;
    }
    let Some(r) = rk.as_ref().and_then(|r| r.as_nat()) else {
        return out;
    };
    if r == 0 || r > level_cap || rank(f, a, budget).is_err() {
        return out;
    }
    let good = (0..r).all(|b| rk_good_witness(f, a, &Ordinal::nat(b), budget.rk_good_n, budget).is_verified());
    if good {
        out.level = Some(Ordinal::nat(r));
        out.method = LevelMethod::RankShortcut;
    }
    out
}

/// Levels of the members meeting the bound, up to `level_cap`.
pub fn cb_levels(f: &dyn SetFamily, level_cap: u64, budget: &Budget) -> SpaceReport {
    let listing = f.enumerate(&budget.bound, budget.cap);
    let members = budget.exec.map(&listing.members, |a| resolve(f, a, level_cap, budget));
    let mut counts: BTreeMap<Ordinal, usize> = BTreeMap::new();
    for m in &members {
        if let Some(l) = &m.level {
            *counts.entry(l.clone()).or_default() += 1;
        }
    }
    let whole = listing.complete && budget.bound >= *f.ground();
    let level_sizes = counts
        .iter()
        .map(|(level, &n)| {
            let size = match (whole, f.rank_count(level)) {
                (true, _) => n.to_string(),
                (false, Some(Some(k))) if k as usize == n => n.to_string(),
                _ => format!("≥{n}"),
            };
            LevelSize { level: level.clone(), size }
        })
        .collect();
    let mut notes = Vec::new();
    if members.iter().any(|m| m.method == LevelMethod::RankShortcut) {
        notes.push("rank_shortcut levels assume the family is cap-closed and rk-good".into());
    }
    if !listing.complete {
        notes.push(format!("enumeration stopped at cap {}", budget.cap));
    }
    SpaceReport {
        family: f.label(),
        bound: budget.bound.clone(),
        cap: budget.cap,
        level_cap,
        unresolved: members.iter().filter(|m| m.level.is_none()).count(),
        height_lower_bound: counts.keys().next_back().map(|l| l.succ()).unwrap_or_default(),
        members,
        level_sizes,
        notes,
    }
}

impl SpaceReport {
    pub fn level_of(&self, a: &PointSet) -> Option<&MemberLevel> {
        self.members.iter().find(|m| m.member == *a)
    }

    /// Containment Hasse diagram of the first `limit` members; nodes are
    /// coloured by level, unresolved nodes are dashed.
    pub fn to_dot(&self, limit: usize) -> String {
        const COLORS: [&str; 6] = ["lightblue", "palegreen", "gold", "orange", "tomato", "orchid"];
        let shown = &self.members[..self.members.len().min(limit)];
        let mut out = String::from("digraph space {\n  rankdir=BT;\n  node [shape=box, style=filled];\n");
        for (i, m) in shown.iter().enumerate() {
            let style = match &m.level {
                Some(l) => {
                    let c = l.as_nat().map_or(COLORS.len() - 1, |n| (n as usize).min(COLORS.len() - 1));
                    format!("fillcolor={}", COLORS[c])
                }
                None => "style=dashed, fillcolor=white".to_string(),
            };
            let level = m.level.as_ref().map_or("?".to_string(), |l| l.to_string());
            let _ = writeln!(out, "  n{i} [label=\"{} : {level}\", {style}];", m.member);
        }
        let sub = |x: &PointSet, y: &PointSet| x != y && x.subset(y).unwrap_or(false);
        for (i, a) in shown.iter().enumerate() {
            for (j, b) in shown.iter().enumerate() {
                let covered = sub(&b.member, &a.member)
                    && !shown.iter().any(|c| sub(&b.member, &c.member) && sub(&c.member, &a.member));
                if covered {
                    let _ = writeln!(out, "  n{j} -> n{i};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

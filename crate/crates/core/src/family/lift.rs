//! k-lifts, coherent systems and amalgamation.
//!
//! A lifted point `k_i(η) = [η + 1]_{A_i}` is never materialized. Two lifted
//! points `k_i(η)` and `k_j(η)` coincide iff `η + 1 < Δ(A_i, A_j)`, so a lifted
//! set is a pair (family index, base set) keyed by the least index whose lift
//! yields the same points.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ops::{delta, sample_pairs, DeltaOutcome};
use super::{Budget, Family, Verdict};
use crate::ordinal::{grid, Ordinal};
use crate::pointset::PointSet;
use crate::{Error, Result};

/// Families `A_i`, `i ∈ I`, over one ground set.
#[derive(Clone)]
pub struct FamilySystem {
    pub labels: Vec<String>,
    pub families: Vec<Family>,
    ground: Ordinal,
}

impl FamilySystem {
    pub fn new(families: Vec<Family>) -> Result<Self> {
        let ground = families
            .first()
            .map(|f| f.ground().clone())
            .ok_or_else(|| Error::Invalid("empty family system".into()))?;
        if let Some(f) = families.iter().find(|f| *f.ground() != ground) {
            return Err(Error::Invalid(format!(
                "{} has ground {}, expected {ground}",
                f.label(),
                f.ground()
            )));
        }
        Ok(FamilySystem {
            labels: families.iter().map(|f| f.label()).collect(),
            families,
            ground,
        })
    }

    pub fn ground(&self) -> &Ordinal {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LiftedPoint {
    pub family: usize,
    pub eta: Ordinal,
    /// `(least family index sharing this point, η)`.
    pub class_key: (usize, Ordinal),
}

/// `k_i''A`, stored under its canonical family index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LiftedSet {
    pub key: usize,
    pub set: PointSet,
}

/// `Ã = {k''A : A ∈ A}` for one family.
pub struct LiftedFamily {
    pub index: usize,
    pub family: Family,
}

/// Lifts `f` after checking `ρ ⊆ f` on the ordinal grid of the bound.
pub fn klift(f: Family, index: usize, budget: &Budget) -> Result<LiftedFamily> {
    for eta in grid(f.ground(), budget.digits(), budget.cap) {
        if eta >= *f.ground() {
            continue;
        }
        let seg = PointSet::below(eta);
        if !f.contains(&seg)? {
            return Err(Error::PreconditionFailure(format!(
                "initial segment {seg} is not a member of {}",
                f.label()
            )));
        }
    }
    Ok(LiftedFamily { index, family: f })
}

impl LiftedFamily {
    pub fn point(&self, eta: &Ordinal) -> LiftedPoint {
        LiftedPoint {
            family: self.index,
            eta: eta.clone(),
            class_key: (self.index, eta.clone()),
        }
    }

    pub fn lift(&self, a: &PointSet) -> LiftedSet {
        LiftedSet {
            key: self.index,
            set: a.clone(),
        }
    }

    /// `k_A(η) = [η + 1]_A`, materialized for small families.
    pub fn bracket(&self, eta: &Ordinal, cap: usize) -> Option<Vec<PointSet>> {
        self.family.restrict(&eta.succ(), cap).expand()
    }
}

/// Plain coherence: `A ∩ B ∈ A_i ∪ {∅}` for sampled `A ∈ A_i`, `B ∈ A_j`.
pub fn coherent_check(system: &FamilySystem, budget: &Budget) -> Verdict {
    let check = "coherent".to_string();
    let lists: Vec<Vec<PointSet>> = system
        .families
        .iter()
        .map(|f| f.enumerate(&budget.bound, budget.cap).members)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let n = system.len();
    let per = (budget.samples / (n * n).max(1)).max(1);
    for i in 0..n {
        for j in 0..n {
            if lists[i].is_empty() || lists[j].is_empty() {
                continue;
            }
            for _ in 0..per {
                let a = &lists[i][rng.gen_range(0..lists[i].len())];
                let b = &lists[j][rng.gen_range(0..lists[j].len())];
                match a.intersect(b) {
                    Ok(m) if m.is_empty() => {}
                    Ok(m) => match system.families[i].contains(&m) {
                        Ok(true) => {}
                        Ok(false) => {
                            return Verdict::falsified(check, &budget.bound, &[m.to_string(), a.to_string(), b.to_string()])
                                .note(format!("intersection missing from {}", system.labels[i]))
                        }
                        Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
                    },
                    Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
                }
            }
        }
    }
    Verdict::verified(check, &budget.bound)
}

/// The union `∪ Ã_i` of a lifted system.
pub struct Amalgam {
    pub system: FamilySystem,
    /// `Δ(A_i, A_j)`, `None` when equal up to the bound.
    pub deltas: Vec<Vec<Option<Ordinal>>>,
    pub bound: Ordinal,
}

impl Amalgam {
    /// Computes pairwise Δ; a limit Δ is a precondition failure.
    pub fn new(system: FamilySystem, budget: &Budget) -> Result<Self> {
        let n = system.len();
        let mut deltas = vec![vec![None; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = match delta(system.families[i].as_ref(), system.families[j].as_ref(), budget) {
                    DeltaOutcome::Found { delta, .. } => Some(delta),
                    DeltaOutcome::EqualUpToBound { .. } => None,
                    DeltaOutcome::Inconclusive { at, reason } => {
                        return Err(Error::TruncationRequired(format!("delta at {at}: {reason}")))
                    }
                };
                deltas[i][j] = d.clone();
                deltas[j][i] = d;
            }
        }
        Amalgam::with_deltas(system, deltas, budget)
    }

    pub fn with_deltas(system: FamilySystem, deltas: Vec<Vec<Option<Ordinal>>>, budget: &Budget) -> Result<Self> {
        for (i, row) in deltas.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                if let Some(d) = d.as_ref().filter(|d| d.is_limit()) {
                    return Err(Error::PreconditionFailure(format!(
                        "Delta({}, {}) = {d} is a limit ordinal",
                        system.labels[i], system.labels[j]
                    )));
                }
            }
        }
        Ok(Amalgam {
            system,
            deltas,
            bound: budget.bound.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    /// `{η : η + 1 < Δ(A_i, A_j)}` as a point set; the whole ground when equal.
    pub fn agreement(&self, i: usize, j: usize) -> PointSet {
        if i == j {
            return PointSet::below(self.system.ground().clone());
        }
        match &self.deltas[i][j] {
            None => PointSet::below(self.system.ground().clone()),
            Some(d) => PointSet::below(d.pred().unwrap_or_else(|| d.clone())),
        }
    }

    /// Whether `k_i''A = k_j''A` as sets of lifted points.
    pub fn shared(&self, i: usize, j: usize, a: &PointSet) -> bool {
        a.subset(&self.agreement(i, j)).unwrap_or(false)
    }

    pub fn point(&self, i: usize, eta: &Ordinal) -> LiftedPoint {
        let single = PointSet::from_points([eta.clone()]);
        let key = (0..self.len()).find(|&j| self.shared(i, j, &single)).unwrap_or(i);
        LiftedPoint {
            family: i,
            eta: eta.clone(),
            class_key: (key, eta.clone()),
        }
    }

    pub fn canonical(&self, i: usize, a: &PointSet) -> LiftedSet {
        let key = (0..self.len()).find(|&j| self.shared(i, j, a)).unwrap_or(i);
        LiftedSet { key, set: a.clone() }
    }

    pub fn intersect(&self, x: &LiftedSet, y: &LiftedSet) -> Result<LiftedSet> {
        // cut to the agreement first: sets from different codings meet only there
        let top = self.agreement(x.key, y.key).strict_sup().unwrap_or_default();
        let common = if top < *self.system.ground() {
            x.set.truncate(&top)?.intersect(&y.set.truncate(&top)?)?
        } else {
            x.set.intersect(&y.set)?
        };
        Ok(self.canonical(x.key, &common))
    }

    pub fn contains(&self, x: &LiftedSet) -> Result<bool> {
        for j in 0..self.len() {
            if self.shared(x.key, j, &x.set) && self.system.families[j].contains(&x.set)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `x ∈ Ã_i`.
    pub fn in_lift(&self, i: usize, x: &LiftedSet) -> Result<bool> {
        Ok(self.shared(x.key, i, &x.set) && self.system.families[i].contains(&x.set)?)
    }

    pub fn members_of(&self, i: usize, budget: &Budget) -> (Vec<LiftedSet>, bool) {
        let l = self.system.families[i].enumerate(&budget.bound, budget.cap);
        (l.members.iter().map(|a| self.canonical(i, a)).collect(), l.complete)
    }

    pub fn enumerate(&self, budget: &Budget) -> (Vec<LiftedSet>, bool) {
        let mut out = BTreeSet::new();
        let mut complete = true;
        for i in 0..self.len() {
            let (m, ok) = self.members_of(i, budget);
            complete &= ok;
            out.extend(m);
        }
        (out.into_iter().collect(), complete)
    }

    /// Amalgam members below `x`.
    pub fn below(&self, x: &LiftedSet, cap: usize) -> Result<(Vec<LiftedSet>, bool)> {
        let mut out = BTreeSet::new();
        let mut complete = true;
        for j in 0..self.len() {
            let top = self.agreement(x.key, j).strict_sup().unwrap_or_default();
            let region = x.set.truncate(&top)?;
            let l = self.system.families[j].members_below(&region, cap);
            complete &= l.complete;
            out.extend(l.members.iter().map(|b| self.canonical(j, b)));
        }
        Ok((out.into_iter().collect(), complete))
    }

    /// `#{η < bound : η + 1 < Δ(A_i, A_j)}` over the grid of the bound.
    pub fn merge_count(&self, i: usize, j: usize, budget: &Budget) -> usize {
        let agree = self.agreement(i, j);
        grid(&budget.bound, budget.digits(), budget.cap)
            .iter()
            .filter(|eta| *eta < &budget.bound && *eta < self.system.ground() && agree.member(eta))
            .count()
    }

    /// Lifted coherence on sampled cross pairs.
    pub fn coherent_check(&self, budget: &Budget) -> Verdict {
        let check = "coherent(lifted)".to_string();
        let lists: Vec<Vec<LiftedSet>> = (0..self.len()).map(|i| self.members_of(i, budget).0).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let n = self.len();
        let per = (budget.samples / (n * n).max(1)).max(1);
        for i in 0..n {
            for j in 0..n {
                if lists[i].is_empty() || lists[j].is_empty() {
                    continue;
                }
                for _ in 0..per {
                    let a = &lists[i][rng.gen_range(0..lists[i].len())];
                    let b = &lists[j][rng.gen_range(0..lists[j].len())];
                    let m = match self.intersect(a, b) {
                        Ok(m) => m,
                        Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
                    };
                    if m.set.is_empty() {
                        continue;
                    }
                    match self.in_lift(i, &m) {
                        Ok(true) => {}
                        Ok(false) => {
                            return Verdict::falsified(check, &budget.bound, &[m.set.to_string(), a.set.to_string(), b.set.to_string()])
                                .note(format!("lifted intersection missing from lift of {}", self.system.labels[i]))
                        }
                        Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
                    }
                }
            }
        }
        Verdict::verified(check, &budget.bound)
    }

    /// Sampled ∩-closedness of the union family.
    pub fn cap_closed_check(&self, budget: &Budget) -> Verdict {
        let check = "cap_closed(amalgam)".to_string();
        let (m, _) = self.enumerate(budget);
        for (i, j) in sample_pairs(m.len(), budget.samples, budget.seed) {
            let meet = match self.intersect(&m[i], &m[j]) {
                Ok(x) => x,
                Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
            };
            if meet.set.is_empty() {
                continue;
            }
            match self.contains(&meet) {
                Ok(true) => {}
                Ok(false) => {
                    return Verdict::falsified(check, &budget.bound, &[m[i].set.to_string(), m[j].set.to_string(), meet.set.to_string()])
                }
                Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
            }
        }
        Verdict::verified(check, &budget.bound).note(format!("{} amalgam members enumerated", m.len()))
    }

    /// `X(Ã_i)` open in the amalgam: the down-set of every sampled
    /// `A ∈ Ã_i` in the amalgam lies inside `Ã_i`.
    pub fn open_subspace_check(&self, i: usize, budget: &Budget) -> Verdict {
        let check = format!("open_subspace({})", self.system.labels[i]);
        let (members, _) = self.members_of(i, budget);
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ i as u64);
        let take = budget.samples.min(members.len()).min(64);
        for _ in 0..take {
            let a = &members[rng.gen_range(0..members.len())];
            let (below, _) = match self.below(a, budget.cap) {
                Ok(b) => b,
                Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
            };
            for b in &below {
                match self.in_lift(i, b) {
                    Ok(true) => {}
                    Ok(false) => {
                        return Verdict::falsified(check, &budget.bound, &[a.set.to_string(), b.set.to_string()])
                    }
                    Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
                }
            }
        }
        Verdict::verified(check, &budget.bound).note(format!("{take} members sampled"))
    }
}

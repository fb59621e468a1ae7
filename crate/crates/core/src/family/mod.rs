//! Set families over an ordinal ground set and the operators on them.
//!
//! A family is either an explicit finite list ([`ExplicitFamily`]) or a
//! symbolic generator implementing [`SetFamily`]. Symbolic families are
//! infinite; every question about them is answered below a truncation bound
//! and reported through a [`Verdict`].

mod explicit;
mod lift;
mod ops;
mod star;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::exec::Exec;
use crate::ordinal::Ordinal;
use crate::pointset::PointSet;

pub use explicit::{ExplicitFamily, FamilyFile};
pub use lift::{coherent_check, klift, Amalgam, FamilySystem, LiftedFamily, LiftedPoint, LiftedSet};
pub use ops::{
    char_check, delta, rank, restrict, rk_good_witness, split, verify_property, DeltaOutcome,
    Property, RankCertificate,
};
pub use star::{star, StarFamily};

pub type Family = Arc<dyn SetFamily>;

/// Digits used for ordinal grids when the bound itself is infinite.
pub const DEFAULT_DIGITS: u64 = 128;

/// A finite listing of members, with a flag telling whether it is exhaustive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Listing {
    pub members: Vec<PointSet>,
    pub complete: bool,
}

impl Listing {
    pub fn complete(members: Vec<PointSet>) -> Self {
        Listing {
            members,
            complete: true,
        }
    }

    pub fn partial(members: Vec<PointSet>) -> Self {
        Listing {
            members,
            complete: false,
        }
    }
}

/// `F↾ξ` as the distinct nonempty traces, whether `∅` is a trace, and whether
/// the family is the star of these traces rather than the traces themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub xi: Ordinal,
    pub gens: Vec<PointSet>,
    pub has_empty: bool,
    pub starred: bool,
    pub complete: bool,
}

impl Restriction {
    pub fn new(xi: Ordinal, mut gens: Vec<PointSet>, has_empty: bool, complete: bool) -> Self {
        gens.retain(|g| !g.is_empty());
        gens.sort();
        gens.dedup();
        Restriction {
            xi,
            gens,
            has_empty,
            starred: false,
            complete,
        }
    }

    pub fn contains(&self, x: &PointSet) -> bool {
        if x.is_empty() {
            return self.has_empty || (self.starred && !self.gens.is_empty());
        }
        if !self.starred {
            return self.gens.binary_search(x).is_ok();
        }
        let sup = x.strict_sup().unwrap_or_default();
        self.gens
            .iter()
            .any(|g| g.truncate(&sup).map(|t| t == *x).unwrap_or(false))
    }

    /// All members, when the family is finite and small enough to list.
    pub fn expand(&self) -> Option<Vec<PointSet>> {
        let mut out: Vec<PointSet> = Vec::new();
        if self.contains(&PointSet::empty()) {
            out.push(PointSet::empty());
        }
        for g in &self.gens {
            if !self.starred {
                out.push(g.clone());
                continue;
            }
            let pts = g.explicit_points()?;
            for i in 1..=pts.len() {
                out.push(PointSet::from_points(pts[..i].iter().cloned()));
            }
        }
        out.sort();
        out.dedup();
        Some(out)
    }

    /// Family equality of two restrictions at the same ξ.
    pub fn same_family(&self, other: &Restriction) -> Option<bool> {
        if self.contains(&PointSet::empty()) != other.contains(&PointSet::empty()) {
            return Some(false);
        }
        if self.starred == other.starred {
            if !self.starred {
                return Some(self.gens == other.gens);
            }
            // star is monotone and idempotent
            let fwd = self.gens.iter().all(|g| other.contains(g));
            let back = other.gens.iter().all(|g| self.contains(g));
            return Some(fwd && back);
        }
        Some(self.expand()? == other.expand()?)
    }

    pub fn len(&self) -> Option<usize> {
        self.expand().map(|v| v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty() && !self.has_empty
    }
}

/// Truncation and sampling parameters shared by every bounded check.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Truncation bound for enumerations.
    pub bound: Ordinal,
    /// Maximum number of members or points listed by one enumeration.
    pub cap: usize,
    /// Number of sampled pairs or chains.
    pub samples: usize,
    pub seed: u64,
    /// Maximum isolation-witness length for symbolic families.
    pub witness_len: usize,
    /// Witnesses of each lower rank demanded before a rank shortcut.
    pub rk_good_n: usize,
    pub exec: Exec,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            bound: Ordinal::nat(200),
            cap: 4096,
            samples: 1000,
            seed: 0,
            witness_len: 4,
            rk_good_n: 8,
            exec: Exec::default(),
        }
    }
}

impl Budget {
    pub fn with_bound(bound: Ordinal) -> Self {
        Budget {
            bound,
            ..Budget::default()
        }
    }

    /// Digit bound of ordinal grids derived from the truncation bound.
    pub fn digits(&self) -> u64 {
        self.bound.as_nat().unwrap_or(DEFAULT_DIGITS)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    Verified,
    Falsified,
    Inconclusive,
}

/// Outcome of a bounded check. A falsification always carries a finite
/// witness that can be re-checked on its own.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: VerdictStatus,
    pub bound: Ordinal,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, status: VerdictStatus, bound: &Ordinal) -> Self {
        Verdict {
            check: check.into(),
            status,
            bound: bound.clone(),
            witness: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn verified(check: impl Into<String>, bound: &Ordinal) -> Self {
        Verdict::new(check, VerdictStatus::Verified, bound)
    }

    pub fn falsified<W: fmt::Display>(check: impl Into<String>, bound: &Ordinal, witness: &[W]) -> Self {
        let mut v = Verdict::new(check, VerdictStatus::Falsified, bound);
        v.witness = witness.iter().map(|w| w.to_string()).collect();
        v
    }

    pub fn inconclusive(check: impl Into<String>, bound: &Ordinal, note: impl Into<String>) -> Self {
        Verdict::new(check, VerdictStatus::Inconclusive, bound).note(note)
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_verified(&self) -> bool {
        self.status == VerdictStatus::Verified
    }

    pub fn is_falsified(&self) -> bool {
        self.status == VerdictStatus::Falsified
    }

    /// 0 verified, 1 falsified, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            VerdictStatus::Verified => 0,
            VerdictStatus::Falsified => 1,
            VerdictStatus::Inconclusive => 2,
        }
    }

    /// Combines sub-verdicts: any falsification wins, then any inconclusive.
    pub fn all(check: impl Into<String>, bound: &Ordinal, parts: Vec<Verdict>) -> Verdict {
        let mut out = Verdict::verified(check, bound);
        for p in parts {
            match p.status {
                VerdictStatus::Falsified if !out.is_falsified() => {
                    out.status = VerdictStatus::Falsified;
                    out.witness = p.witness.clone();
                }
                VerdictStatus::Inconclusive if out.is_verified() => {
                    out.status = VerdictStatus::Inconclusive;
                }
                _ => {}
            }
            out.notes.extend(p.notes.into_iter().map(|n| format!("{}: {n}", p.check)));
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}(bound {})", self.check, self.status, self.bound)?;
        if !self.witness.is_empty() {
            write!(f, " witness [{}]", self.witness.join("; "))?;
        }
        Ok(())
    }
}

/// A family `A ⊆ P(ground)`.
///
/// `containing(p)` lists the members containing `p`; for tree-like families
/// this is a finite ⊆-increasing chain.
pub trait SetFamily: Send + Sync {
    fn label(&self) -> String;

    fn ground(&self) -> &Ordinal;

    /// Members meeting `[0, bound)`, plus `∅` when it is a member, in a
    /// deterministic order. Families document their own truncation view.
    fn enumerate(&self, bound: &Ordinal, cap: usize) -> Listing;

    fn contains(&self, s: &PointSet) -> crate::Result<bool>;

    fn containing(&self, p: &Ordinal) -> Vec<PointSet>;

    /// The down-set `[A] = F ∩ P(A)`.
    fn members_below(&self, a: &PointSet, cap: usize) -> Listing {
        default_members_below(self, a, cap)
    }

    /// Members below `a` that are not below any of `bs`, i.e. `W(A; bs)`.
    fn nbhd(&self, a: &PointSet, bs: &[PointSet], cap: usize) -> Listing {
        let down = self.members_below(a, cap);
        let members = down
            .members
            .into_iter()
            .filter(|c| !bs.iter().any(|b| c.subset(b).unwrap_or(false)))
            .collect();
        Listing {
            members,
            complete: down.complete,
        }
    }

    /// The ⊆-maximal members strictly below `a`; empty and partial when
    /// the down-set is not listed in full.
    fn maximal_below(&self, a: &PointSet, cap: usize) -> Listing {
        let down = self.members_below(a, cap);
        if !down.complete {
            return Listing::partial(Vec::new());
        }
        let proper: Vec<PointSet> = down.members.into_iter().filter(|c| c != a).collect();
        let members = maximal_elements(&proper);
        Listing {
            members,
            complete: down.complete,
        }
    }

    /// Whether some member is disjoint from `ξ`, making `∅` a trace.
    fn misses(&self, xi: &Ordinal) -> bool;

    fn restrict(&self, xi: &Ordinal, cap: usize) -> Restriction {
        default_restrict(self, xi, cap)
    }

    /// Closed-form rank when the family has one.
    fn rank_formula(&self, _a: &PointSet) -> Option<Ordinal> {
        None
    }

    /// Closed-form Cantor-Bendixson level when the family has one.
    fn structural_level(&self, _a: &PointSet) -> Option<Ordinal> {
        None
    }

    /// Number of members of the given rank, `None` when infinite or unknown.
    fn rank_count(&self, _rank: &Ordinal) -> Option<Option<u64>> {
        None
    }

    fn tree_like_by_construction(&self) -> bool {
        false
    }

    fn as_explicit(&self) -> Option<&ExplicitFamily> {
        None
    }
}

/// Maximal elements under ⊆; inputs must be distinct.
pub fn maximal_elements(sets: &[PointSet]) -> Vec<PointSet> {
    let sizes: Vec<Option<usize>> = sets.iter().map(PointSet::len).collect();
    // a proper superset of a finite set is strictly larger
    let may_contain = |i: usize, j: usize| match (sizes[i], sizes[j]) {
        (Some(n), Some(m)) => n < m,
        _ => true,
    };
    (0..sets.len())
        .filter(|&i| {
            !(0..sets.len()).any(|j| i != j && may_contain(i, j) && sets[i].subset(&sets[j]).unwrap_or(false))
        })
        .map(|i| sets[i].clone())
        .collect()
}

pub(crate) fn dedup_sorted(mut v: Vec<PointSet>) -> Vec<PointSet> {
    v.sort();
    v.dedup();
    v
}

fn default_members_below<F: SetFamily + ?Sized>(f: &F, a: &PointSet, cap: usize) -> Listing {
    let sup = a.strict_sup().unwrap_or_default();
    let (pts, mut complete) = a.enumerate_below(&sup, cap);
    let mut out = Vec::new();
    if f.contains(&PointSet::empty()).unwrap_or(false) {
        out.push(PointSet::empty());
    }
    for p in &pts {
        for c in f.containing(p) {
            if c.subset(a).unwrap_or(false) {
                out.push(c);
            }
        }
    }
    let out = dedup_sorted(out);
    if out.len() > cap {
        complete = false;
    }
    Listing {
        members: out,
        complete,
    }
}

fn default_restrict<F: SetFamily + ?Sized>(f: &F, xi: &Ordinal, cap: usize) -> Restriction {
    let (pts, complete) = PointSet::below(xi.clone()).enumerate_below(xi, cap);
    let mut gens = Vec::new();
    let mut ok = complete;
    for p in &pts {
        for c in f.containing(p) {
            match c.truncate(xi) {
                Ok(t) => gens.push(t),
                Err(_) => ok = false,
            }
        }
    }
    Restriction::new(xi.clone(), gens, f.misses(xi), ok)
}

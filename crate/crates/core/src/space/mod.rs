//! The topology of `X(F)`: points are members, and the sets `[A]` together
//! with their complements form a subbase. Basic neighbourhoods are
//! `W(A; B₁, …, Bₙ) = [A] ∖ ⋃[Bᵢ]`.
//!
//! Nothing here materializes an open set. Levels are assigned only from an
//! isolation witness, a closed-form structural level, or a rank certificate
//! backed by rk-good evidence; everything else stays unresolved.

mod checks;
mod levels;

use crate::family::{maximal_elements, Budget, Listing, SetFamily};
use crate::pointset::PointSet;
use crate::{Error, Result};

pub use checks::{compact_spotcheck, ordinal_space_check, star_level_check, subspace_check, SubspaceMode};
pub use levels::{cb_levels, LevelMethod, LevelSize, MemberLevel, SpaceReport};

/// `[A]`, after checking `A ∈ F`.
pub fn members_below(f: &dyn SetFamily, a: &PointSet, cap: usize) -> Result<Listing> {
    if !f.contains(a)? {
        return Err(Error::PreconditionFailure(format!("{a} is not a member of {}", f.label())));
    }
    Ok(f.members_below(a, cap))
}

/// `W(A; B₁, …, Bₙ)`; each `Bᵢ` must be a proper subset of `A`.
pub fn basic_nbhd(f: &dyn SetFamily, a: &PointSet, bs: &[PointSet], cap: usize) -> Result<Listing> {
    if !f.contains(a)? {
        return Err(Error::PreconditionFailure(format!("{a} is not a member of {}", f.label())));
    }
    for b in bs {
        if b == a || !b.subset(a)? {
            return Err(Error::PreconditionFailure(format!("{b} is not a proper subset of {a}")));
        }
    }
    Ok(f.nbhd(a, bs, cap))
}

/// A list `Bs` with `W(A; Bs) ∖ removed = {A}`, if one is found.
///
/// A complete down-set gives the cover by its maximal proper members.
/// Otherwise the maximal members below `A` are tried, up to
/// `budget.witness_len` of them.
pub fn isolation_witness(
    f: &dyn SetFamily,
    a: &PointSet,
    removed: &[PointSet],
    budget: &Budget,
) -> Option<Vec<PointSet>> {
    let down = f.members_below(a, budget.cap);
    if down.complete {
        let rest: Vec<PointSet> = down
            .members
            .into_iter()
            .filter(|c| c != a && !removed.contains(c))
            .collect();
        return Some(maximal_elements(&rest));
    }
    let top = f.maximal_below(a, budget.cap);
    if !top.complete || top.members.len() > budget.witness_len {
        return None;
    }
    let bs: Vec<PointSet> = top.members.into_iter().filter(|b| !removed.contains(b)).collect();
    let w = f.nbhd(a, &bs, budget.cap);
    let left: Vec<&PointSet> = w.members.iter().filter(|c| !removed.contains(c)).collect();
    (w.complete && left == [a]).then_some(bs)
}

/// Re-evaluates a stored witness.
pub fn witness_holds(f: &dyn SetFamily, a: &PointSet, bs: &[PointSet], removed: &[PointSet], cap: usize) -> bool {
    let w = f.nbhd(a, bs, cap);
    w.complete && w.members.iter().filter(|c| !removed.contains(c)).eq([a])
}

#[cfg(test)]
mod tests;

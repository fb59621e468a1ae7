//! The interval families `E_γ`, their coded copies `F_γ` over `ω`, the
//! initial-segment families, and the amalgamation pipeline built on them.

mod coded;
mod interval;
mod pipeline;

use std::sync::Arc;

use crate::family::{ExplicitFamily, Family};
use crate::ordinal::Ordinal;
use crate::pointset::PointSet;
use crate::{Error, Result};

pub use coded::CodedFamily;
pub use interval::{BlockFamily, SegmentFamily};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineReport, StepReport};

/// Coefficient bound of the ordinal grids used to sample block indices.
pub(crate) const SAMPLE_DIGITS: u64 = 32;

/// Largest finite ground built explicitly.
pub const FINITE_GROUND_LIMIT: u64 = 4096;

/// The block family `E(κ, γ)` over `κ^γ`.
///
/// Finite `κ` gives an explicit family; `κ = ω` needs finite `γ`.
pub fn block_family(kappa: &Ordinal, gamma: &Ordinal) -> Result<Family> {
    if *kappa < Ordinal::nat(2) {
        return Err(Error::Invalid(format!("kappa must be at least 2, got {kappa}")));
    }
    if gamma.is_zero() {
        let f = ExplicitFamily::new(format!("E({kappa},0)"), Ordinal::one(), vec![PointSet::below(Ordinal::one())])?;
        return Ok(Arc::new(f));
    }
    match (kappa.as_nat(), gamma.as_nat()) {
        (Some(k), Some(g)) => finite_blocks(k, g).map(|f| Arc::new(f) as Family),
        (None, Some(g)) if *kappa == Ordinal::omega() => Ok(Arc::new(BlockFamily::new(g))),
        (None, _) if *kappa == Ordinal::omega() => Err(Error::TruncationRequired(format!(
            "E(w,{gamma}) needs a finite gamma"
        ))),
        _ => Err(Error::Invalid(format!("kappa must be finite or w, got {kappa}"))),
    }
}

/// `E(κ, γ)` for finite `κ`, every block clipped to `κ^γ`.
pub fn finite_blocks(kappa: u64, gamma: u64) -> Result<ExplicitFamily> {
    let ground = (0..gamma)
        .try_fold(1u64, |acc, _| acc.checked_mul(kappa))
        .filter(|&g| g <= FINITE_GROUND_LIMIT)
        .ok_or_else(|| Error::TruncationRequired(format!("{kappa}^{gamma} exceeds {FINITE_GROUND_LIMIT}")))?;
    let mut members = Vec::new();
    let mut len = kappa;
    for _ in 0..=gamma {
        let mut lo = 0;
        while lo < ground {
            let hi = (lo + len).min(ground);
            members.push(PointSet::interval(Ordinal::nat(lo), Ordinal::nat(hi)));
            lo += len;
        }
        len = len.saturating_mul(kappa);
    }
    members.sort();
    members.dedup();
    ExplicitFamily::new(format!("E({kappa},{gamma})"), Ordinal::nat(ground), members)
}

//! `F_γ`: the image of `E(ω, γ)` under the digit coding `ω^γ → ω`.

use crate::family::{dedup_sorted, Listing, SetFamily};
use crate::ordinal::Ordinal;
use crate::pointset::{Coding, PointSet};
use crate::Result;

use super::BlockFamily;

/// Largest code scanned when the bound is infinite.
const CODE_SCAN: u64 = 4096;

pub struct CodedFamily {
    blocks: BlockFamily,
    coding: Coding,
    ground: Ordinal,
}

impl CodedFamily {
    pub fn new(gamma: &Ordinal) -> Result<Self> {
        let coding = Coding::digits(gamma)?;
        Ok(CodedFamily::with_coding(coding))
    }

    pub fn with_coding(coding: Coding) -> Self {
        CodedFamily {
            blocks: BlockFamily::new(coding.gamma() as u64),
            coding,
            ground: Ordinal::omega(),
        }
    }

    pub fn coding(&self) -> &Coding {
        &self.coding
    }

    pub fn blocks(&self) -> &BlockFamily {
        &self.blocks
    }

    /// The image of an `E`-member.
    pub fn encode(&self, base: &PointSet) -> PointSet {
        PointSet::coded(self.coding.clone(), base.clone()).expect("E members lie below w^gamma")
    }

    /// The `E`-member coded by `s`, when `s` is a member.
    pub fn decode(&self, s: &PointSet) -> Option<PointSet> {
        match s.coding() {
            Some((c, base)) if *c == self.coding => Some(base.clone()),
            Some(_) => None,
            None if *s == PointSet::below(Ordinal::omega()) => {
                Some(PointSet::below(self.blocks.ground().clone()))
            }
            None => None,
        }
    }

    fn map(&self, l: Listing) -> Listing {
        Listing {
            members: dedup_sorted(l.members.iter().map(|m| self.encode(m)).collect()),
            complete: l.complete,
        }
    }
}

impl SetFamily for CodedFamily {
    fn label(&self) -> String {
        format!("F({})", self.coding.gamma())
    }

    fn ground(&self) -> &Ordinal {
        &self.ground
    }

    /// Members meeting `[0, bound)`, found by scanning codes below `bound`.
    fn enumerate(&self, bound: &Ordinal, cap: usize) -> Listing {
        let (top, mut complete) = match bound.as_nat() {
            Some(n) if n <= CODE_SCAN => (n, true),
            _ => (CODE_SCAN, false),
        };
        let mut out = Vec::new();
        for n in 0..top {
            out.extend(self.containing(&Ordinal::nat(n)));
            if out.len() > 4 * cap {
                out = dedup_sorted(out);
            }
            if out.len() > cap {
                complete = false;
                break;
            }
        }
        let mut members = dedup_sorted(out);
        members.truncate(cap);
        Listing { members, complete }
    }

    fn contains(&self, s: &PointSet) -> Result<bool> {
        match self.decode(s) {
            Some(b) => self.blocks.contains(&b),
            None => Ok(false),
        }
    }

    fn containing(&self, p: &Ordinal) -> Vec<PointSet> {
        let Some(n) = p.as_nat() else {
            return Vec::new();
        };
        let point = self.coding.decode(n);
        self.blocks.containing(&point).iter().map(|b| self.encode(b)).collect()
    }

    fn members_below(&self, a: &PointSet, cap: usize) -> Listing {
        match self.decode(a) {
            Some(b) => self.map(self.blocks.members_below(&b, cap)),
            None => Listing::partial(Vec::new()),
        }
    }

    fn maximal_below(&self, a: &PointSet, cap: usize) -> Listing {
        match self.decode(a) {
            Some(b) => self.map(self.blocks.maximal_below(&b, cap)),
            None => Listing::partial(Vec::new()),
        }
    }

    fn misses(&self, xi: &Ordinal) -> bool {
        self.coding.gamma() >= 2 || xi.is_zero()
    }

    fn rank_formula(&self, a: &PointSet) -> Option<Ordinal> {
        self.blocks.rank_formula(&self.decode(a)?)
    }

    fn rank_count(&self, rank: &Ordinal) -> Option<Option<u64>> {
        self.blocks.rank_count(rank)
    }

    fn tree_like_by_construction(&self) -> bool {
        true
    }
}

use std::sync::Arc;

use super::{dedup_sorted, Family, Listing, Restriction, SetFamily};
use crate::ordinal::Ordinal;
use crate::pointset::PointSet;
use crate::Result;

/// `A* = {A ∩ ξ : A ∈ A, ξ ≤ ρ}`.
///
/// `X ∈ A*` iff `X = ∅` (for nonempty `A`) or `C ∩ sup⁺(X) = X` for some
/// `C ∈ A` containing `min X`.
pub struct StarFamily {
    base: Family,
    nonempty: bool,
}

pub fn star(base: Family) -> Arc<StarFamily> {
    let nonempty = !base.enumerate(base.ground(), 1).members.is_empty();
    Arc::new(StarFamily { base, nonempty })
}

impl StarFamily {
    pub fn base(&self) -> &Family {
        &self.base
    }

    /// Distinct truncations `A ∩ ξ` for `ξ ≤ bound`, `ξ` a successor of a
    /// point of `A` or a multiple of `ω`.
    pub fn truncations(a: &PointSet, bound: &Ordinal, cap: usize) -> (Vec<PointSet>, bool) {
        let (pts, complete) = a.enumerate_below(bound, cap);
        // points come in increasing order, so a coded truncation is a prefix
        let mut out: Vec<PointSet> = if a.is_coded() {
            (1..=pts.len())
                .map(|i| PointSet::from_points(pts[..i].iter().cloned()))
                .collect()
        } else {
            pts.iter().filter_map(|q| a.truncate(&q.succ()).ok()).collect()
        };
        if bound.leading_exp() == Some(&Ordinal::one()) {
            for c in 1..=bound.terms()[0].coeff {
                let lim = Ordinal::monomial(Ordinal::one(), c);
                if let Ok(t) = a.truncate(&lim) {
                    out.push(t);
                }
            }
        }
        (dedup_sorted(out), complete)
    }

    fn sort_view(mut v: Vec<PointSet>) -> Vec<PointSet> {
        v = dedup_sorted(v);
        v.sort_by(|a, b| {
            a.strict_sup()
                .cmp(&b.strict_sup())
                .then_with(|| a.cmp(b))
        });
        v
    }
}

impl SetFamily for StarFamily {
    fn label(&self) -> String {
        format!("star({})", self.base.label())
    }

    fn ground(&self) -> &Ordinal {
        self.base.ground()
    }

    /// `∅`, the base members meeting `[0, bound)`, and their truncations at
    /// `ξ ≤ bound`.
    fn enumerate(&self, bound: &Ordinal, cap: usize) -> Listing {
        let base = self.base.enumerate(bound, cap);
        let mut complete = base.complete;
        let mut out = Vec::new();
        if self.nonempty {
            out.push(PointSet::empty());
        }
        for a in &base.members {
            out.push(a.clone());
            let (ts, ok) = StarFamily::truncations(a, bound, cap);
            complete &= ok;
            out.extend(ts);
        }
        let mut out = StarFamily::sort_view(out);
        if out.len() > cap {
            out.truncate(cap);
            complete = false;
        }
        Listing {
            members: out,
            complete,
        }
    }

    fn contains(&self, x: &PointSet) -> Result<bool> {
        if x.is_empty() {
            return Ok(self.nonempty);
        }
        if self.base.contains(x)? {
            return Ok(true);
        }
        let m = x.min_point().expect("nonempty");
        let sup = x.strict_sup().unwrap_or_default();
        for c in self.base.containing(&m) {
            if c.truncate(&sup)?.equal(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Full base members through `p`; truncations are not listed.
    fn containing(&self, p: &Ordinal) -> Vec<PointSet> {
        self.base.containing(p)
    }

    fn members_below(&self, a: &PointSet, cap: usize) -> Listing {
        let mut out = Vec::new();
        if self.nonempty {
            out.push(PointSet::empty());
        }
        if let Some(pts) = a.explicit_points() {
            // a nonempty member below finite `a` is a prefix of some base
            // member, every point of which lies in `a`
            let Some(top) = pts.last() else {
                return Listing::complete(out);
            };
            let bases = dedup_sorted(pts.iter().flat_map(|p| self.base.containing(p)).collect());
            for c in bases {
                let (walk, _) = c.enumerate_below(&top.succ(), pts.len() + 1);
                let mut prefix = Vec::new();
                for x in walk {
                    if pts.binary_search(&x).is_err() {
                        break;
                    }
                    prefix.push(x);
                    out.push(PointSet::from_points(prefix.iter().cloned()));
                }
            }
            return Listing::complete(StarFamily::sort_view(out));
        }
        let sup = a.strict_sup().unwrap_or_default();
        let mut sources = self.base.members_below(a, cap).members;
        sources.push(a.clone());
        if let Some(m) = a.min_point() {
            sources.extend(self.base.containing(&m));
        }
        let sources = dedup_sorted(sources);
        let per = (cap / sources.len().max(1)).clamp(8, 256);
        for s in sources {
            if s.subset(a).unwrap_or(false) {
                out.push(s.clone());
            }
            let (ts, _) = StarFamily::truncations(&s, &sup, per);
            out.extend(ts.into_iter().filter(|t| t.subset(a).unwrap_or(false)));
        }
        let mut out = StarFamily::sort_view(out);
        out.truncate(cap);
        Listing::partial(out)
    }

    /// Infinite members only get a partial down-set, which yields no cover.
    fn maximal_below(&self, a: &PointSet, cap: usize) -> Listing {
        if a.explicit_points().is_none() {
            return Listing::partial(Vec::new());
        }
        let down = self.members_below(a, cap);
        let proper: Vec<PointSet> = down.members.into_iter().filter(|c| c != a).collect();
        Listing::complete(super::maximal_elements(&proper))
    }

    fn misses(&self, _xi: &Ordinal) -> bool {
        self.nonempty
    }

    fn restrict(&self, xi: &Ordinal, cap: usize) -> Restriction {
        let r = self.base.restrict(xi, cap);
        Restriction {
            has_empty: self.nonempty,
            starred: true,
            ..r
        }
    }
}

//! The block families `E_γ` and the initial-segment families.

use super::SAMPLE_DIGITS;
use crate::family::{dedup_sorted, Listing, Restriction, SetFamily, DEFAULT_DIGITS};
use crate::ordinal::{grid, Ordinal};
use crate::pointset::PointSet;
use crate::Result;

/// `E_γ` over `κ = ω` for finite `γ ≥ 1`.
///
/// Members are the blocks `[ω^(1+α)·ξ, ω^(1+α)·(ξ+1))` for `1 + α < γ` and the
/// ground `ω^γ`, which absorbs every clipped block. Block of level `α` has
/// rank `α`; the ground has rank `γ − 1`.
pub struct BlockFamily {
    gamma: u64,
    ground: Ordinal,
    lens: Vec<Ordinal>,
}

impl BlockFamily {
    pub fn new(gamma: u64) -> Self {
        let lens = (0..gamma.saturating_sub(1))
            .map(|a| Ordinal::omega_pow(Ordinal::nat(a + 1)))
            .collect();
        BlockFamily {
            gamma,
            ground: Ordinal::omega_pow(Ordinal::nat(gamma)),
            lens,
        }
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    fn ground_set(&self) -> PointSet {
        PointSet::below(self.ground.clone())
    }

    pub fn block(&self, alpha: usize, xi: &Ordinal) -> PointSet {
        let len = &self.lens[alpha];
        let lo = len * xi;
        let hi = &lo + len;
        PointSet::interval(lo, hi)
    }

    /// `(level, ξ)` of an unclipped block.
    pub fn block_index(&self, s: &PointSet) -> Option<(usize, Ordinal)> {
        let iv = s.to_intervals()?;
        let [iv] = iv.as_slice() else { return None };
        let len = iv.hi.left_sub(&iv.lo)?;
        let alpha = self.lens.iter().position(|l| *l == len)?;
        let (xi, r) = iv.lo.divmod(&len).ok()?;
        (r.is_zero() && iv.hi <= self.ground).then_some((alpha, xi))
    }

    /// Number of level-`α` blocks starting below `b`.
    fn blocks_before(&self, alpha: usize, b: &Ordinal) -> Ordinal {
        let b = b.clone().min(self.ground.clone());
        let (q, r) = b.divmod(&self.lens[alpha]).expect("nonzero length");
        if r.is_zero() {
            q
        } else {
            q.succ()
        }
    }

    fn indices(count: &Ordinal, quota: usize) -> (Vec<Ordinal>, bool) {
        match count.as_nat() {
            Some(n) if n as usize <= quota => ((0..n).map(Ordinal::nat).collect(), true),
            _ => {
                let mut g = grid(count, SAMPLE_DIGITS, quota);
                g.pop();
                (g, false)
            }
        }
    }
}

impl SetFamily for BlockFamily {
    fn label(&self) -> String {
        format!("E(w,{})", self.gamma)
    }

    fn ground(&self) -> &Ordinal {
        &self.ground
    }

    /// Blocks starting below `bound`, level by level, each level limited to
    /// an equal share of `cap`; then the ground.
    fn enumerate(&self, bound: &Ordinal, cap: usize) -> Listing {
        let mut out = Vec::new();
        let mut complete = true;
        let quota = (cap / (self.lens.len() + 1)).max(1);
        for alpha in 0..self.lens.len() {
            let (idx, ok) = BlockFamily::indices(&self.blocks_before(alpha, bound), quota);
            complete &= ok;
            out.extend(idx.iter().map(|xi| self.block(alpha, xi)));
        }
        if !bound.is_zero() {
            out.push(self.ground_set());
        }
        Listing { members: out, complete }
    }

    fn contains(&self, s: &PointSet) -> Result<bool> {
        Ok(*s == self.ground_set() || self.block_index(s).is_some())
    }

    fn containing(&self, p: &Ordinal) -> Vec<PointSet> {
        if *p >= self.ground {
            return Vec::new();
        }
        let mut out: Vec<PointSet> = (0..self.lens.len())
            .map(|alpha| {
                let (xi, _) = p.divmod(&self.lens[alpha]).expect("nonzero length");
                self.block(alpha, &xi)
            })
            .collect();
        out.push(self.ground_set());
        out
    }

    fn members_below(&self, a: &PointSet, cap: usize) -> Listing {
        let (top, lo) = if *a == self.ground_set() {
            (self.lens.len(), Ordinal::zero())
        } else if let Some((alpha, xi)) = self.block_index(a) {
            (alpha, &self.lens[alpha] * &xi)
        } else {
            let l = self.enumerate(&a.strict_sup().unwrap_or_default(), cap);
            let members = l.members.into_iter().filter(|m| m.subset(a).unwrap_or(false)).collect();
            return Listing::partial(members);
        };
        let mut out = vec![a.clone()];
        let mut complete = true;
        let quota = (cap / (top + 1)).max(1);
        for beta in 0..top {
            // blocks of level beta inside a: lo / len_beta + ξ'
            let span = if top == self.lens.len() {
                self.ground.clone()
            } else {
                self.lens[top].clone()
            };
            let (count, _) = span.divmod(&self.lens[beta]).expect("nonzero length");
            let (base_xi, _) = lo.divmod(&self.lens[beta]).expect("nonzero length");
            let (idx, ok) = BlockFamily::indices(&count, quota);
            complete &= ok;
            out.extend(idx.iter().map(|x| self.block(beta, &(&base_xi + x))));
        }
        Listing { members: out, complete }
    }

    fn misses(&self, xi: &Ordinal) -> bool {
        match self.lens.first() {
            None => xi.is_zero(),
            Some(len) => {
                let (q, r) = xi.divmod(len).expect("nonzero length");
                let start = if r.is_zero() { q } else { q.succ() };
                (len * &start) < self.ground
            }
        }
    }

    fn restrict(&self, xi: &Ordinal, cap: usize) -> Restriction {
        let mut gens = Vec::new();
        let mut complete = true;
        let quota = (cap / (self.lens.len() + 1)).max(1);
        for alpha in 0..self.lens.len() {
            let (idx, ok) = BlockFamily::indices(&self.blocks_before(alpha, xi), quota);
            complete &= ok;
            for x in &idx {
                gens.push(self.block(alpha, x).truncate(xi).expect("interval sets"));
            }
        }
        if !xi.is_zero() {
            gens.push(self.ground_set().truncate(xi).expect("interval sets"));
        }
        Restriction::new(xi.clone(), dedup_sorted(gens), self.misses(xi), complete)
    }

    fn rank_formula(&self, a: &PointSet) -> Option<Ordinal> {
        if *a == self.ground_set() {
            return Some(Ordinal::nat(self.gamma.saturating_sub(1)));
        }
        self.block_index(a).map(|(alpha, _)| Ordinal::nat(alpha as u64))
    }

    fn rank_count(&self, rank: &Ordinal) -> Option<Option<u64>> {
        let r = rank.as_nat()?;
        let top = self.gamma.saturating_sub(1);
        Some(if r < top {
            None
        } else if r == top {
            Some(1)
        } else {
            Some(0)
        })
    }

    fn tree_like_by_construction(&self) -> bool {
        true
    }
}

/// `{[0, ξ) : ξ ≤ α}` over the ground `α`.
///
/// Enumerations run over the ordinal grid of `α` whose digits are bounded by
/// the truncation bound.
pub struct SegmentFamily {
    alpha: Ordinal,
}

impl SegmentFamily {
    pub fn new(alpha: Ordinal) -> Self {
        SegmentFamily { alpha }
    }

    pub fn segment(x: &Ordinal) -> PointSet {
        PointSet::below(x.clone())
    }

    /// `ξ` with `s = [0, ξ)`.
    pub fn index(s: &PointSet) -> Option<Ordinal> {
        if s.is_empty() {
            return Some(Ordinal::zero());
        }
        let iv = s.to_intervals()?;
        match iv.as_slice() {
            [i] if i.lo.is_zero() => Some(i.hi.clone()),
            _ => None,
        }
    }

    fn digits(bound: &Ordinal) -> u64 {
        bound.as_nat().unwrap_or(DEFAULT_DIGITS)
    }

    /// Segments with index in `(lo, hi]`.
    fn between(&self, lo: Option<&Ordinal>, hi: &Ordinal, digits: u64, cap: usize) -> Listing {
        let start = lo.map(|l| l.succ()).unwrap_or_default();
        if let Some(gap) = hi.left_sub(&start).and_then(|g| g.as_nat()) {
            if gap as usize <= cap {
                let members = (0..=gap)
                    .map(|k| SegmentFamily::segment(&(&start + &Ordinal::nat(k))))
                    .collect();
                return Listing::complete(members);
            }
        }
        let mut members: Vec<PointSet> = grid(hi, digits, cap)
            .into_iter()
            .filter(|x| *x >= start)
            .map(|x| SegmentFamily::segment(&x))
            .collect();
        members.insert(0, SegmentFamily::segment(&start));
        members.dedup();
        Listing::partial(members)
    }
}

impl SetFamily for SegmentFamily {
    fn label(&self) -> String {
        format!("seg({})", self.alpha)
    }

    fn ground(&self) -> &Ordinal {
        &self.alpha
    }

    fn enumerate(&self, bound: &Ordinal, cap: usize) -> Listing {
        self.between(None, &self.alpha, SegmentFamily::digits(bound), cap)
    }

    fn contains(&self, s: &PointSet) -> Result<bool> {
        Ok(SegmentFamily::index(s).is_some_and(|x| x <= self.alpha))
    }

    fn containing(&self, p: &Ordinal) -> Vec<PointSet> {
        if *p >= self.alpha {
            return Vec::new();
        }
        self.between(Some(p), &self.alpha, DEFAULT_DIGITS, 4096).members
    }

    fn members_below(&self, a: &PointSet, cap: usize) -> Listing {
        match SegmentFamily::index(a) {
            Some(x) => self.between(None, &x, DEFAULT_DIGITS, cap),
            None => Listing::partial(Vec::new()),
        }
    }

    fn nbhd(&self, a: &PointSet, bs: &[PointSet], cap: usize) -> Listing {
        let (Some(x), Some(ys)) = (
            SegmentFamily::index(a),
            bs.iter().map(SegmentFamily::index).collect::<Option<Vec<_>>>(),
        ) else {
            return Listing::partial(Vec::new());
        };
        match ys.iter().max() {
            Some(y) if *y >= x => Listing::complete(Vec::new()),
            y => self.between(y, &x, DEFAULT_DIGITS, cap),
        }
    }

    fn maximal_below(&self, a: &PointSet, _cap: usize) -> Listing {
        match SegmentFamily::index(a) {
            Some(x) => Listing::complete(x.pred().map(|p| SegmentFamily::segment(&p)).into_iter().collect()),
            None => Listing::partial(Vec::new()),
        }
    }

    fn misses(&self, _xi: &Ordinal) -> bool {
        true
    }

    fn restrict(&self, xi: &Ordinal, cap: usize) -> Restriction {
        let top = xi.clone().min(self.alpha.clone());
        let l = self.between(None, &top, DEFAULT_DIGITS, cap);
        Restriction::new(xi.clone(), l.members, true, l.complete)
    }

    fn rank_formula(&self, a: &PointSet) -> Option<Ordinal> {
        SegmentFamily::index(a)
    }

    fn structural_level(&self, a: &PointSet) -> Option<Ordinal> {
        SegmentFamily::index(a).map(|x| x.cb_rank())
    }

    fn tree_like_by_construction(&self) -> bool {
        true
    }
}

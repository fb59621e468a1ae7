use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Listing, Restriction, SetFamily};
use crate::ordinal::Ordinal;
use crate::pointset::PointSet;
use crate::{Error, Result};

/// On-disk form `{ "ground": "<ordinal>", "members": ["<pointset>", ...] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub ground: Ordinal,
    pub members: Vec<PointSet>,
}

/// A finite family, stored with exact ranks.
///
/// Members are ordered by `(rank, min, structural order)`.
#[derive(Clone, Debug)]
pub struct ExplicitFamily {
    label: String,
    ground: Ordinal,
    members: Vec<PointSet>,
    ranks: Vec<u64>,
    index: HashMap<PointSet, usize>,
}

impl ExplicitFamily {
    pub fn new(label: impl Into<String>, ground: Ordinal, members: Vec<PointSet>) -> Result<Self> {
        let mut members = super::dedup_sorted(members);
        for m in &members {
            let sup = m.strict_sup().unwrap_or_default();
            if sup > ground {
                return Err(Error::Invalid(format!("member {m} is not a subset of {ground}")));
            }
        }
        let n = members.len();
        let below: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && members[j].subset(&members[i]).unwrap_or(false))
                    .collect()
            })
            .collect();
        let mut memo: Vec<Option<u64>> = vec![None; n];
        fn rank_of(i: usize, below: &[Vec<usize>], memo: &mut [Option<u64>]) -> u64 {
            if let Some(r) = memo[i] {
                return r;
            }
            let r = below[i]
                .iter()
                .map(|&j| rank_of(j, below, memo) + 1)
                .max()
                .unwrap_or(0);
            memo[i] = Some(r);
            r
        }
        let ranks_unsorted: Vec<u64> = (0..n).map(|i| rank_of(i, &below, &mut memo)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            ranks_unsorted[a]
                .cmp(&ranks_unsorted[b])
                .then_with(|| members[a].min_point().cmp(&members[b].min_point()))
                .then_with(|| members[a].cmp(&members[b]))
        });
        let ranks: Vec<u64> = order.iter().map(|&i| ranks_unsorted[i]).collect();
        let mut sorted: Vec<Option<PointSet>> = members.drain(..).map(Some).collect();
        let members: Vec<PointSet> = order.iter().map(|&i| sorted[i].take().expect("once")).collect();
        let index = members.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(ExplicitFamily {
            label: label.into(),
            ground,
            members,
            ranks,
            index,
        })
    }

    pub fn from_json(label: impl Into<String>, text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text)?;
        ExplicitFamily::new(label, file.ground, file.members)
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            ground: self.ground.clone(),
            members: self.members.clone(),
        }
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn rank_of(&self, a: &PointSet) -> Option<u64> {
        self.index.get(a).map(|&i| self.ranks[i])
    }

    /// Nested-or-disjoint on every pair.
    pub fn is_tree_like(&self) -> bool {
        let m = &self.members;
        (0..m.len()).all(|i| {
            (i + 1..m.len()).all(|j| {
                m[i].disjoint(&m[j]).unwrap_or(false)
                    || m[i].subset(&m[j]).unwrap_or(false)
                    || m[j].subset(&m[i]).unwrap_or(false)
            })
        })
    }
}

impl SetFamily for ExplicitFamily {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn ground(&self) -> &Ordinal {
        &self.ground
    }

    /// All members whose minimum lies below `bound`, and `∅`.
    fn enumerate(&self, bound: &Ordinal, cap: usize) -> Listing {
        let hits: Vec<PointSet> = self
            .members
            .iter()
            .filter(|m| m.min_point().is_none_or(|x| x < *bound))
            .cloned()
            .collect();
        let complete = hits.len() <= cap;
        Listing {
            members: hits.into_iter().take(cap).collect(),
            complete,
        }
    }

    fn contains(&self, s: &PointSet) -> Result<bool> {
        Ok(self.index.contains_key(s))
    }

    fn containing(&self, p: &Ordinal) -> Vec<PointSet> {
        self.members.iter().filter(|m| m.member(p)).cloned().collect()
    }

    fn members_below(&self, a: &PointSet, _cap: usize) -> Listing {
        Listing::complete(
            self.members
                .iter()
                .filter(|m| m.subset(a).unwrap_or(false))
                .cloned()
                .collect(),
        )
    }

    fn misses(&self, xi: &Ordinal) -> bool {
        self.members.iter().any(|m| m.min_point().is_none_or(|x| x >= *xi))
    }

    fn restrict(&self, xi: &Ordinal, _cap: usize) -> Restriction {
        let mut ok = true;
        let gens = self
            .members
            .iter()
            .filter_map(|m| match m.truncate(xi) {
                Ok(t) => Some(t),
                Err(_) => {
                    ok = false;
                    None
                }
            })
            .collect();
        Restriction::new(xi.clone(), gens, self.misses(xi), ok)
    }

    fn as_explicit(&self) -> Option<&ExplicitFamily> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(ground: u64, members: &[&str]) -> ExplicitFamily {
        ExplicitFamily::new(
            "t",
            Ordinal::nat(ground),
            members.iter().map(|s| s.parse().unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn ranks_of_powerset() {
        let f = fam(3, &["{}", "{0}", "{1}", "{2}", "{0,1}", "{0,2}", "{1,2}", "{0,1,2}"]);
        assert_eq!(f.rank_of(&"{0,1,2}".parse().unwrap()), Some(3));
        assert_eq!(f.rank_of(&"{}".parse().unwrap()), Some(0));
        assert_eq!(f.members()[0], PointSet::empty());
    }

    #[test]
    fn rejects_member_outside_ground() {
        let r = ExplicitFamily::new("t", Ordinal::nat(2), vec!["{5}".parse().unwrap()]);
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn json_roundtrip() {
        let f = fam(4, &["{0,1}", "[2,4)", "{0,1,2,3}"]);
        let text = serde_json::to_string(&f.to_file()).unwrap();
        let g = ExplicitFamily::from_json("t", &text).unwrap();
        assert_eq!(f.members(), g.members());
        assert!(f.is_tree_like());
    }

    #[test]
    fn restriction_follows_the_definition() {
        let f = fam(3, &["{0,1,2}"]);
        let r = f.restrict(&Ordinal::nat(2), 100);
        assert_eq!(r.gens, vec!["{0,1}".parse::<PointSet>().unwrap()]);
        assert!(!r.has_empty);
    }
}

use std::sync::Arc;

use lcs_core::constructions::{block_family, SegmentFamily};
use lcs_core::family::{ExplicitFamily, Family, SetFamily};
use lcs_core::random::cap_closed_family;
use lcs_core::space::{cb_levels, isolation_witness, ordinal_space_check, witness_holds, LevelMethod};
use lcs_core::{Budget, Ordinal, PointSet};
use proptest::prelude::*;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn check_report(f: &dyn SetFamily, budget: &Budget) {
    let r = cb_levels(f, 3, budget);
    for m in &r.members {
        if m.method == LevelMethod::Witness {
            assert!(witness_holds(f, &m.member, &m.witness, &[], budget.cap), "{}", m.member);
        }
        if let (Some(l), Some(rk)) = (&m.level, &m.rank) {
            assert!(l <= rk, "level {l} above rank {rk} at {}", m.member);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn witnesses_replay_and_levels_stay_below_ranks(seed in 0u64..10_000) {
        let f = cap_closed_family(seed, 10);
        check_report(&f, &Budget::with_bound(f.ground().clone()));
    }

    #[test]
    fn subfamilies_have_isolated_minimal_members(seed in 0u64..10_000, mask in 1u64..u64::MAX) {
        let f = cap_closed_family(seed, 10);
        let sub: Vec<PointSet> = f
            .members()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, m)| m.clone())
            .collect();
        prop_assume!(!sub.is_empty());
        let s = ExplicitFamily::new("sub", f.ground().clone(), sub.clone()).unwrap();
        let minimal = sub
            .iter()
            .find(|a| !sub.iter().any(|b| b != *a && b.subset(a).unwrap()))
            .expect("finite families have minimal members");
        let b = Budget::default();
        prop_assert_eq!(isolation_witness(&s, minimal, &[], &b), Some(vec![]));
    }

    #[test]
    fn stripping_in_two_runs_matches_one(seed in 0u64..10_000) {
        let f = cap_closed_family(seed, 10);
        let b = Budget::with_bound(f.ground().clone());
        let one = cb_levels(&f, 2, &b);
        let wide = cb_levels(&f, 4, &b);
        let residue: Vec<PointSet> = one
            .members
            .iter()
            .filter(|m| m.level.is_none())
            .map(|m| m.member.clone())
            .collect();
        for m in &one.members {
            if let Some(l) = &m.level {
                prop_assert_eq!(Some(l), wide.level_of(&m.member).and_then(|w| w.level.as_ref()));
            }
        }
        if !residue.is_empty() {
            let rest = ExplicitFamily::new("rest", f.ground().clone(), residue).unwrap();
            let again = cb_levels(&rest, 2, &b);
            prop_assert_eq!(again.members.len(), one.unresolved);
        }
    }
}

#[test]
fn block_family_reports_are_sound() {
    for (k, g, bound) in [("w", "2", "w*20"), ("w", "3", "w^2*2"), ("2", "2", "4"), ("3", "3", "27")] {
        let e = block_family(&o(k), &o(g)).unwrap();
        check_report(e.as_ref(), &Budget::with_bound(o(bound)));
    }
}

#[test]
fn successor_after_limit_diverges() {
    let f = SegmentFamily::new(o("w+1"));
    let v = ordinal_space_check(&f, &o("w+1"), &Budget::with_bound(Ordinal::nat(128)));
    assert!(v.is_verified(), "{v}");
    assert!(v.notes.iter().any(|n| n.contains("divergence")), "{:?}", v.notes);
    // the segment [0, w+1) = T_{w+1}: isolated, yet of rank w + 1
    let t = SegmentFamily::segment(&o("w+1"));
    let b = Budget::default();
    let r = cb_levels(&f, 3, &b);
    let m = r.level_of(&t).expect("listed");
    assert_eq!(m.level, Some(Ordinal::zero()));
    assert!(m.rank.as_ref().is_some_and(|r| !r.is_zero()));
    let fam: Family = Arc::new(f);
    assert!(fam.contains(&t).unwrap());
}

use std::sync::Arc;

use lcs_core::constructions::{block_family, CodedFamily};
use lcs_core::family::{
    delta, klift, split, star, verify_property, Amalgam, DeltaOutcome, ExplicitFamily, Family, FamilySystem,
    Property, SetFamily,
};
use lcs_core::random::{perturbed_pair, tree_family};
use lcs_core::{Budget, Ordinal, PointSet};
use proptest::prelude::*;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn arc(f: ExplicitFamily) -> Family {
    Arc::new(f)
}

const PROPS: [Property; 3] = [Property::TreeLike, Property::ChainClosed, Property::WellFounded];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn restriction_keeps_structure(seed in 0u64..10_000, k in 0u64..3, n in 0u64..20) {
        let f = tree_family(seed);
        let b = Budget::with_bound(f.ground().clone());
        let xi = (&Ordinal::monomial(Ordinal::one(), k) + &Ordinal::nat(n)).min(f.ground().clone());
        let r = f.restrict(&xi, b.cap);
        let Some(gens) = r.expand() else { return Err(TestCaseError::reject("not expandable")) };
        let rf = ExplicitFamily::new("r", xi.max(Ordinal::one()), gens).unwrap();
        for p in PROPS {
            if verify_property(&f, p, &b).is_verified() {
                prop_assert!(verify_property(&rf, p, &b).is_verified(), "{} lost at {}", p, r.xi);
            }
        }
    }

    #[test]
    fn starred_delta_is_a_successor(seed in 0u64..10_000) {
        let (a, b) = perturbed_pair(seed);
        let budget = Budget::with_bound(a.ground().clone());
        let (sa, sb) = (star(arc(a)), star(arc(b)));
        match delta(sa.as_ref(), sb.as_ref(), &budget) {
            DeltaOutcome::Found { delta, exact } => {
                prop_assert!(exact);
                prop_assert!(delta.is_successor(), "limit delta {}", delta);
            }
            // a removed member may be a truncation of another, leaving the stars equal
            DeltaOutcome::EqualUpToBound { .. } => {}
            other => prop_assert!(false, "{}", other),
        }
    }

    #[test]
    fn split_sets_are_consistent(seed in 0u64..10_000, i in 0usize..64, j in 0usize..64) {
        let f = tree_family(seed);
        let pts = f.ground().as_nat().map(|n| n.min(64)).unwrap_or(64);
        let (alpha, beta) = (Ordinal::nat(i as u64 % pts), Ordinal::nat(j as u64 % pts));
        let s = split(&f, &alpha, &beta).unwrap();
        if alpha != beta {
            prop_assert_eq!(s.member(&alpha), f.containing(&alpha).iter().any(|c| !c.member(&beta)));
        }
        prop_assert!(!s.member(&beta));
        for m in f.members() {
            if m.member(&alpha) && !m.member(&beta) {
                prop_assert!(m.subset(&s).unwrap());
            }
        }
    }
}

#[test]
fn full_size_star_members_are_the_family() {
    // every member of F reaches the ground, so the cofinal part of star(F) is F
    for g in [2u64, 3] {
        let f: Family = Arc::new(CodedFamily::new(&Ordinal::nat(g)).unwrap());
        let s = star(f.clone());
        let l = s.enumerate(&Ordinal::nat(200), 4096);
        let mut full = 0;
        for m in &l.members {
            if !m.is_finite() {
                full += 1;
                assert!(f.contains(m).unwrap(), "{m}");
            }
        }
        for m in f.enumerate(&Ordinal::nat(200), 4096).members {
            assert!(s.contains(&m).unwrap());
        }
        assert!(full > 0);
    }
}

#[test]
fn distinct_gammas_differ_below_the_bound() {
    let b = Budget::with_bound(Ordinal::nat(200));
    let f2: Family = Arc::new(CodedFamily::new(&o("2")).unwrap());
    let f3: Family = Arc::new(CodedFamily::new(&o("3")).unwrap());
    let d = delta(star(f2).as_ref(), star(f3).as_ref(), &b);
    let v = d.value().expect("found below 200");
    assert!(v.is_successor());
}

#[test]
fn lift_preserves_containment() {
    let b = Budget::with_bound(Ordinal::nat(6));
    let members: Vec<PointSet> = (0..=6)
        .map(|n| PointSet::below(Ordinal::nat(n)))
        .chain(["{3}", "{4,5}", "{1,2}"].map(|t| t.parse().unwrap()))
        .collect();
    let g = arc(ExplicitFamily::new("g", Ordinal::nat(6), members).unwrap());
    let lifted = klift(g.clone(), 0, &b).unwrap();
    let ms = g.enumerate(g.ground(), 4096).members;
    for x in &ms {
        for y in &ms {
            let (lx, ly) = (lifted.lift(x), lifted.lift(y));
            assert_eq!(lx.key, ly.key);
            assert_eq!(lx.set.subset(&ly.set).unwrap(), x.subset(y).unwrap());
        }
    }
}

#[test]
fn amalgam_agreement_is_symmetric_and_keys_are_transitive() {
    let b = Budget::with_bound(Ordinal::nat(40));
    let fams: Vec<Family> = [2u64, 3, 4]
        .iter()
        .map(|g| -> Family { star(Arc::new(CodedFamily::new(&Ordinal::nat(*g)).unwrap())) })
        .collect();
    let am = Amalgam::new(FamilySystem::new(fams).unwrap(), &b).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(am.agreement(i, j), am.agreement(j, i));
        }
    }
    for eta in (0..40).map(Ordinal::nat) {
        let keys: Vec<_> = (0..3).map(|i| am.point(i, &eta).class_key).collect();
        for i in 0..3 {
            for j in 0..3 {
                let single = PointSet::from_points([eta.clone()]);
                if am.shared(i, j, &single) {
                    assert_eq!(keys[i], keys[j], "eta {eta}, {i} ~ {j}");
                }
            }
        }
    }
}

#[test]
fn block_families_have_the_documented_shape() {
    let e = block_family(&o("2"), &o("2")).unwrap();
    let l = e.enumerate(e.ground(), 100);
    let shown: Vec<String> = l.members.iter().map(|m| m.to_string()).collect();
    assert!(l.complete);
    assert_eq!(e.ground(), &o("4"));
    assert_eq!(shown, ["{0, 1}", "{2, 3}", "{0, 1, 2, 3}"]);
    assert!(block_family(&o("w"), &o("w")).is_err());
}

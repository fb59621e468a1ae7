use std::sync::Arc;

use super::*;
use crate::constructions::{BlockFamily, CodedFamily, SegmentFamily};
use crate::family::{star, ExplicitFamily, Family};
use crate::ordinal::Ordinal;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn ps(s: &str) -> PointSet {
    s.parse().unwrap()
}

fn explicit(ground: u64, members: &[&str]) -> ExplicitFamily {
    ExplicitFamily::new("t", Ordinal::nat(ground), members.iter().map(|s| ps(s)).collect()).unwrap()
}

#[test]
fn nbhd_preconditions() {
    let f = explicit(3, &["{0}", "{0,1}", "{2}"]);
    let w = basic_nbhd(&f, &ps("{0,1}"), &[ps("{0}")], 10).unwrap();
    assert_eq!(w.members, vec![ps("{0,1}")]);
    assert!(matches!(basic_nbhd(&f, &ps("{0,1}"), &[ps("{2}")], 10), Err(Error::PreconditionFailure(_))));
    assert!(matches!(basic_nbhd(&f, &ps("{0,1}"), &[ps("{0,1}")], 10), Err(Error::PreconditionFailure(_))));
    assert!(members_below(&f, &ps("{1}"), 10).is_err());
}

#[test]
fn witnesses() {
    let b = Budget::default();
    let e = BlockFamily::new(2);
    assert_eq!(isolation_witness(&e, &ps("[w*3, w*4)"), &[], &b), Some(vec![]));
    assert_eq!(isolation_witness(&e, &ps("[0, w^2)"), &[], &b), None);
    let s = SegmentFamily::new(o("w"));
    assert_eq!(isolation_witness(&s, &ps("[0, w)"), &[], &b), None);
    assert_eq!(isolation_witness(&s, &ps("[0, 4)"), &[], &b), Some(vec![ps("[0, 3)")]));
    assert!(witness_holds(&s, &ps("[0, 4)"), &[ps("[0, 3)")], &[], 100));
}

#[test]
fn powerset_is_discrete() {
    let f = explicit(2, &["{}", "{0}", "{1}", "{0,1}"]);
    let r = cb_levels(&f, 4, &Budget::default());
    assert!(r.members.iter().all(|m| m.level == Some(o("0"))));
    assert_eq!(r.level_sizes, vec![LevelSize { level: o("0"), size: "4".into() }]);
    assert_eq!(r.height_lower_bound, o("1"));
    assert!(r.to_dot(10).contains("n0 -> n"));
}

#[test]
fn block_levels() {
    let e = BlockFamily::new(2);
    let r = cb_levels(&e, 3, &Budget::with_bound(o("w*20")));
    assert_eq!(r.level_of(&ps("[w*3, w*4)")).unwrap().level, Some(o("0")));
    let top = r.level_of(&ps("[0, w^2)")).unwrap();
    assert_eq!(top.level, Some(o("1")));
    assert_eq!(top.method, LevelMethod::RankShortcut);
    assert_eq!(r.height_lower_bound, o("2"));
    assert_eq!(r.level_sizes[0].size, "≥20");
    assert_eq!(r.level_sizes[1].size, "1");
}

#[test]
fn ordinal_spaces() {
    let b = Budget::with_bound(o("128"));
    for a in ["5", "17", "w", "w*2"] {
        let v = ordinal_space_check(&SegmentFamily::new(o(a)), &o(a), &b);
        assert!(v.is_verified(), "{a}: {v}");
    }
    let v = ordinal_space_check(&SegmentFamily::new(o("w+1")), &o("w+1"), &b);
    assert!(v.is_verified());
    assert!(v.notes.iter().any(|n| n.contains("divergence") && n.contains("w + 1")));
    let broken = explicit(3, &["{}", "{0,1}", "{0,1,2}"]);
    assert!(ordinal_space_check(&broken, &o("3"), &b).is_falsified());
}

#[test]
fn compactness() {
    let e = BlockFamily::new(2);
    let b = Budget::with_bound(o("w*4"));
    assert!(compact_spotcheck(&e, &ps("[0, w^2)"), &b).is_verified());
    let f = explicit(4, &["{0,1,2,3}", "{0,1}", "{2,3}", "{0}"]);
    assert!(compact_spotcheck(&f, &ps("{0,1,2,3}"), &b).is_verified());
}

#[test]
fn subspaces() {
    let b = Budget::with_bound(o("30"));
    let f: Family = Arc::new(CodedFamily::new(&o("2")).unwrap());
    let s = star(f.clone());
    assert!(subspace_check(f.as_ref(), s.as_ref(), SubspaceMode::Closed, &b).is_verified());
    assert!(subspace_check(f.as_ref(), f.as_ref(), SubspaceMode::Open, &b).is_verified());
}

#[test]
fn star_levels() {
    let b = Budget::with_bound(o("60"));
    let single: Family = Arc::new(explicit(12, &["[0, 12)"]));
    assert!(star_level_check(&single, &b).unwrap().is_verified());
    let f: Family = Arc::new(CodedFamily::new(&o("2")).unwrap());
    let v = star_level_check(&f, &b).unwrap();
    assert!(v.is_verified(), "{v}");
    let bad: Family = Arc::new(explicit(12, &["[0, 12)", "{0, 1}"]));
    assert!(matches!(star_level_check(&bad, &b), Err(Error::PreconditionFailure(_))));
}

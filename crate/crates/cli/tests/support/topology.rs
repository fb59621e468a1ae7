//! Reference Cantor-Bendixson levels for a finite family, computed from the
//! topology itself: the subbase `{[A], F ∖ [A]}` with `[A] = {B : B ⊆ A}`,
//! relativized to the remaining points at every stripping round.

use std::collections::BTreeSet;

/// Members as bit masks over a ground of at most 64 points. Returns the
/// level of every member; `None` if stripping stalls (not scattered).
pub fn reference_levels(members: &[u64]) -> Vec<Option<usize>> {
    let n = members.len();
    let below = |a: usize, b: usize| members[b] & !members[a] == 0; // B ⊆ A
    // subbase elements as sets of member indices
    let mut subbase: Vec<BTreeSet<usize>> = Vec::new();
    for a in 0..n {
        let down: BTreeSet<usize> = (0..n).filter(|&b| below(a, b)).collect();
        let up: BTreeSet<usize> = (0..n).filter(|b| !down.contains(b)).collect();
        subbase.push(down);
        subbase.push(up);
    }
    let mut level = vec![None; n];
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut round = 0;
    while !alive.is_empty() {
        // the smallest open set around x is the intersection of the subbase
        // elements containing it; x is isolated when that is {x}
        let isolated: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&x| {
                let mut nbhd = alive.clone();
                for s in subbase.iter().filter(|s| s.contains(&x)) {
                    nbhd.retain(|y| s.contains(y));
                }
                nbhd.len() == 1
            })
            .collect();
        if isolated.is_empty() {
            break;
        }
        for x in isolated {
            level[x] = Some(round);
            alive.remove(&x);
        }
        round += 1;
    }
    level
}

#[test]
fn two_point_family_is_discrete() {
    assert_eq!(reference_levels(&[0b01, 0b11]), vec![Some(0), Some(0)]);
}

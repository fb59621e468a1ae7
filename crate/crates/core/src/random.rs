//! Seeded random families for the property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::{ExplicitFamily, SetFamily};
use crate::ordinal::Ordinal;
use crate::pointset::PointSet;

/// Finite parts of generated endpoints stay below this.
pub const FINITE_PART: u64 = 128;

fn ground_for(rng: &mut ChaCha8Rng) -> Ordinal {
    let w = Ordinal::omega();
    match rng.gen_range(0..4) {
        0 => Ordinal::nat(rng.gen_range(1..FINITE_PART)),
        1 => w,
        2 => &w + &Ordinal::nat(rng.gen_range(1..FINITE_PART)),
        _ => &w * &Ordinal::nat(2),
    }
}

/// Candidate cut points strictly inside `(lo, hi)`.
fn cuts(lo: &Ordinal, hi: &Ordinal, rng: &mut ChaCha8Rng) -> Vec<Ordinal> {
    let w = Ordinal::omega();
    let mut out = Vec::new();
    let finite = match (lo.as_nat(), hi.as_nat()) {
        (Some(a), Some(b)) if b > a + 1 => Some((a + 1, b)),
        _ => None,
    };
    for _ in 0..rng.gen_range(1..=3) {
        let p = match finite {
            Some((a, b)) => Ordinal::nat(rng.gen_range(a..b)),
            None => {
                let n = Ordinal::nat(rng.gen_range(1..FINITE_PART));
                if rng.gen_bool(0.5) {
                    n
                } else {
                    &w + &n
                }
            }
        };
        if p > *lo && p < *hi {
            out.push(p);
        }
    }
    if w > *lo && w < *hi && rng.gen_bool(0.3) {
        out.push(w);
    }
    out.sort();
    out.dedup();
    out
}

fn split(lo: Ordinal, hi: Ordinal, depth: u32, rng: &mut ChaCha8Rng, out: &mut Vec<PointSet>) {
    if depth == 0 {
        return;
    }
    let mut points = vec![lo];
    points.extend(cuts(&points[0], &hi, rng));
    points.push(hi);
    for piece in points.windows(2) {
        if rng.gen_bool(0.7) {
            out.push(PointSet::interval(piece[0].clone(), piece[1].clone()));
            split(piece[0].clone(), piece[1].clone(), depth - 1, rng, out);
        }
    }
}

/// A tree-like family of intervals over a ground `≤ ω·2` that contains the
/// ground. Finite, hence chain-closed and well-founded.
pub fn tree_family(seed: u64) -> ExplicitFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ground = ground_for(&mut rng);
    let mut members = vec![PointSet::below(ground.clone())];
    split(Ordinal::zero(), ground.clone(), 4, &mut rng, &mut members);
    members.sort();
    members.dedup();
    ExplicitFamily::new(format!("tree#{seed}"), ground, members).expect("members lie in the ground")
}

/// A tree family and a copy with one member removed or one new block added.
pub fn perturbed_pair(seed: u64) -> (ExplicitFamily, ExplicitFamily) {
    let base = tree_family(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut members = base.members().to_vec();
    let ground = base.ground().clone();
    let full = PointSet::below(ground.clone());
    let removable: Vec<usize> = (0..members.len()).filter(|&i| members[i] != full).collect();
    if !removable.is_empty() && rng.gen_bool(0.5) {
        members.remove(*removable.choose(&mut rng).expect("nonempty"));
    } else {
        let mut extra = Vec::new();
        for _ in 0..16 {
            let host = members.choose(&mut rng).expect("ground is a member").clone();
            let iv = host.to_intervals().expect("interval members");
            split(iv[0].lo.clone(), iv[0].hi.clone(), 1, &mut rng, &mut extra);
        }
        let nested = |e: &PointSet, m: &PointSet| {
            e.subset(m).unwrap_or(false) || m.subset(e).unwrap_or(false) || e.disjoint(m).unwrap_or(false)
        };
        let fresh = extra
            .into_iter()
            .find(|e| !members.contains(e) && members.iter().all(|m| nested(e, m)));
        match fresh {
            Some(e) => members.push(e),
            None if !removable.is_empty() => {
                members.remove(removable[0]);
            }
            None => {}
        }
    }
    let other = ExplicitFamily::new(format!("tree#{seed}'"), ground, members).expect("members lie in the ground");
    (base, other)
}

/// A ∩-closed family of subsets of a ground of at most `max_ground` points.
pub fn cap_closed_family(seed: u64, max_ground: u64) -> ExplicitFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_ground.clamp(1, 63));
    let k = rng.gen_range(1..=8);
    let mut masks: Vec<u64> = (0..k).map(|_| rng.gen_range(1..(1u64 << n))).collect();
    loop {
        let before = masks.len();
        let snapshot = masks.clone();
        for a in &snapshot {
            for b in &snapshot {
                let m = a & b;
                if m != 0 && !masks.contains(&m) {
                    masks.push(m);
                }
            }
        }
        if masks.len() == before {
            break;
        }
    }
    let members = masks
        .iter()
        .map(|m| PointSet::from_points((0..n).filter(|i| m >> i & 1 == 1).map(Ordinal::nat)))
        .collect();
    ExplicitFamily::new(format!("capped#{seed}"), Ordinal::nat(n), members).expect("points lie in the ground")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_tree_like() {
        for seed in 0..20 {
            let f = tree_family(seed);
            assert!(f.is_tree_like(), "seed {seed}");
            assert_eq!(f.members(), tree_family(seed).members());
            let (a, b) = perturbed_pair(seed);
            assert_ne!(a.members(), b.members(), "seed {seed}");
            assert!(b.is_tree_like());
        }
    }

    #[test]
    fn intersections_present() {
        for seed in 0..20 {
            let f = cap_closed_family(seed, 12);
            for a in f.members() {
                for b in f.members() {
                    let m = a.intersect(b).unwrap();
                    assert!(m.is_empty() || f.members().contains(&m));
                }
            }
        }
    }
}

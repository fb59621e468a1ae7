use std::sync::Arc;

use lcs_core::constructions::{run_pipeline, CodedFamily, PipelineConfig};
use lcs_core::family::{
    char_check, delta, star, verify_property, DeltaOutcome, ExplicitFamily, Family, Property, SetFamily,
};
use lcs_core::ordinal::{grid, Ordinal};
use lcs_core::random::{perturbed_pair, tree_family};
use lcs_core::space::{cb_levels, isolation_witness, star_level_check, subspace_check, SubspaceMode};
use lcs_core::{Budget, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::topology::reference_levels;
use super::lcs_json;

pub fn characterization() -> Result<String, String> {
    let mut grounds = Vec::new();
    for seed in 0..100 {
        let f = tree_family(seed);
        let b = Budget::with_bound(f.ground().clone());
        for p in [Property::TreeLike, Property::ChainClosed, Property::WellFounded] {
            let v = verify_property(&f, p, &b);
            if !v.is_verified() {
                return Err(format!("generator seed {seed}: {v}"));
            }
        }
        let v = char_check(&f, &b);
        if !v.is_verified() {
            return Err(format!("seed {seed}: {v}"));
        }
        grounds.push(f.ground().clone());
    }
    let top = grounds.iter().max().cloned().unwrap_or_default();
    Ok(format!("100 families, largest ground {top}, both inclusions verified"))
}

pub fn successor_deltas() -> Result<String, String> {
    let (mut found, mut equal, mut alarms) = (0, 0, Vec::new());
    for seed in 0..100 {
        let (a, b) = perturbed_pair(seed);
        let budget = Budget::with_bound(a.ground().clone());
        let (sa, sb): (Family, Family) = (star(Arc::new(a)), star(Arc::new(b)));
        match delta(sa.as_ref(), sb.as_ref(), &budget) {
            DeltaOutcome::Found { delta, exact: true } => {
                found += 1;
                if !delta.is_successor() {
                    alarms.push(format!("seed {seed}: {delta}"));
                }
            }
            DeltaOutcome::EqualUpToBound { .. } => equal += 1,
            other => return Err(format!("seed {seed}: {other}")),
        }
    }
    let summary = format!("{found} deltas found, all checked; {equal} pairs with equal stars; {} limit alarms", alarms.len());
    if alarms.is_empty() && found > 0 {
        Ok(summary)
    } else {
        Err(format!("{summary} {alarms:?}"))
    }
}

fn traces_in(note: &str) -> Option<usize> {
    let rest = note.split("at least ").nth(1)?;
    rest.split_whitespace().next()?.parse().ok()
}

pub fn star_levels() -> Result<String, String> {
    let budget = Budget::with_bound(Ordinal::nat(200));
    let mut parts = Vec::new();
    for g in [2u64, 3] {
        let f: Family = Arc::new(CodedFamily::new(&Ordinal::nat(g)).map_err(|e| e.to_string())?);
        let s: Family = star(f.clone());
        let closed = subspace_check(f.as_ref(), s.as_ref(), SubspaceMode::Closed, &budget);
        if !closed.is_verified() {
            return Err(format!("{closed}"));
        }
        let listed = s.enumerate(&budget.bound, budget.cap).members;
        let mut isolated = 0;
        for m in &listed {
            if isolation_witness(s.as_ref(), m, &[], &budget).is_some() {
                if !m.is_finite() {
                    return Err(format!("isolated infinite member {m} of {}", s.label()));
                }
                isolated += 1;
            }
        }
        let v = star_level_check(&f, &budget).map_err(|e| e.to_string())?;
        let traces = v.notes.iter().find_map(|n| traces_in(n)).unwrap_or(0);
        if !v.is_verified() || traces < 100 {
            return Err(format!("{v} with {traces} traces"));
        }
        parts.push(format!("F_{g}: {isolated}/{} isolated members finite, {traces} traces", listed.len()));
    }
    Ok(parts.join("; "))
}

const HYPOTHESES: [&str; 7] = ["hyp_i", "hyp_ii", "hyp_iii", "hyp_iv", "coherent", "amalgam_cap_closed", "open_subspace"];

pub fn pipeline() -> Result<String, String> {
    let cfg = PipelineConfig::default();
    let r = run_pipeline(&cfg).map_err(|e| e.to_string())?;
    for h in HYPOTHESES {
        let steps: Vec<_> = r.steps.iter().filter(|s| s.step.starts_with(h)).collect();
        if steps.is_empty() {
            return Err(format!("no {h} step"));
        }
        if let Some(s) = steps.iter().find(|s| !s.verdict.is_verified()) {
            return Err(format!("{}: {}", s.step, s.verdict));
        }
    }
    if r.exit_code() != 0 {
        return Err(r.summary());
    }
    let d = r
        .deltas
        .first()
        .and_then(|d| d.outcome.value().cloned())
        .ok_or("no delta between the two families")?;
    let expected = grid(&cfg.bound, cfg.bound.as_nat().unwrap_or(128), cfg.cap)
        .into_iter()
        .filter(|eta| *eta < cfg.bound && eta.succ() < d)
        .count();
    if r.merge_total() == 0 || r.merge_total() != expected {
        return Err(format!("merges {} but #{{eta : eta+1 < {d}}} = {expected}", r.merge_total()));
    }
    let again = run_pipeline(&cfg).map_err(|e| e.to_string())?;
    let (a, b) = (serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    if a != b {
        return Err("two runs with one seed differ".into());
    }
    Ok(format!("{}; delta {d}; rerun identical", r.summary()))
}

fn random_family(rng: &mut ChaCha8Rng) -> (u64, Vec<u64>) {
    let n = rng.gen_range(1..=12u64);
    let full = (1u64 << n) - 1;
    let mut masks: Vec<u64> = (0..rng.gen_range(1..=10))
        .map(|_| rng.gen_range(1..=full))
        .collect();
    masks.sort_unstable();
    masks.dedup();
    (n, masks)
}

fn to_set(mask: u64) -> PointSet {
    PointSet::from_points((0..64).filter(|i| mask >> i & 1 == 1).map(Ordinal::nat))
}

pub fn brute_force_levels() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    for k in 0..50 {
        let (n, masks) = random_family(&mut rng);
        let members: Vec<PointSet> = masks.iter().map(|&m| to_set(m)).collect();
        let f = ExplicitFamily::new(format!("r{k}"), Ordinal::nat(n), members.clone()).map_err(|e| e.to_string())?;
        let report = cb_levels(&f, 12, &Budget::with_bound(Ordinal::nat(n)));
        let reference = reference_levels(&masks);
        for (m, want) in members.iter().zip(&reference) {
            let got = report.level_of(m).and_then(|l| l.level.clone());
            let want = want.map(|w| Ordinal::nat(w as u64));
            if got != want {
                return Err(format!("family {k}, member {m}: engine {got:?}, reference {want:?}"));
            }
            total += 1;
        }
    }
    Ok(format!("50 families, {total} members, 0 disagreements"))
}

/// Each defect must give exit code 1 and a non-empty witness.
pub fn defects() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let no_cap = file("no_cap.json", r#"{"ground": "3", "members": ["{0,1}", "{1,2}"]}"#);
    let no_tree = file("no_tree.json", r#"{"ground": "3", "members": ["{1}", "{0,1}", "{1,2}"]}"#);
    let corrupt = file("corrupt.cfg", "gamma = 2, 3\nbound = 40\ncorrupt_coding = 5\n");
    let limit = file("limit.cfg", "gamma = 2, 3\nbound = 40\nfixture_delta = w\n");
    let cases: [(&str, Vec<&str>); 6] = [
        ("deleted intersection", vec!["family", "verify", "--file", &no_cap, "--prop", "cap_closed"]),
        ("broken tree-likeness", vec!["family", "verify", "--file", &no_tree, "--prop", "tree_like"]),
        ("corrupted coding digit", vec!["pipeline", &corrupt]),
        ("limit delta fixture", vec!["pipeline", &limit]),
        (
            "wrong rank certificate",
            vec!["family", "rank", "--family", "E(2,2)", "--member", "{0,1,2,3}", "--claim", "2"],
        ),
        (
            "witness outside the member",
            vec!["space", "nbhd", "--family", "E(2,2)", "--member", "{0,1}", "--minus", "{2,3}"],
        ),
    ];
    let mut caught = Vec::new();
    let mut missed = Vec::new();
    for (name, args) in &cases {
        let (code, v) = lcs_json(args);
        let witness = find_witness(&v["report"]);
        if code == 1 && !witness.is_empty() {
            caught.push(format!("{name} [{}]", witness));
        } else {
            missed.push(format!("{name}: exit {code}, witness {witness:?}"));
        }
    }
    if missed.is_empty() {
        Ok(format!("6/6 detected: {}", caught.join(", ")))
    } else {
        Err(format!("{}/6 detected; missed {}", caught.len(), missed.join("; ")))
    }
}

/// The first non-empty `witness` array in a report, joined.
fn find_witness(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Object(m) => {
            if let Some(serde_json::Value::Array(w)) = m.get("witness") {
                if !w.is_empty() {
                    return w.iter().map(|x| x.as_str().unwrap_or("?")).collect::<Vec<_>>().join("; ");
                }
            }
            m.values().map(find_witness).find(|s| !s.is_empty()).unwrap_or_default()
        }
        serde_json::Value::Array(a) => a.iter().map(find_witness).find(|s| !s.is_empty()).unwrap_or_default(),
        _ => String::new(),
    }
}

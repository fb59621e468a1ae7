//! Acceptance criteria, one line each: `criterion N [PASS|FAIL] detail (t / limit)`.
//! Runs without the libtest harness so the lines are always printed.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use support::{criteria, structural};

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<String, String>,
}

fn main() -> ExitCode {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let list = [
        Criterion { id: 1, name: "ordinal oracle equivalence", limit: Some(Duration::from_secs(60)), run: criteria::oracle_corpus },
        Criterion { id: 2, name: "algebraic laws", limit: Some(Duration::from_secs(60)), run: criteria::algebraic_laws },
        Criterion { id: 3, name: "block family structure", limit: Some(Duration::from_secs(120)), run: criteria::block_structure },
        Criterion { id: 4, name: "ordinal spaces", limit: Some(Duration::from_secs(60)), run: criteria::ordinal_spaces },
        Criterion { id: 5, name: "splitting characterization", limit: Some(Duration::from_secs(120)), run: structural::characterization },
        Criterion { id: 6, name: "starred deltas are successors", limit: Some(Duration::from_secs(120)), run: structural::successor_deltas },
        Criterion { id: 7, name: "star levels of F_2, F_3", limit: Some(Duration::from_secs(180)), run: structural::star_levels },
        Criterion { id: 8, name: "amalgamation pipeline", limit: Some(Duration::from_secs(300)), run: structural::pipeline },
        Criterion { id: 9, name: "levels against brute-force topology", limit: Some(Duration::from_secs(60)), run: structural::brute_force_levels },
        Criterion { id: 10, name: "falsification sensitivity", limit: None, run: structural::defects },
    ];
    let mut failed = 0;
    for c in list.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let late = c.limit.is_some_and(|l| took > l);
        let (ok, detail) = match outcome {
            Ok(d) if !late => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(d) => (false, d),
        };
        let limit = c.limit.map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        println!(
            "criterion {:>2} [{}] {}: {} ({:.1}s / {limit})",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            detail,
            took.as_secs_f64()
        );
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}

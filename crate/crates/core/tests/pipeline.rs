use lcs_core::constructions::{run_pipeline, PipelineConfig};

fn small(extra: &str) -> PipelineConfig {
    format!("gamma = 2, 3\nbound = 40\nsamples = 200\nseed = 7\n{extra}").parse().unwrap()
}

#[test]
fn reports_are_deterministic() {
    let cfg = small("");
    let a = serde_json::to_string(&run_pipeline(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_pipeline(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn corrupted_coding_is_caught() {
    let r = run_pipeline(&small("corrupt_coding = 5")).unwrap();
    assert_eq!(r.exit_code(), 1, "{}", r.summary());
    let bad = r.steps.iter().find(|s| s.verdict.is_falsified()).expect("a falsified step");
    assert!(!bad.verdict.witness.is_empty());
}

#[test]
fn finite_kappa_runs_on_a_common_ground() {
    let cfg: PipelineConfig = "kappa = 2\ngamma = 2, 3\nbound = 8\nsamples = 200".parse().unwrap();
    let r = run_pipeline(&cfg).unwrap();
    assert_ne!(r.exit_code(), 1, "{}", r.summary());
    assert!(r.steps.iter().any(|s| s.gated));
}

#[test]
fn bad_configs_are_rejected() {
    for text in ["gamma =", "gamma = 3, 2, 2", "colour = red", "bound"] {
        assert!(text.parse::<PipelineConfig>().is_err(), "{text}");
    }
}

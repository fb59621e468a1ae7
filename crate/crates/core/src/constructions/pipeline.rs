//! Star the families `F_γ`, check the amalgamation hypotheses, lift and
//! amalgamate, and report bottom-level and height evidence.

use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::{finite_blocks, CodedFamily};
use crate::family::{
    delta, klift, rank, star, verify_property, Amalgam, Budget, DeltaOutcome, ExplicitFamily, Family,
    FamilySystem, Property, SetFamily, Verdict, VerdictStatus,
};
use crate::ordinal::{grid, Ordinal};
use crate::pointset::{Coding, PointSet};
use crate::space::star_level_check;
use crate::{Error, Result};

/// Largest `ξ` whose restriction traces are counted exhaustively.
const TRACE_XI: u64 = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub kappa: Ordinal,
    pub gamma: Vec<Ordinal>,
    pub bound: Ordinal,
    pub samples: usize,
    pub cap: usize,
    pub seed: u64,
    /// Defect injection: one code of every coding decodes wrongly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupt_coding: Option<u64>,
    /// Defect injection: replaces every computed Δ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture_delta: Option<Ordinal>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            kappa: Ordinal::omega(),
            gamma: vec![Ordinal::nat(2), Ordinal::nat(3)],
            bound: Ordinal::nat(200),
            samples: 1000,
            cap: 4096,
            seed: 0,
            corrupt_coding: None,
            fixture_delta: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Invalid(format!("bad value {v:?} for {key}")))
}

/// `key = value` lines; `#` starts a comment; `gamma` takes a comma list.
impl FromStr for PipelineConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = PipelineConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "kappa" => cfg.kappa = value.parse()?,
                "gamma" => {
                    cfg.gamma = value
                        .split(',')
                        .map(|g| g.trim().parse())
                        .collect::<Result<Vec<Ordinal>>>()?
                }
                "bound" => cfg.bound = value.parse()?,
                "samples" => cfg.samples = parse_value(key, value)?,
                "cap" => cfg.cap = parse_value(key, value)?,
                "seed" => cfg.seed = parse_value(key, value)?,
                "corrupt_coding" => cfg.corrupt_coding = Some(parse_value(key, value)?),
                "fixture_delta" => cfg.fixture_delta = Some(value.parse()?),
                _ => return Err(Error::Invalid(format!("line {}: unknown key {key:?}", n + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gamma.is_empty() {
            return Err(Error::Invalid("gamma list is empty".into()));
        }
        let mut sorted = self.gamma.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.gamma.len() {
            return Err(Error::Invalid("gamma values must be distinct".into()));
        }
        if self.kappa != Ordinal::omega() && self.kappa.as_nat().is_none_or(|k| k < 2) {
            return Err(Error::Invalid(format!("kappa must be w or a natural >= 2, got {}", self.kappa)));
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget {
            bound: self.bound.clone(),
            cap: self.cap,
            samples: self.samples,
            seed: self.seed,
            ..Budget::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub step: String,
    /// Gated steps do not apply to this configuration and are not counted.
    pub gated: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaEntry {
    pub left: String,
    pub right: String,
    pub outcome: DeltaOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct MergeEntry {
    pub left: String,
    pub right: String,
    /// `#{η : η + 1 < Δ}` over the grid of the bound.
    pub merged: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightEntry {
    pub family: String,
    /// Rank of the full ground in the unstarred family.
    pub ground_rank: Ordinal,
    /// `κ + ht` evidence for the starred family.
    pub star_height_lower_bound: Ordinal,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub steps: Vec<StepReport>,
    pub deltas: Vec<DeltaEntry>,
    pub merges: Vec<MergeEntry>,
    /// Distinct lifted points `k_i(η)` over the grid of the bound.
    pub bottom_points: usize,
    pub heights: Vec<HeightEntry>,
    /// Set when a hypothesis failure stopped the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
    pub notes: Vec<String>,
}

impl PipelineReport {
    fn push(&mut self, step: impl Into<String>, verdict: Verdict) {
        self.steps.push(StepReport {
            step: step.into(),
            gated: false,
            verdict,
        });
    }

    fn push_gated(&mut self, step: impl Into<String>, verdict: Verdict) {
        self.steps.push(StepReport {
            step: step.into(),
            gated: true,
            verdict,
        });
    }

    fn abort(&mut self, step: impl Into<String>, err: &Error) {
        let step = step.into();
        let msg = err.to_string();
        self.push(step.clone(), Verdict::falsified(step.clone(), &self.config.bound, &[&msg]));
        self.aborted = Some(format!("{step}: {msg}"));
    }

    fn counted(&self) -> impl Iterator<Item = &StepReport> {
        self.steps.iter().filter(|s| !s.gated)
    }

    pub fn passed(&self) -> usize {
        self.counted().filter(|s| s.verdict.is_verified()).count()
    }

    pub fn total(&self) -> usize {
        self.counted().count()
    }

    pub fn merge_total(&self) -> usize {
        self.merges.iter().map(|m| m.merged).sum()
    }

    pub fn summary(&self) -> String {
        format!(
            "bottom={} merges={} checks={}/{}",
            self.bottom_points,
            self.merge_total(),
            self.passed(),
            self.total()
        )
    }

    pub fn status(&self) -> VerdictStatus {
        if self.aborted.is_some() || self.counted().any(|s| s.verdict.is_falsified()) {
            VerdictStatus::Falsified
        } else if self.passed() == self.total() {
            VerdictStatus::Verified
        } else {
            VerdictStatus::Inconclusive
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status() {
            VerdictStatus::Verified => 0,
            VerdictStatus::Falsified => 1,
            VerdictStatus::Inconclusive => 2,
        }
    }
}

struct Stage {
    base: Family,
    starred: Family,
    coding: Option<Coding>,
}

fn stages(cfg: &PipelineConfig) -> Result<Vec<Stage>> {
    if let Some(k) = cfg.kappa.as_nat() {
        let top = cfg.gamma.iter().max().and_then(|g| g.as_nat()).ok_or_else(|| {
            Error::Invalid("finite kappa needs finite gamma values".into())
        })?;
        let ground = finite_blocks(k, top)?.ground().clone();
        return cfg
            .gamma
            .iter()
            .map(|g| {
                let g = g.as_nat().expect("checked above");
                let e = finite_blocks(k, g)?;
                let mut members = e.members().to_vec();
                members.push(PointSet::below(ground.clone()));
                members.sort();
                members.dedup();
                let base: Family = Arc::new(ExplicitFamily::new(format!("E({k},{g})"), ground.clone(), members)?);
                Ok(Stage {
                    starred: star(base.clone()),
                    base,
                    coding: None,
                })
            })
            .collect();
    }
    cfg.gamma
        .iter()
        .map(|g| {
            let mut coding = Coding::digits(g)?;
            if let Some(n) = cfg.corrupt_coding {
                coding = coding.with_corrupted_digit(n);
            }
            let base: Family = Arc::new(CodedFamily::with_coding(coding.clone()));
            Ok(Stage {
                starred: star(base.clone()),
                base,
                coding: Some(coding),
            })
        })
        .collect()
}

fn roundtrip(coding: &Coding, budget: &Budget) -> Verdict {
    let n = budget.bound.as_nat().unwrap_or(budget.cap as u64);
    let check = format!("coding_roundtrip(gamma={})", coding.gamma());
    match coding.first_roundtrip_failure(n) {
        None => Verdict::verified(check, &budget.bound),
        Some(code) => Verdict::falsified(check, &budget.bound, &[code.to_string(), coding.decode(code).to_string()]),
    }
}

fn segments_in_star(s: &dyn SetFamily, budget: &Budget) -> Verdict {
    let check = format!("initial_segments({})", s.label());
    for xi in grid(s.ground(), budget.digits(), budget.cap) {
        let seg = PointSet::below(xi);
        match s.contains(&seg) {
            Ok(true) => {}
            Ok(false) => return Verdict::falsified(check, &budget.bound, &[seg]),
            Err(e) => return Verdict::inconclusive(check, &budget.bound, e.to_string()),
        }
    }
    Verdict::verified(check, &budget.bound)
}

/// `|F*↾ξ| ≤ (ξ + 1)(ξ² + 2)` for small `ξ`.
fn trace_counts(s: &dyn SetFamily, budget: &Budget) -> Verdict {
    let check = format!("trace_count({})", s.label());
    let mut cubic = true;
    for xi in 1..=TRACE_XI {
        let Some(n) = s.restrict(&Ordinal::nat(xi), budget.cap).len() else {
            return Verdict::inconclusive(check, &budget.bound, format!("traces at {xi} not listable"));
        };
        let n = n as u64;
        if n > (xi + 1) * (xi * xi + 2) {
            return Verdict::falsified(check, &budget.bound, &[xi, n]);
        }
        cubic &= n <= xi.pow(3).max(1);
    }
    Verdict::verified(check, &budget.bound).note(format!(
        "counts for xi <= {TRACE_XI} {} xi^3",
        if cubic { "stay within" } else { "exceed" }
    ))
}

fn pair_label(labels: &[String], i: usize, j: usize) -> String {
    format!("{}, {}", labels[i], labels[j])
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.validate()?;
    let budget = cfg.budget();
    let stages = stages(cfg)?;
    let mut report = PipelineReport {
        config: cfg.clone(),
        steps: Vec::new(),
        deltas: Vec::new(),
        merges: Vec::new(),
        bottom_points: 0,
        heights: Vec::new(),
        aborted: None,
        notes: Vec::new(),
    };
    let omega = cfg.kappa == Ordinal::omega();
    let mut lifted = Vec::new();
    for (i, st) in stages.iter().enumerate() {
        let label = st.base.label();
        if let Some(c) = &st.coding {
            let v = roundtrip(c, &budget);
            // later checks read members through the coding
            if v.is_falsified() {
                report.aborted = Some(format!("coding({label}): {}", v.witness.join("; ")));
                report.push(format!("coding({label})"), v);
                return Ok(report);
            }
            report.push(format!("coding({label})"), v);
        }
        report.push(format!("tree_like({label})"), verify_property(st.base.as_ref(), Property::TreeLike, &budget));
        report.push(format!("cap_closed({label})"), verify_property(st.base.as_ref(), Property::CapClosed, &budget));
        report.push(format!("hyp_i({label})"), segments_in_star(st.starred.as_ref(), &budget));
        if omega {
            match star_level_check(&st.base, &budget) {
                Ok(v) => report.push(format!("hyp_iii({label})"), v),
                Err(e) => {
                    report.abort(format!("hyp_iii({label})"), &e);
                    return Ok(report);
                }
            }
        } else {
            let v = Verdict::inconclusive("star_level", &budget.bound, "members are not cofinal at finite kappa");
            report.push_gated(format!("hyp_iii({label})"), v);
        }
        report.push(format!("hyp_iv({label})"), trace_counts(st.starred.as_ref(), &budget));
        match klift(st.starred.clone(), i, &budget) {
            Ok(l) => lifted.push(l.family),
            Err(e) => {
                report.abort(format!("klift({label})"), &e);
                return Ok(report);
            }
        }
    }
    let system = FamilySystem::new(lifted)?;
    let labels = system.labels.clone();
    let n = system.len();
    let mut matrix = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let outcome = match &cfg.fixture_delta {
                Some(d) => DeltaOutcome::Found { delta: d.clone(), exact: true },
                None => delta(system.families[i].as_ref(), system.families[j].as_ref(), &budget),
            };
            let step = format!("hyp_ii({})", pair_label(&labels, i, j));
            let v = match &outcome {
                DeltaOutcome::Found { delta, .. } if delta.is_successor() => Verdict::verified(&step, &budget.bound),
                DeltaOutcome::Found { delta, .. } => {
                    Verdict::falsified(&step, &budget.bound, &[delta]).note("Delta is not a successor")
                }
                other => Verdict::inconclusive(&step, &budget.bound, other.to_string()),
            };
            report.push(step, v);
            let value = outcome.value().cloned();
            matrix[i][j] = value.clone();
            matrix[j][i] = value;
            report.deltas.push(DeltaEntry {
                left: labels[i].clone(),
                right: labels[j].clone(),
                outcome,
            });
        }
    }
    let amalgam = match Amalgam::with_deltas(system, matrix, &budget) {
        Ok(a) => a,
        Err(e) => {
            report.abort("amalgamate", &e);
            return Ok(report);
        }
    };
    report.push("coherent", amalgam.coherent_check(&budget));
    report.push("amalgam_cap_closed", amalgam.cap_closed_check(&budget));
    for i in 0..n {
        report.push(format!("open_subspace({})", labels[i]), amalgam.open_subspace_check(i, &budget));
    }
    census(&mut report, &amalgam, &budget);
    heights(&mut report, &stages, omega, &budget);
    Ok(report)
}

fn census(report: &mut PipelineReport, amalgam: &Amalgam, budget: &Budget) {
    let n = amalgam.len();
    let labels = &amalgam.system.labels;
    for i in 0..n {
        for j in i + 1..n {
            report.merges.push(MergeEntry {
                left: labels[i].clone(),
                right: labels[j].clone(),
                merged: amalgam.merge_count(i, j, budget),
            });
        }
    }
    let etas: Vec<Ordinal> = grid(&budget.bound, budget.digits(), budget.cap)
        .into_iter()
        .filter(|e| *e < budget.bound && e < amalgam.system.ground())
        .collect();
    let keys: std::collections::BTreeSet<_> = (0..n)
        .flat_map(|i| etas.iter().map(move |e| (i, e)))
        .map(|(i, e)| amalgam.point(i, e).class_key)
        .collect();
    report.bottom_points = keys.len();
}

fn heights(report: &mut PipelineReport, stages: &[Stage], omega: bool, budget: &Budget) {
    for st in stages {
        let ground = PointSet::below(st.base.ground().clone());
        match rank(st.base.as_ref(), &ground, budget) {
            Ok(cert) => {
                let ht = cert.rank.succ();
                let lower = if omega { &Ordinal::omega() + &ht } else { ht };
                report.heights.push(HeightEntry {
                    family: st.base.label(),
                    ground_rank: cert.rank,
                    star_height_lower_bound: lower,
                });
            }
            Err(e) => report.notes.push(format!("height of {}: {e}", st.base.label())),
        }
    }
    if omega {
        report.notes.push("the block of top level coincides with the ground, so F(g) has computed height g".into());
        report.notes.push("heights are per-family evidence; no unbounded-height claim is checked".into());
    } else {
        report.notes.push("finite families are discrete: every member has level 0".into());
    }
}

//! `lcs family ...`.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use lcs_core::family::{
    char_check, delta, rank, restrict, split, star, verify_property, DeltaOutcome, ExplicitFamily, Family, FamilyFile,
    Property,
};
use lcs_core::{Budget, Error, Ordinal, PointSet, Result, Verdict};
use serde::Serialize;

use crate::output::Outcome;
use crate::source;

/// Where a family comes from: an expression, a JSON file, or a named
/// construction with parameters.
#[derive(Args, Clone, Debug)]
pub struct Source {
    /// Family expression: E(k,g), F(g), star(F,g), star(<expr>), seg(x), file(path)
    #[arg(long = "family", short = 'f', value_name = "EXPR")]
    pub expr: Option<String>,
    /// Explicit family JSON: {"ground": "...", "members": [...]}
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Named construction: E, F or seg
    #[arg(long, value_name = "NAME")]
    pub construct: Option<String>,
    #[arg(long, default_value = "w")]
    pub kappa: Ordinal,
    #[arg(long)]
    pub gamma: Option<Ordinal>,
}

impl Source {
    pub fn load(&self) -> Result<Family> {
        match (&self.expr, &self.file, &self.construct) {
            (Some(e), None, None) => source::parse(e),
            (None, Some(p), None) => source::load_file(p),
            (None, None, Some(c)) => {
                let gamma = self
                    .gamma
                    .as_ref()
                    .ok_or_else(|| Error::Invalid("--construct needs --gamma".into()))?;
                source::construct(c, &self.kappa, gamma)
            }
            _ => Err(Error::Invalid(
                "give exactly one of --family, --file, --construct".into(),
            )),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// List the members meeting the bound
    Build {
        #[command(flatten)]
        src: Source,
        /// Also write the listing as a family file
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check structural properties on sampled members
    Verify {
        #[command(flatten)]
        src: Source,
        /// cap_closed, tree_like, chain_closed, well_founded (comma separated)
        #[arg(long, value_delimiter = ',', required = true)]
        prop: Vec<Property>,
    },
    /// Rank of a member with its certificate
    Rank {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        member: PointSet,
        /// Claimed rank; a mismatch is a falsification
        #[arg(long)]
        claim: Option<Ordinal>,
    },
    /// The restriction to an initial segment
    Restrict {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        xi: Ordinal,
    },
    /// First ordinal where two families' restrictions differ
    Delta {
        #[arg(long, value_name = "EXPR")]
        left: String,
        #[arg(long, value_name = "EXPR")]
        right: String,
    },
    /// Union of the members containing alpha but not beta
    Split {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        alpha: Ordinal,
        #[arg(long)]
        beta: Ordinal,
    },
    /// List the star of a family
    Star {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compare the family with the one generated by its splitting sets
    Char {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Serialize)]
struct BuildReport {
    family: String,
    ground: Ordinal,
    complete: bool,
    members: Vec<PointSet>,
}

#[derive(Serialize)]
struct DeltaReport {
    left: String,
    right: String,
    outcome: DeltaOutcome,
}

fn build(f: &Family, out: Option<&PathBuf>, budget: &Budget) -> Result<Outcome> {
    let l = f.enumerate(&budget.bound, budget.cap);
    let mut lines = vec![format!(
        "{} ground {}: {} members ({})",
        f.label(),
        f.ground(),
        l.members.len(),
        if l.complete { "complete" } else { "truncated" }
    )];
    lines.extend(l.members.iter().map(|m| format!("  {m}")));
    if let Some(path) = out {
        let file = FamilyFile {
            ground: f.ground().clone(),
            members: l.members.clone(),
        };
        ExplicitFamily::new(f.label(), file.ground.clone(), file.members.clone())?;
        std::fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
    }
    let report = BuildReport {
        family: f.label(),
        ground: f.ground().clone(),
        complete: l.complete,
        members: l.members,
    };
    Outcome::new(lines, report, if l.complete { 0 } else { 2 })
}

pub fn run(cmd: &FamilyCmd, budget: &Budget) -> Result<Outcome> {
    match cmd {
        FamilyCmd::Build { src, out } => build(&src.load()?, out.as_ref(), budget),
        FamilyCmd::Star { src, out } => {
            let s: Family = star(src.load()?);
            build(&s, out.as_ref(), budget)
        }
        FamilyCmd::Verify { src, prop } => {
            let f = src.load()?;
            let parts: Vec<Verdict> = prop.iter().map(|p| verify_property(f.as_ref(), *p, budget)).collect();
            match <[Verdict; 1]>::try_from(parts) {
                Ok([v]) => Outcome::verdict(v),
                Err(parts) => Outcome::verdict(Verdict::all(f.label(), &budget.bound, parts)),
            }
        }
        FamilyCmd::Rank { src, member, claim } => {
            let f = src.load()?;
            let cert = rank(f.as_ref(), member, budget)?;
            let mut lines = vec![format!("rank({member}) = {} [{}]", cert.rank, cert.method)];
            lines.push(format!(
                "  chain: {}",
                cert.chain.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" < ")
            ));
            match claim {
                Some(c) if *c != cert.rank => {
                    let mut w: Vec<String> = vec![format!("claimed {c}, certified {}", cert.rank)];
                    w.extend(cert.chain.iter().map(|c| c.to_string()));
                    Outcome::verdict(Verdict::falsified("rank_claim", &budget.bound, &w))
                }
                _ => Outcome::new(lines, cert, 0),
            }
        }
        FamilyCmd::Restrict { src, xi } => {
            let f = src.load()?;
            let r = restrict(f.as_ref(), xi, budget);
            let mut lines = vec![format!(
                "{} restricted to {xi}: {} traces{}{}",
                f.label(),
                r.gens.len(),
                if r.has_empty { " plus the empty set" } else { "" },
                if r.starred { ", starred" } else { "" }
            )];
            lines.extend(r.gens.iter().map(|g| format!("  {g}")));
            let code = if r.complete { 0 } else { 2 };
            Outcome::new(lines, r, code)
        }
        FamilyCmd::Delta { left, right } => {
            let (a, b) = (source::parse(left)?, source::parse(right)?);
            let outcome = delta(a.as_ref(), b.as_ref(), budget);
            let code = match &outcome {
                DeltaOutcome::Found { exact: true, .. } | DeltaOutcome::EqualUpToBound { .. } => 0,
                _ => 2,
            };
            let lines = vec![format!("delta({}, {}) = {outcome}", a.label(), b.label())];
            let report = DeltaReport {
                left: a.label(),
                right: b.label(),
                outcome,
            };
            Outcome::new(lines, report, code)
        }
        FamilyCmd::Split { src, alpha, beta } => {
            let f = src.load()?;
            let s = split(f.as_ref(), alpha, beta)?;
            Outcome::new(vec![s.to_string()], s, 0)
        }
        FamilyCmd::Char { src } => Outcome::verdict(char_check(src.load()?.as_ref(), budget)),
    }
}


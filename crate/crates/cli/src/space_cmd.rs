//! `lcs space ...`.

use clap::{Subcommand, ValueEnum};
use lcs_core::constructions::SegmentFamily;
use lcs_core::space::{
    basic_nbhd, cb_levels, compact_spotcheck, ordinal_space_check, star_level_check, subspace_check, SubspaceMode,
};
use lcs_core::{Budget, Ordinal, PointSet, Result};
use serde::Serialize;

use crate::family_cmd::Source;
use crate::output::Outcome;
use crate::source;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Open,
    Closed,
}

#[derive(Subcommand, Debug)]
pub enum SpaceCmd {
    /// Cantor-Bendixson levels of the members meeting the bound
    Analyze {
        #[command(flatten)]
        src: Source,
        /// Highest level resolved beyond isolation witnesses
        #[arg(long, default_value_t = 3)]
        levels: u64,
    },
    /// Compare the initial-segment family of an ordinal with its order topology
    CheckOrdinal {
        #[arg(long = "type", value_name = "ORDINAL")]
        alpha: Ordinal,
    },
    /// Levels of the star of a family whose members reach the ground
    CheckStar {
        #[command(flatten)]
        src: Source,
    },
    /// The basic neighbourhood W(A; B1, ..., Bn)
    Nbhd {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        member: PointSet,
        /// A proper subset of the member to remove (repeatable)
        #[arg(long)]
        minus: Vec<PointSet>,
    },
    /// Whether one family's space sits open or closed in another's
    Subspace {
        #[arg(long, value_name = "EXPR")]
        sub: String,
        #[arg(long, value_name = "EXPR")]
        whole: String,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Finite-subcover spot check of the down-set of a member
    Compact {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        member: PointSet,
    },
}

#[derive(Serialize)]
struct NbhdReport {
    member: PointSet,
    minus: Vec<PointSet>,
    complete: bool,
    isolates: bool,
    members: Vec<PointSet>,
}

pub fn run(cmd: &SpaceCmd, budget: &Budget, dot: bool) -> Result<Outcome> {
    match cmd {
        SpaceCmd::Analyze { src, levels } => {
            let f = src.load()?;
            let r = cb_levels(f.as_ref(), *levels, budget);
            let mut lines = vec![format!(
                "{}: {} members, height >= {}, {} unresolved",
                r.family,
                r.members.len(),
                r.height_lower_bound,
                r.unresolved
            )];
            lines.extend(r.level_sizes.iter().map(|s| format!("  level {}: {}", s.level, s.size)));
            lines.extend(r.notes.iter().map(|n| format!("  note: {n}")));
            let code = if r.unresolved == 0 { 0 } else { 2 };
            let dot_text = dot.then(|| r.to_dot(256));
            let mut out = Outcome::new(lines, r, code)?;
            out.dot = dot_text;
            Ok(out)
        }
        SpaceCmd::CheckOrdinal { alpha } => {
            Outcome::verdict(ordinal_space_check(&SegmentFamily::new(alpha.clone()), alpha, budget))
        }
        SpaceCmd::CheckStar { src } => Outcome::verdict(star_level_check(&src.load()?, budget)?),
        SpaceCmd::Nbhd { src, member, minus } => {
            let f = src.load()?;
            let w = basic_nbhd(f.as_ref(), member, minus, budget.cap)?;
            let isolates = w.complete && w.members == [member.clone()];
            let mut lines = vec![format!(
                "W({member}; {}) has {} members ({}){}",
                minus.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "),
                w.members.len(),
                if w.complete { "complete" } else { "truncated" },
                if isolates { ", isolating" } else { "" }
            )];
            lines.extend(w.members.iter().map(|m| format!("  {m}")));
            let code = if w.complete { 0 } else { 2 };
            let report = NbhdReport {
                member: member.clone(),
                minus: minus.clone(),
                complete: w.complete,
                isolates,
                members: w.members,
            };
            Outcome::new(lines, report, code)
        }
        SpaceCmd::Subspace { sub, whole, mode } => {
            let (s, w) = (source::parse(sub)?, source::parse(whole)?);
            let mode = match mode {
                Mode::Open => SubspaceMode::Open,
                Mode::Closed => SubspaceMode::Closed,
            };
            Outcome::verdict(subspace_check(s.as_ref(), w.as_ref(), mode, budget))
        }
        SpaceCmd::Compact { src, member } => {
            Outcome::verdict(compact_spotcheck(src.load()?.as_ref(), member, budget))
        }
    }
}

//! `lcs`: build set families, analyse their spaces and run the amalgamation
//! pipeline. Exit codes: 0 verified, 1 falsified, 2 inconclusive, 3 usage.

mod family_cmd;
mod ord;
mod output;
mod source;
mod space_cmd;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcs_core::constructions::{run_pipeline, PipelineConfig};
use lcs_core::exec::Exec;
use lcs_core::report::RunManifest;
use lcs_core::{Budget, Error, Ordinal, Result};

use family_cmd::FamilyCmd;
use output::Outcome;
use space_cmd::SpaceCmd;

#[derive(Parser, Debug)]
#[command(name = "lcs", version, about = "Set-family constructions of locally compact scattered spaces")]
struct Cli {
    /// Seed for every sampled check
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation bound (ordinal) [default: 200]
    #[arg(long, global = true)]
    bound: Option<Ordinal>,
    /// Maximum members or points listed per enumeration [default: 4096]
    #[arg(long, global = true, value_name = "CAP")]
    budget: Option<usize>,
    /// Sampled pairs per check [default: 1000]
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the JSON report with its run manifest here (`-` for stdout)
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write a DOT diagram here (space analyze)
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Run checks on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an ordinal expression, cmp(a,b) or divmod(a,b)
    Ord {
        expr: String,
        /// Cross-check against the independent oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Family builders and checks
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Cantor-Bendixson analysis of family spaces
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Run the amalgamation pipeline from a key = value config file
    Pipeline { cfg: PathBuf },
}

impl Cli {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            bound: self.bound.clone().unwrap_or(d.bound.clone()),
            cap: self.budget.unwrap_or(d.cap),
            samples: self.samples.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            exec: if self.sequential { Exec::Sequential } else { d.exec },
            ..d
        }
    }

    fn name(&self) -> &'static str {
        match self.command {
            Command::Ord { .. } => "ord",
            Command::Family(_) => "family",
            Command::Space(_) => "space",
            Command::Pipeline { .. } => "pipeline",
        }
    }
}

fn pipeline(cli: &Cli, path: &PathBuf) -> Result<(Outcome, u64, Ordinal)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg: PipelineConfig = text.parse()?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(b) = &cli.bound {
        cfg.bound = b.clone();
    }
    if let Some(c) = cli.budget {
        cfg.cap = c;
    }
    if let Some(s) = cli.samples {
        cfg.samples = s;
    }
    cfg.validate()?;
    let report = run_pipeline(&cfg)?;
    let mut lines: Vec<String> = report
        .steps
        .iter()
        .map(|s| format!("{}{}", s.verdict, if s.gated { " [gated]" } else { "" }))
        .collect();
    if let Some(a) = &report.aborted {
        lines.push(format!("aborted: {a}"));
    }
    lines.push(report.summary());
    let code = report.exit_code();
    let (seed, bound) = (cfg.seed, cfg.bound.clone());
    Ok((Outcome::new(lines, report, code)?, seed, bound))
}

fn dispatch(cli: &Cli) -> Result<(Outcome, u64, Ordinal)> {
    let budget = cli.budget();
    let (seed, bound) = (budget.seed, budget.bound.clone());
    let out = match &cli.command {
        Command::Ord { expr, oracle } => ord::run(expr, *oracle)?,
        Command::Family(cmd) => family_cmd::run(cmd, &budget)?,
        Command::Space(cmd) => space_cmd::run(cmd, &budget, cli.dot.is_some())?,
        Command::Pipeline { cfg } => return pipeline(cli, cfg),
    };
    Ok((out, seed, bound))
}

fn emit(cli: &Cli, out: Outcome, manifest: RunManifest) -> Result<i32> {
    let mut stdout = std::io::stdout().lock();
    let json_to_stdout = match &cli.json {
        Some(path) => output::write_json(path, manifest, out.report)?,
        None => None,
    };
    if let (Some(path), Some(dot)) = (&cli.dot, &out.dot) {
        std::fs::write(path, dot)?;
    }
    match json_to_stdout {
        Some(text) => stdout.write_all(text.as_bytes())?,
        None => {
            for l in &out.lines {
                writeln!(stdout, "{l}")?;
            }
        }
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match dispatch(&cli) {
        Ok(r) => Ok(r),
        Err(e @ (Error::PreconditionFailure(_) | Error::CertificateFailure(_))) => {
            let b = cli.budget();
            Outcome::failure(cli.name(), &b.bound, &e).map(|o| (o, b.seed, b.bound))
        }
        Err(e) => Err(e),
    };
    let code = match result {
        Ok((out, seed, bound)) => {
            let manifest = RunManifest::new(cli.name(), args, seed, bound);
            emit(&cli, out, manifest)
        }
        Err(e) => Err(e),
    };
    match code {
        Ok(c) => ExitCode::from(c as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let c = match e {
                Error::TruncationRequired(_) | Error::OracleInconclusive(_) => 2,
                _ => 3,
            };
            ExitCode::from(c)
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tricensus::arrangement::{conformal_arrangement, envelope_csv, motion_arrangement, ArrangementOptions};
use tricensus::census::{census, CensusOptions};
use tricensus::generators::{default_mirror_line, grid, half_line_config, mirror, random_rational, RandomParams};
use tricensus::report::{bundle, census_report, grid_sweep, oracle_check, sweep_csv, DEFAULT_ORACLE_CAP};
use tricensus::{Error, KeyKind, PointSet};

#[derive(Parser)]
#[command(name = "tricensus", version, about = "Exact triangle class census and line-lift audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "TRICENSUS_THREADS", default_value_t = 0)]
    threads: usize,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lift {
    Motion,
    Conformal,
}

#[derive(Args)]
struct Source {
    /// Point-set file, one `x y` pair per line.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,
    /// The grid {0..m-1}².
    #[arg(long, group = "source")]
    grid: Option<usize>,
    /// This many seeded random points on a dyadic lattice.
    #[arg(long, group = "source")]
    random: Option<usize>,
    /// n/2 points on a line, n/2 off it.
    #[arg(long, group = "source")]
    half_line: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random coordinates lie in [-range, range].
    #[arg(long, default_value_t = 8)]
    range: u32,
    /// Random coordinates are multiples of 2^-denom_bits.
    #[arg(long, default_value_t = 2)]
    denom_bits: u32,
    /// Replace the set by its mirror image in a vertical line right of it.
    #[arg(long)]
    mirror: bool,
}

impl Source {
    fn load(&self) -> anyhow::Result<PointSet> {
        let ps = if let Some(path) = &self.input {
            PointSet::read(path).with_context(|| format!("reading {}", path.display()))?
        } else if let Some(m) = self.grid {
            grid(m)?
        } else if let Some(n) = self.random {
            random_rational(&RandomParams { n, seed: self.seed, range: self.range, denom_bits: self.denom_bits })?
        } else if let Some(n) = self.half_line {
            half_line_config(n)?
        } else {
            bail!(Usage("one of --input, --grid, --random, --half-line is required".into()));
        };
        Ok(if self.mirror { mirror(&ps, &default_mirror_line(&ps))? } else { ps })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a point set.
    Generate {
        #[command(flatten)]
        source: Source,
    },
    /// Class census with pair counts and the Cauchy-Schwarz bound.
    Census {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "congruence-full")]
        kind: KindArg,
        #[arg(long)]
        include_degenerate: bool,
        /// Fail if more than half of the points are collinear.
        #[arg(long)]
        strict: bool,
        /// Number of largest classes to list.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Rich points of the lifted lines, with audits.
    Arrangement {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "motion")]
        lift: Lift,
        /// Keep the vertical motion lines L_pp.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        include_identity_lines: bool,
        /// Lift z̄ instead of z (conformal lift).
        #[arg(long)]
        reflections: bool,
        #[arg(long, default_value_t = tricensus::arrangement::DEFAULT_ARRANGEMENT_CAP)]
        cap: usize,
    },
    /// Canonical keys and lifts against brute force.
    OracleCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        cap: usize,
    },
    /// Class counts over grids m = from, from+step, …, to.
    Sweep {
        #[arg(long, default_value_t = 4)]
        from: usize,
        #[arg(long, default_value_t = 12)]
        to: usize,
        #[arg(long, default_value_t = 2)]
        step: usize,
        #[arg(long, value_enum, default_value = "congruence-full")]
        kind: KindArg,
    },
    /// Censuses of every kind, plus arrangements and oracle checks within caps.
    Report {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = tricensus::arrangement::DEFAULT_ARRANGEMENT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    CongruenceFull,
    CongruenceDirect,
    SimilarityDirect,
    SimilarityFull,
}

impl From<KindArg> for KeyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::CongruenceFull => KeyKind::CongruenceFull,
            KindArg::CongruenceDirect => KeyKind::CongruenceDirect,
            KindArg::SimilarityDirect => KeyKind::SimilarityDirect,
            KindArg::SimilarityFull => KeyKind::SimilarityFull,
        }
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Output produced by a run and whether all of its audits passed.
struct Outcome {
    payload: String,
    ok: bool,
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let threads = cli.threads;
    let format = cli.format;
    let reject = |allowed: &[Format]| match format {
        Some(f) if !allowed.contains(&f) => Err(Usage("unsupported --format for this subcommand".into())),
        _ => Ok(()),
    };
    match &cli.command {
        Command::Generate { source } => {
            reject(&[Format::Text, Format::Json])?;
            let ps = source.load()?;
            let payload = match format {
                Some(Format::Json) => json(&ps.points())?,
                _ => ps.to_text(),
            };
            Ok(Outcome { payload, ok: true })
        }
        Command::Census { source, kind, include_degenerate, strict, top } => {
            reject(&[Format::Json, Format::Csv])?;
            let ps = source.load()?;
            let opts = CensusOptions { include_degenerate: *include_degenerate, threads };
            let kind = KeyKind::from(*kind);
            let payload = if format == Some(Format::Csv) {
                let c = census(&ps, kind, opts)?;
                let mut out = String::from("key,m\n");
                for (key, m) in c.classes() {
                    let key = serde_json::to_string(&key)?.replace('"', "\"\"");
                    out.push_str(&format!("\"{key}\",{m}\n"));
                }
                out
            } else {
                json(&census_report(&ps, kind, opts, *strict, *top)?)?
            };
            Ok(Outcome { payload, ok: true })
        }
        Command::Arrangement { source, lift, include_identity_lines, reflections, cap } => {
            reject(&[Format::Json, Format::Csv])?;
            let ps = source.load()?;
            let opts = ArrangementOptions {
                include_identity_lines: *include_identity_lines,
                reflections: *reflections,
                cap: *cap,
                threads,
            };
            let report = match lift {
                Lift::Motion => motion_arrangement(&ps, &ps, opts)?,
                Lift::Conformal => conformal_arrangement(&ps, &ps, opts)?,
            };
            let payload = if format == Some(Format::Csv) { envelope_csv(&report.envelope) } else { json(&report)? };
            Ok(Outcome { payload, ok: report.audits_ok() })
        }
        Command::OracleCheck { source, cap } => {
            reject(&[Format::Json])?;
            let report = oracle_check(&source.load()?, *cap, threads)?;
            Ok(Outcome { payload: json(&report)?, ok: report.ok })
        }
        Command::Sweep { from, to, step, kind } => {
            reject(&[Format::Json, Format::Csv])?;
            if *step == 0 || from > to || *from < 2 {
                bail!(Usage(format!("bad sweep range {from}..={to} step {step}")));
            }
            let ms: Vec<usize> = (*from..=*to).step_by(*step).collect();
            let rows = grid_sweep(&ms, (*kind).into(), CensusOptions { include_degenerate: false, threads })?;
            let payload = if format == Some(Format::Json) { json(&rows)? } else { sweep_csv(&rows) };
            Ok(Outcome { payload, ok: true })
        }
        Command::Report { source, cap, oracle_cap, top } => {
            reject(&[Format::Json])?;
            let ps = source.load()?;
            let arrangement = ArrangementOptions { cap: *cap, threads, ..Default::default() };
            let b = bundle(&ps, CensusOptions { include_degenerate: false, threads }, arrangement, *oracle_cap, *top)?;
            Ok(Outcome { payload: json(&b)?, ok: b.ok() })
        }
    }
}

/// Audit and invariant failures exit with 1, everything else the caller got wrong with 2.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Invariant(_)) => 1,
        Some(Error::HypothesisViolation { .. }) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &outcome.payload).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(outcome.payload.as_bytes()).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("audit failed");
        ExitCode::from(1)
    }
}

//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use uavris_core::{run, Algorithm, Scenario};

use crate::campaign::{write_reports, Campaign, FRONTS_DIR};
use crate::error::Result;
use crate::report::{fmt_f64, front_csv, write_atomic, TrialReport};
use crate::stats::{self, load_reports, CDF_FILE};

#[derive(Debug, Parser)]
#[command(
    name = "uavris",
    version,
    about = "UAV-RIS deployment optimizers and experiment harness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm once and export its report and front.
    Run(RunArgs),
    /// Run every trial of a campaign file.
    Campaign(CampaignArgs),
    /// Recompute aggregate tables from exported reports.
    Stats(DirArgs),
    /// Emit plot-ready front, history and CDF files from exported reports.
    Fronts(DirArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file; the built-in reference scenario when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Algorithm id, e.g. insga2cdc, nsga2, moead, cdps.
    #[arg(long)]
    pub algo: String,
    /// Defaults to the scenario's rng_seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of UAV-RISs.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of ground users (a prefix of the scenario's list).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub pop_size: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Store wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    pub record_timing: bool,
    /// Store the per-generation front history in the report.
    #[arg(long)]
    pub history: bool,
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    /// Campaign TOML file.
    pub file: PathBuf,
    /// Override the worker count from the file.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Override the output directory from the file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DirArgs {
    /// Directory holding report JSON files.
    #[arg(long)]
    pub reports: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run(a) => run_one(&a),
        Command::Campaign(a) => run_campaign(&a),
        Command::Stats(a) => {
            let reports = load_reports(&a.reports)?;
            let rows = stats::write_tables(&reports, &a.out)?;
            println!(
                "{} reports, {} aggregate rows -> {}",
                reports.len(),
                rows.len(),
                a.out.display()
            );
            Ok(())
        }
        Command::Fronts(a) => write_fronts(&a.reports, &a.out),
    }
}

fn run_one(a: &RunArgs) -> Result<()> {
    let algorithm: Algorithm = a.algo.parse()?;
    let mut s = match &a.scenario {
        Some(p) => Scenario::load(p)?,
        None => Scenario::reference(),
    };
    if let Some(g) = a.generations {
        s.algo.max_gens = g;
    }
    if let Some(p) = a.pop_size {
        s.algo.pop_size = p;
    }
    let s = s.with_counts(a.m.unwrap_or(s.m()), a.k.unwrap_or(s.k()))?;
    let seed = a.seed.unwrap_or(s.algo.rng_seed);
    let result = run(algorithm, &s, seed)?;
    let report = TrialReport::from_run(&result, s.m(), s.k(), 0, s.algo.max_gens, a.record_timing, a.history)?;
    write_reports(std::slice::from_ref(&report), &a.out)?;
    println!(
        "{} seed={} front={} evals={} best f1={} f2={} f3={}",
        algorithm.id(),
        seed,
        report.front.len(),
        report.eval_count,
        fmt_f64(report.best.f1_bps),
        fmt_f64(report.best.f2_bps),
        fmt_f64(report.best.f3_j),
    );
    Ok(())
}

fn run_campaign(a: &CampaignArgs) -> Result<()> {
    let mut c = Campaign::load(&a.file)?;
    if let Some(w) = a.workers {
        c.workers = w;
    }
    if let Some(o) = &a.out {
        c.output_dir = o.clone();
    }
    c.validate()?;
    let reports = c.run()?;
    println!("{} trials -> {}", reports.len(), c.output_dir.display());
    Ok(())
}

fn write_fronts(reports_dir: &Path, out: &Path) -> Result<()> {
    let reports = load_reports(reports_dir)?;
    for r in &reports {
        let stem = r.stem();
        write_atomic(&out.join(FRONTS_DIR).join(format!("{stem}.csv")), &front_csv(&r.front))?;
        if let Some(h) = &r.history {
            write_atomic(&out.join("history").join(format!("{stem}.csv")), &history_csv(h))?;
        }
    }
    write_atomic(&out.join(CDF_FILE), &stats::cdf_csv(&reports)?)?;
    println!("{} fronts -> {}", reports.len(), out.display());
    Ok(())
}

fn history_csv(h: &[Vec<uavris_core::ObjectiveRecord>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["generation", "f1_bps", "f2_bps", "f3_j"])
        .expect("write to memory");
    for (g, front) in h.iter().enumerate() {
        for p in front {
            w.write_record([
                (g + 1).to_string(),
                fmt_f64(p.f1_bps),
                fmt_f64(p.f2_bps),
                fmt_f64(p.f3_j),
            ])
            .expect("write to memory");
        }
    }
    w.into_inner().expect("flush to memory")
}

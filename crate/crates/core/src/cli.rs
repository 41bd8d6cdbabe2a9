//! The `treegraft` command line.
//!
//! ```text
//! treegraft sample   --family binary --size 10 --count 5 --seed 7 --format json
//! treegraft bench    --family binary --size 1000,10000 --count 100
//! treegraft selftest quick
//! ```
//!
//! Exit codes: 0 success, 1 failed check or internal error, 2 usage error.

use crate::arena::TreeArena;
use crate::bitsource::DEFAULT_SEED;
use crate::error::Error;
use crate::sample::SampleReport;
use crate::sampler::Sampler;
use crate::selftest::{self, Level};
use crate::weighted::{UnaryWeight, WeightedSampler};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const STATS_HEADER: &str = "index,size,bits,restarts,time_ns";
pub const BENCH_HEADER: &str =
    "family,algorithm,n,nodes,count,mean_bits,entropy_proxy,excess_bits,mean_time_ns,nodes_per_sec";

#[derive(Parser, Debug)]
#[command(
    name = "treegraft",
    version,
    about = "Exact-size uniform random trees by grafting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample trees and print them.
    Sample(SampleArgs),
    /// Report mean bits and timing per size as CSV.
    Bench(BenchArgs),
    /// Run built-in correctness checks.
    Selftest {
        #[arg(value_enum, default_value_t = SelftestLevel::Quick)]
        level: SelftestLevel,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Binary,
    Motzkin,
    Weighted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Rejection,
    Efficient,
    RemyClassic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Word,
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelftestLevel {
    Quick,
    Full,
}

#[derive(Args, Debug, Clone)]
pub struct SamplerArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Binary trees only. Defaults to `efficient`.
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    /// Weighted trees only: unary weight as `a`, `a/2^k` or `a/b` with `b` a power of two.
    #[arg(long)]
    pub weight: Option<String>,
    /// Lift the weighted size cap.
    #[arg(long)]
    pub allow_large: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Internal nodes for binary trees, total nodes otherwise.
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, value_enum, default_value_t = Format::Word)]
    pub format: Format,
    /// Write per-sample statistics as CSV to this file.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub size: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub count: u64,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSize { .. }
            | Error::SizeCapExceeded { .. }
            | Error::InvalidWeight(_)
            | Error::WeightTooLarge(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn samplers(args: &SamplerArgs) -> Result<Vec<(&'static str, Sampler)>, Failure> {
    if args.family != Family::Binary && args.algorithm.is_some() {
        return Err(Failure::Usage(
            "--algorithm applies to --family binary only".into(),
        ));
    }
    if args.family != Family::Weighted && args.weight.is_some() {
        return Err(Failure::Usage(
            "--weight applies to --family weighted only".into(),
        ));
    }
    Ok(match args.family {
        Family::Binary => match args.algorithm {
            Some(a) => vec![binary_sampler(a)],
            None => vec![binary_sampler(Algorithm::Efficient)],
        },
        Family::Motzkin => vec![("rejection", Sampler::Motzkin)],
        Family::Weighted => {
            let u: UnaryWeight = match &args.weight {
                Some(w) => w.parse()?,
                None => UnaryWeight::ONE,
            };
            let w = WeightedSampler::new(u)?.allow_large(args.allow_large);
            vec![("rejection", Sampler::Weighted(w))]
        }
    })
}

fn binary_sampler(a: Algorithm) -> (&'static str, Sampler) {
    match a {
        Algorithm::Rejection => ("rejection", Sampler::BinaryRejection),
        Algorithm::Efficient => ("efficient", Sampler::BinaryEfficient),
        Algorithm::RemyClassic => ("remy-classic", Sampler::BinaryRemyClassic),
    }
}

fn check_size(family: Family, size: usize) -> Result<(), Failure> {
    if family != Family::Binary && size == 0 {
        return Err(Failure::Usage(
            "unary-binary trees have at least one node".into(),
        ));
    }
    Ok(())
}

fn format_tree(out: &mut String, t: &TreeArena, index: u64, format: Format) {
    match format {
        Format::Word => {
            out.push_str(&t.to_word());
            out.push('\n');
        }
        Format::Json => {
            out.push_str(&t.to_json());
            out.push('\n');
        }
        Format::Dot => {
            writeln!(out, "// tree {index}").unwrap();
            out.push_str(&t.to_dot());
        }
    }
}

fn stats_csv(reports: &[SampleReport]) -> String {
    let mut s = String::with_capacity(32 * (reports.len() + 1));
    s.push_str(STATS_HEADER);
    s.push('\n');
    for (i, r) in reports.iter().enumerate() {
        writeln!(
            s,
            "{i},{},{},{},{}",
            r.size,
            r.bits_consumed,
            r.restarts,
            r.wall_time.as_nanos()
        )
        .unwrap();
    }
    s
}

fn cmd_sample(args: &SampleArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    check_size(args.sampler.family, args.size)?;
    let (_, sampler) = samplers(&args.sampler)?.remove(0);
    let (size, seed, count) = (args.size, args.sampler.seed, args.count);
    let batch = crate::batch::with_threads(args.sampler.threads, || {
        sampler.sample_batch(size, seed, count)
    })??;
    let mut text = String::new();
    let mut reports = Vec::with_capacity(batch.len());
    for (i, (t, report)) in batch.into_iter().enumerate() {
        t.validate()?;
        format_tree(&mut text, &t, i as u64, args.format);
        reports.push(report);
    }
    stdout.write_all(text.as_bytes())?;
    if let Some(path) = &args.stats {
        fs::write(path, stats_csv(&reports))?;
    }
    Ok(())
}

fn entropy_proxy(family: Family, n: usize) -> Option<f64> {
    match family {
        Family::Binary => Some(2.0 * n as f64),
        Family::Motzkin => Some(n as f64 * 3f64.log2()),
        Family::Weighted => None,
    }
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let family = args.sampler.family;
    let mut list = samplers(&args.sampler)?;
    if family == Family::Binary && args.sampler.algorithm.is_none() {
        list.push(binary_sampler(Algorithm::RemyClassic));
    }
    let mut text = String::from(BENCH_HEADER);
    text.push('\n');
    for &n in &args.size {
        check_size(family, n)?;
        for (label, sampler) in &list {
            let seed = args.sampler.seed;
            let batch = crate::batch::with_threads(args.sampler.threads, || {
                sampler.report_batch(n, seed, args.count)
            })??;
            let k = batch.len().max(1) as f64;
            let bits = batch.iter().map(|r| r.bits_consumed as f64).sum::<f64>() / k;
            let nanos = batch
                .iter()
                .map(|r| r.wall_time.as_nanos() as f64)
                .sum::<f64>()
                / k;
            let nodes = batch.first().map_or(0, |r| r.size);
            let proxy = entropy_proxy(family, n);
            let fmt_opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.3}"));
            writeln!(
                text,
                "{},{label},{n},{nodes},{},{bits:.3},{},{},{nanos:.0},{:.0}",
                family_name(family),
                args.count,
                fmt_opt(proxy),
                fmt_opt(proxy.map(|p| bits - p)),
                if nanos > 0.0 {
                    nodes as f64 * 1e9 / nanos
                } else {
                    0.0
                }
            )
            .unwrap();
        }
    }
    stdout.write_all(text.as_bytes())?;
    Ok(())
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Binary => "binary",
        Family::Motzkin => "motzkin",
        Family::Weighted => "weighted",
    }
}

fn cmd_selftest(level: SelftestLevel, seed: u64, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let level = match level {
        SelftestLevel::Quick => Level::Quick,
        SelftestLevel::Full => Level::Full,
    };
    let checks = selftest::run(level, seed);
    for c in &checks {
        writeln!(stdout, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(stdout, "{} checks, {failed} failed", checks.len())?;
    Ok(selftest::all_passed(&checks))
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Sample(a) => cmd_sample(a, stdout).map(|_| true),
        Command::Bench(a) => cmd_bench(a, stdout).map(|_| true),
        Command::Selftest { level, seed } => cmd_selftest(*level, *seed, stdout),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_FAILURE
        }
    }
}

//! The `cyclomod` command line.
//!
//! Settings resolve as flag, then `CYCLOMOD_*` environment variable, then
//! default. Only the scale guards and the worker count read the environment.

pub mod record;
pub mod sweep;

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::closedform;
use crate::cyclotomy::CyclotomyTable;
use crate::error::Error;
use crate::ffield::{FieldContext, DEFAULT_MAX_P};
use crate::oracle::{self, OracleLimits};
use crate::periods;
use crate::series;
use crate::waring::{self, NSequence};

use record::{Format, CSV_HEADER};
use sweep::{SweepConfig, VerifyLevel};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cyclomod", version, about = "Waring's problem mod p from cyclotomic numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Target {
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    #[arg(short = 'd', long = "order")]
    pub d: u64,
    /// Largest prime accepted.
    #[arg(long, env = "CYCLOMOD_MAX_P", default_value_t = DEFAULT_MAX_P)]
    pub max_p: u64,
}

#[derive(Debug, Args)]
pub struct Range {
    /// Shorthand for --pmin P --pmax P.
    #[arg(short = 'p', long = "prime", conflicts_with_all = ["p_min", "p_max"])]
    pub p: Option<u64>,
    #[arg(long = "pmin")]
    pub p_min: Option<u64>,
    #[arg(long = "pmax")]
    pub p_max: Option<u64>,
    /// Only this order; otherwise every divisor d >= 2 of p - 1.
    #[arg(short = 'd', long = "order")]
    pub d: Option<u64>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, env = "CYCLOMOD_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, env = "CYCLOMOD_MAX_P", default_value_t = DEFAULT_MAX_P)]
    pub max_p: u64,
    /// The series valuation check is skipped for orders above this.
    #[arg(long, env = "CYCLOMOD_SERIES_MAX_ORDER", default_value_t = 64)]
    pub series_max_order: usize,
    /// Stop at the first failing key.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print g_d(p).
    Gd(Target),
    /// Print s for every class, and for one element with -a.
    Sd {
        #[command(flatten)]
        target: Target,
        #[arg(short = 'a', long = "element")]
        a: Option<u64>,
    },
    /// Print the table of cyclotomic numbers.
    Cyclo {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the period polynomial and its discriminant.
    Period(Target),
    /// Print the coefficients of I_j as exact fractions.
    ///
    /// Here `--order` is the truncation order, so d is only accepted as `-d`.
    Series {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'd')]
        d: u64,
        #[arg(long, env = "CYCLOMOD_MAX_P", default_value_t = DEFAULT_MAX_P)]
        max_p: u64,
        #[arg(short = 'j', long = "class")]
        j: usize,
        /// Highest coefficient printed; defaults to d + 2.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Print the closed-form g, the representation and witness tags (d = 3, 4).
    Closed(Target),
    /// Dump N(k, a) for 1 <= k <= K as CSV.
    Oracle {
        #[command(flatten)]
        target: Target,
        #[arg(short = 'k', long = "max-k")]
        k: usize,
        #[arg(long, env = "CYCLOMOD_ORACLE_MAX_P", default_value_t = OracleLimits::default().max_p)]
        oracle_max_p: u64,
    },
    /// Solve a range of primes and stream one record per (p, d).
    Sweep {
        #[command(flatten)]
        range: Range,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = VerifyLevel::Fast)]
        verify: VerifyLevel,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep the records already in --out and skip their keys.
        #[arg(long, requires = "out")]
        resume: bool,
    },
    /// Run every cross-check over a range and report failures.
    Verify {
        #[command(flatten)]
        range: Range,
    },
}

/// A message for stderr plus the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPrime(_)
            | Error::DegenerateOrder { .. }
            | Error::InvalidOrder(_)
            | Error::PrimeTooLarge { .. }
            | Error::ZeroArgument
            | Error::ResidueOutOfRange { .. }
            | Error::ClassOutOfRange { .. }
            | Error::ScaleGuard { .. }
            | Error::WrongResidueClass { .. } => EXIT_INVALID,
            _ => EXIT_VERIFICATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_INVALID,
            message: format!("i/o error: {e}"),
        }
    }
}

type CliResult = Result<u8, Failure>;

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Executes one subcommand, writing its result to `out`.
pub fn run(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Gd(t) => gd(&t, out),
        Command::Sd { target, a } => sd(&target, a, out),
        Command::Cyclo { target, format } => cyclo(&target, format, out),
        Command::Period(t) => period(&t, out),
        Command::Series { p, d, max_p, j, order } => series_cmd(&Target { p, d, max_p }, j, order, out),
        Command::Closed(t) => closed(&t, out),
        Command::Oracle { target, k, oracle_max_p } => oracle_cmd(&target, k, oracle_max_p, out),
        Command::Sweep {
            range,
            format,
            verify,
            out: path,
            resume,
        } => sweep_cmd(&range, format, verify, path.as_deref(), resume, out),
        Command::Verify { range } => verify_cmd(&range, out),
    }
}

fn context(t: &Target) -> Result<FieldContext, Error> {
    FieldContext::with_limit(t.p, t.d, t.max_p)
}

fn print_json<T: Serialize>(value: &T, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::other)?;
    writeln!(out)
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

/// When d is coprime to p - 1 every nonzero residue is a d-th power, so
/// s = g = 1. Reported as a flagged result, not an error.
fn degenerate(t: &Target) -> Option<Result<(), Failure>> {
    match context(t) {
        Err(Error::DegenerateOrder { .. }) => Some(Ok(())),
        Err(e) => Some(Err(e.into())),
        Ok(_) => None,
    }
}

#[derive(Serialize)]
struct SdOutput {
    p: String,
    d: String,
    f: String,
    theta: String,
    omega: String,
    degenerate: bool,
    per_class_s: Vec<String>,
    g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<String>,
}

fn gd(t: &Target, out: &mut dyn Write) -> CliResult {
    if let Some(r) = degenerate(t) {
        r?;
        log::warn!("d = {} is coprime to p - 1 = {}; every residue is a power", t.d, t.p - 1);
        writeln!(out, "1")?;
        return Ok(EXIT_OK);
    }
    let ctx = context(t)?;
    let solution = waring::solve(&ctx)?;
    writeln!(out, "{}", solution.g)?;
    Ok(EXIT_OK)
}

fn sd(t: &Target, a: Option<u64>, out: &mut dyn Write) -> CliResult {
    if let Some(a) = a {
        if a % t.p == 0 {
            return Err(Error::ZeroArgument.into());
        }
    }
    if let Some(r) = degenerate(t) {
        r?;
        let output = SdOutput {
            p: t.p.to_string(),
            d: t.d.to_string(),
            f: (t.p - 1).to_string(),
            theta: "0".into(),
            omega: crate::ffield::smallest_primitive_root(t.p).to_string(),
            degenerate: true,
            per_class_s: vec!["1".into()],
            g: "1".into(),
            a: a.map(|a| (a % t.p).to_string()),
            s: a.map(|_| "1".into()),
        };
        print_json(&output, out)?;
        return Ok(EXIT_OK);
    }
    let ctx = context(t)?;
    let solution = waring::solve(&ctx)?;
    let (a_out, s_out) = match a {
        Some(a) => {
            let a = a % t.p;
            (Some(a.to_string()), Some(solution.s_of(&ctx, a)?.to_string()))
        }
        None => (None, None),
    };
    let output = SdOutput {
        p: solution.p.to_string(),
        d: solution.d.to_string(),
        f: solution.f.to_string(),
        theta: solution.theta.to_string(),
        omega: solution.omega.to_string(),
        degenerate: false,
        per_class_s: strings(&solution.per_class_s),
        g: solution.g.to_string(),
        a: a_out,
        s: s_out,
    };
    print_json(&output, out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CycloOutput {
    p: String,
    d: String,
    omega: String,
    table: Vec<Vec<String>>,
}

fn cyclo(t: &Target, format: Format, out: &mut dyn Write) -> CliResult {
    let ctx = context(t)?;
    let table = CyclotomyTable::compute(&ctx);
    match format {
        Format::Csv => {
            for row in table.rows() {
                writeln!(out, "{}", strings(row).join(","))?;
            }
        }
        Format::Json => print_json(
            &CycloOutput {
                p: ctx.p().to_string(),
                d: ctx.d().to_string(),
                omega: ctx.omega().to_string(),
                table: table.rows().into_iter().map(strings).collect(),
            },
            out,
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PeriodOutput {
    p: String,
    d: String,
    coeffs: Vec<String>,
    discriminant: String,
}

fn period(t: &Target, out: &mut dyn Write) -> CliResult {
    let ctx = context(t)?;
    let table = CyclotomyTable::compute(&ctx);
    let seq = NSequence::new(&table, ctx.d())?;
    let poly = periods::period_polynomial(&seq)?;
    print_json(
        &PeriodOutput {
            p: ctx.p().to_string(),
            d: ctx.d().to_string(),
            coeffs: strings(&poly.coeffs),
            discriminant: poly.discriminant.to_string(),
        },
        out,
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SeriesOutput {
    p: String,
    d: String,
    j: String,
    coeffs: Vec<String>,
}

fn series_cmd(t: &Target, j: usize, order: Option<usize>, out: &mut dyn Write) -> CliResult {
    let ctx = context(t)?;
    let d = ctx.d();
    if j >= d {
        return Err(Error::ClassOutOfRange { class: j, d }.into());
    }
    let order = order.unwrap_or(d + 2);
    let table = CyclotomyTable::compute(&ctx);
    let seq = NSequence::new(&table, order.max(1))?;
    let s = series::i_series(&seq, j, order)?;
    print_json(
        &SeriesOutput {
            p: ctx.p().to_string(),
            d: d.to_string(),
            j: j.to_string(),
            coeffs: strings(s.coeffs()),
        },
        out,
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClosedOutput {
    p: String,
    d: String,
    g: String,
    form: &'static str,
    representation: [String; 2],
    witnesses: Vec<String>,
}

fn closed(t: &Target, out: &mut dyn Write) -> CliResult {
    if !matches!(t.d, 3 | 4) {
        return Err(Failure::invalid(format!("closed forms exist for d = 3 and d = 4, not {}", t.d)));
    }
    if (t.p - 1) % t.d != 0 {
        return Err(Error::WrongResidueClass { p: t.p, modulus: t.d }.into());
    }
    let ctx = context(t)?;
    let table = CyclotomyTable::compute(&ctx);
    let report = closedform::closed_form(&table)?.expect("d is 3 or 4");
    let rep = report.representation;
    print_json(
        &ClosedOutput {
            p: ctx.p().to_string(),
            d: ctx.d().to_string(),
            g: report.g.to_string(),
            form: match rep.kind {
                closedform::FormKind::Cubic => "4p=L^2+27M^2",
                closedform::FormKind::Quartic => "p=x^2+4y^2",
            },
            representation: [rep.first.to_string(), rep.second.to_string()],
            witnesses: strings(&report.witnesses),
        },
        out,
    )?;
    Ok(EXIT_OK)
}

fn oracle_cmd(t: &Target, k: usize, oracle_max_p: u64, out: &mut dyn Write) -> CliResult {
    if k == 0 {
        return Err(Failure::invalid("-k must be at least 1"));
    }
    let ctx = context(t)?;
    let limits = OracleLimits {
        max_p: oracle_max_p,
        max_k: k.max(OracleLimits::default().max_k),
    };
    let counts = oracle::dp_counts_with(&ctx, k, limits)?;
    let header: Vec<String> = std::iter::once("k".to_string())
        .chain((0..ctx.p()).map(|a| a.to_string()))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for row in 1..=counts.k_max() {
        writeln!(out, "{},{}", row, strings(counts.row(row)).join(","))?;
    }
    Ok(EXIT_OK)
}

fn sweep_config(range: &Range, verify: VerifyLevel) -> Result<SweepConfig, Failure> {
    let (p_min, p_max) = match (range.p, range.p_min, range.p_max) {
        (Some(p), _, _) => (p, p),
        (None, Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Failure::invalid("give -p P or both --pmin and --pmax")),
    };
    if p_min <= 2 || p_min > p_max {
        return Err(Failure::invalid(format!("need 2 < pmin <= pmax, got {p_min}..{p_max}")));
    }
    if p_max > range.max_p {
        return Err(Error::PrimeTooLarge {
            p: p_max,
            limit: range.max_p,
        }
        .into());
    }
    if let Some(d) = range.d {
        if d < 2 {
            return Err(Error::InvalidOrder(d).into());
        }
    }
    Ok(SweepConfig {
        p_min,
        p_max,
        d_filter: range.d,
        verify,
        jobs: range.jobs,
        max_p: range.max_p,
        series_max_order: range.series_max_order,
        strict: range.strict,
    })
}

/// Opens the output file for appending. With `resume`, a torn final line is
/// cut off and the keys of the complete lines are returned.
fn open_output(path: &Path, format: Format, resume: bool) -> io::Result<(File, HashSet<(u64, usize)>)> {
    let mut done = HashSet::new();
    let mut existing = String::new();
    if resume && path.exists() {
        File::open(path)?.read_to_string(&mut existing)?;
        let keep = existing.rfind('\n').map_or(0, |i| i + 1);
        existing.truncate(keep);
        done = existing.lines().filter_map(|l| record::parse_key(l, format)).collect();
    }
    let file = OpenOptions::new().create(true).write(true).truncate(false).open(path)?;
    file.set_len(existing.len() as u64)?;
    let mut file = file;
    io::Seek::seek(&mut file, io::SeekFrom::End(0))?;
    if existing.is_empty() && format == Format::Csv {
        writeln!(file, "{CSV_HEADER}")?;
    }
    Ok((file, done))
}

fn sweep_cmd(
    range: &Range,
    format: Format,
    verify: VerifyLevel,
    path: Option<&Path>,
    resume: bool,
    stdout: &mut dyn Write,
) -> CliResult {
    let config = sweep_config(range, verify)?;
    let (mut sink, done): (Box<dyn Write>, _) = match path {
        Some(path) => {
            let (file, done) = open_output(path, format, resume)?;
            if !done.is_empty() {
                log::info!("resuming: {} keys already present", done.len());
            }
            (Box::new(BufWriter::new(file)), done)
        }
        None => {
            if format == Format::Csv {
                writeln!(stdout, "{CSV_HEADER}")?;
            }
            (Box::new(stdout), HashSet::new())
        }
    };
    let mut failures = 0usize;
    sweep::run_sweep(&config, &done, |outcome| match outcome {
        Ok(rec) => {
            writeln!(sink, "{}", record::emit(&rec, format))?;
            sink.flush()?;
            if rec.closed_form_match == Some(false) {
                eprintln!("FAIL p={} d={}: closed form disagrees", rec.p, rec.d);
                failures += 1;
                return Ok(!config.strict);
            }
            Ok(true)
        }
        Err(fail) => {
            eprintln!("FAIL {fail}");
            failures += 1;
            Ok(!config.strict)
        }
    })?;
    sink.flush()?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_VERIFICATION })
}

fn verify_cmd(range: &Range, out: &mut dyn Write) -> CliResult {
    let config = sweep_config(range, VerifyLevel::Full)?;
    let mut checked = 0usize;
    let mut failures = 0usize;
    sweep::run_sweep(&config, &HashSet::new(), |outcome| {
        checked += 1;
        match outcome {
            Ok(rec) if rec.closed_form_match == Some(false) => {
                eprintln!("FAIL p={} d={}: closed form disagrees", rec.p, rec.d);
                failures += 1;
            }
            Ok(_) => {}
            Err(fail) => {
                eprintln!("FAIL {fail}");
                failures += 1;
            }
        }
        Ok(failures == 0 || !config.strict)
    })?;
    writeln!(out, "checked {checked} keys, {failures} failures")?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_VERIFICATION })
}

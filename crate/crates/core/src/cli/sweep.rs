//! Prime-range sweep: solve every admissible (p, d), cross-check, and
//! stream records in ascending key order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

use crate::closedform;
use crate::cyclotomy::CyclotomyTable;
use crate::error::Error;
use crate::ffield::{divisors, is_prime, FieldContext};
use crate::oracle;
use crate::series;
use crate::waring::{self, NSequence};

use super::record::SweepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyLevel {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub p_min: u64,
    pub p_max: u64,
    pub d_filter: Option<u64>,
    pub verify: VerifyLevel,
    pub jobs: usize,
    pub max_p: u64,
    /// The series valuation check is skipped for d above this.
    pub series_max_order: usize,
    pub strict: bool,
}

impl SweepConfig {
    pub fn new(p_min: u64, p_max: u64) -> Self {
        Self {
            p_min,
            p_max,
            d_filter: None,
            verify: VerifyLevel::Fast,
            jobs: 0,
            max_p: crate::ffield::DEFAULT_MAX_P,
            series_max_order: 64,
            strict: false,
        }
    }
}

/// A (p, d) whose record was aborted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyFailure {
    pub p: u64,
    pub d: usize,
    pub message: String,
}

impl fmt::Display for KeyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} d={}: {}", self.p, self.d, self.message)
    }
}

pub type KeyOutcome = Result<SweepRecord, KeyFailure>;

/// Every (p, d) in the range, ascending: all divisors d >= 2 of p - 1, or
/// only the filter when it divides p - 1.
pub fn keys(config: &SweepConfig) -> Vec<(u64, usize)> {
    (config.p_min.max(3)..=config.p_max)
        .filter(|&p| is_prime(p))
        .flat_map(|p| {
            let ds: Vec<u64> = match config.d_filter {
                Some(d) if (p - 1) % d == 0 => vec![d],
                Some(_) => vec![],
                None => divisors(p - 1).into_iter().filter(|&d| d >= 2).collect(),
            };
            ds.into_iter().map(move |d| (p, d as usize))
        })
        .collect()
}

/// Solves and verifies a single key.
pub fn run_key(p: u64, d: usize, config: &SweepConfig) -> KeyOutcome {
    let start = Instant::now();
    let fail = |message: String| KeyFailure { p, d, message };
    let ctx = FieldContext::with_limit(p, d as u64, config.max_p).map_err(|e| fail(e.to_string()))?;
    let table = CyclotomyTable::compute(&ctx);
    let solution = waring::solve_table(&table).map_err(|e| fail(e.to_string()))?;

    let mut closed_form_match = None;
    if config.verify == VerifyLevel::Full {
        full_checks(&table, &solution, config.series_max_order).map_err(fail)?;
        closed_form_match = closed_form_check(&table, &solution).map_err(fail)?;
    }

    Ok(SweepRecord {
        p,
        d,
        f: solution.f,
        theta: solution.theta,
        omega: solution.omega,
        per_class_s: solution.per_class_s,
        g: solution.g,
        methods_agree: true,
        closed_form_match,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn full_checks(
    table: &CyclotomyTable<'_>,
    solution: &waring::WaringSolution,
    series_max_order: usize,
) -> Result<(), String> {
    let ctx = table.ctx();
    let report = table.verify_identities();
    if !report.all_passed() {
        return Err(format!("cyclotomy identities failed: {}", report.to_string().trim()));
    }
    let brute = oracle::brute_s_by_class(ctx).map_err(|e| e.to_string())?;
    if brute != solution.per_class_s {
        return Err(format!(
            "oracle disagrees: oracle {:?}, solver {:?}",
            brute, solution.per_class_s
        ));
    }
    let mut seq = NSequence::new(table, 3).map_err(|e| e.to_string())?;
    let failures = seq.low_order_identity_failures().map_err(|e| e.to_string())?;
    if !failures.is_empty() {
        return Err(format!("low-order identities failed: {}", failures.join("; ")));
    }
    let d = ctx.d();
    if d <= series_max_order {
        for alpha in 1..d {
            let j = (alpha + ctx.theta()) % d;
            let ord = series::log_derivative_ord(&mut seq, j).map_err(|e| e.to_string())?;
            if ord != solution.per_class_s[alpha] {
                return Err(format!(
                    "series valuation {ord} != s = {} for class {alpha}",
                    solution.per_class_s[alpha]
                ));
            }
        }
    }
    Ok(())
}

/// `Some(true)` when the closed form, the sign-resolved formula table and
/// the quartic witnesses all agree with the solver.
fn closed_form_check(
    table: &CyclotomyTable<'_>,
    solution: &waring::WaringSolution,
) -> Result<Option<bool>, String> {
    let report = match closedform::closed_form(table) {
        Ok(Some(r)) => r,
        Ok(None) => return Ok(None),
        Err(Error::FormulaMismatch { .. }) => return Ok(Some(false)),
        Err(e) => return Err(e.to_string()),
    };
    let mut ok = report.g == solution.g;
    if table.d() == 4 {
        let witnessed: Vec<usize> = report.witnesses.iter().map(|w| w.alpha).collect();
        let hard: Vec<usize> = (1..4).filter(|&a| solution.per_class_s[a] > 2).collect();
        ok &= witnessed == hard;
    }
    Ok(Some(ok))
}

/// Runs the sweep, skipping `completed` keys, and hands outcomes to `sink`
/// in ascending key order. Work is spread over `config.jobs` threads (0 =
/// rayon default); the caller's thread is the only writer. Stops early when
/// `sink` returns `false`.
pub fn run_sweep<F>(config: &SweepConfig, completed: &HashSet<(u64, usize)>, mut sink: F) -> std::io::Result<()>
where
    F: FnMut(KeyOutcome) -> std::io::Result<bool>,
{
    let pending: Vec<(u64, usize)> = keys(config)
        .into_iter()
        .filter(|k| !completed.contains(k))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .expect("thread pool");
    let cancel = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, KeyOutcome)>();

    std::thread::scope(|scope| {
        let cancel = &cancel;
        let pending = &pending;
        scope.spawn(move || {
            pool.install(|| {
                pending.par_iter().enumerate().for_each_with(tx, |tx, (i, &(p, d))| {
                    if cancel.load(Ordering::Relaxed) {
                        return;
                    }
                    let _ = tx.send((i, run_key(p, d, config)));
                });
            });
        });

        let mut next = 0;
        let mut buffer = BTreeMap::new();
        let mut result = Ok(());
        for (i, outcome) in rx.iter() {
            buffer.insert(i, outcome);
            while let Some(outcome) = buffer.remove(&next) {
                next += 1;
                match sink(outcome) {
                    Ok(true) => {}
                    Ok(false) => {
                        cancel.store(true, Ordering::Relaxed);
                        return result;
                    }
                    Err(e) => {
                        cancel.store(true, Ordering::Relaxed);
                        result = Err(e);
                        return result;
                    }
                }
            }
        }
        result
    })
}

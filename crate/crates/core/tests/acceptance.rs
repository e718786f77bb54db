//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built without the libtest harness so every line is printed.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cyclomod::cli::record::{deterministic_part, emit, Format};
use cyclomod::cli::sweep::{run_sweep, SweepConfig, VerifyLevel};
use cyclomod::closedform::{self, FormKind};
use cyclomod::ffield::{divisors, is_prime};
use cyclomod::oracle;
use cyclomod::periods;
use cyclomod::series;
use cyclomod::waring::{self, s_by_reachability};
use cyclomod::{CyclotomyTable, FieldContext, NSequence};

type Check = Result<String, String>;

fn primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(3)..=hi).filter(|&p| is_prime(p))
}

/// Every (p, d) with d >= 2 dividing p - 1.
fn keys(hi: u64) -> Vec<(u64, u64)> {
    primes(3, hi)
        .flat_map(|p| divisors(p - 1).into_iter().filter(|&d| d >= 2).map(move |d| (p, d)))
        .collect()
}

fn bad(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

fn g_reproduction(d: u64, kind: FormKind) -> Check {
    let mut n = 0;
    let mut exceptions = Vec::new();
    for p in primes(3, 5000).filter(|p| (p - 1) % d == 0) {
        let ctx = FieldContext::new(p, d).map_err(|e| e.to_string())?;
        let g = waring::solve(&ctx).map_err(|e| format!("p={p}: {e}"))?.g;
        let want = closedform::g_closed(p, kind.order()).unwrap().map_err(|e| e.to_string())?;
        if g != want {
            return bad(format!("p={p}: solver g={g}, closed form {want}"));
        }
        if g != 2 {
            exceptions.push(format!("g({p})={g}"));
        }
        n += 1;
    }
    Ok(format!("{n} primes; exceptions {}", exceptions.join(", ")))
}

fn three_way() -> Check {
    let keys = keys(300);
    for &(p, d) in &keys {
        let ctx = FieldContext::new(p, d).unwrap();
        let table = CyclotomyTable::compute(&ctx);
        let mut seq = NSequence::new(&table, 2).map_err(|e| e.to_string())?;
        let brute = oracle::brute_s_by_class(&ctx).map_err(|e| e.to_string())?;
        for (alpha, &want) in brute.iter().enumerate() {
            let rec = seq.s_by_recurrence(alpha).map_err(|e| format!("p={p} d={d}: {e}"))?;
            let reach = s_by_reachability(&table, alpha).map_err(|e| format!("p={p} d={d}: {e}"))?;
            if rec != want || reach != want {
                return bad(format!(
                    "p={p} d={d} alpha={alpha}: recurrence {rec}, reachability {reach}, oracle {want}"
                ));
            }
        }
    }
    Ok(format!("{} (p, d) pairs", keys.len()))
}

fn count_bridge() -> Check {
    let keys = keys(200);
    let mut checked = 0u64;
    for &(p, d) in &keys {
        let ctx = FieldContext::new(p, d).unwrap();
        let table = CyclotomyTable::compute(&ctx);
        let seq = NSequence::new(&table, 6).map_err(|e| e.to_string())?;
        let counts = oracle::dp_counts(&ctx, 6).map_err(|e| e.to_string())?;
        for k in 1..=6 {
            for a in 1..p {
                let bridged = seq.count_representations(a, k).map_err(|e| e.to_string())?;
                if &bridged != counts.get(k, a) {
                    return bad(format!(
                        "p={p} d={d} k={k} a={a}: bridge {bridged}, DP {}",
                        counts.get(k, a)
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} counts over {} (p, d) pairs", keys.len()))
}

fn low_order_identities() -> Check {
    let keys = keys(200);
    for &(p, d) in &keys {
        let ctx = FieldContext::new(p, d).unwrap();
        let table = CyclotomyTable::compute(&ctx);
        let mut seq = NSequence::new(&table, 3).map_err(|e| e.to_string())?;
        let failures = seq.low_order_identity_failures().map_err(|e| e.to_string())?;
        if !failures.is_empty() {
            return bad(format!("p={p} d={d}: {}", failures.join("; ")));
        }
    }
    Ok(format!("k = 2, 3 for all classes over {} (p, d) pairs", keys.len()))
}

fn valuation_criterion() -> Check {
    let keys = keys(100);
    let mut checked = 0;
    for &(p, d) in &keys {
        let ctx = FieldContext::new(p, d).unwrap();
        let table = CyclotomyTable::compute(&ctx);
        let solution = waring::solve_table(&table).map_err(|e| e.to_string())?;
        let mut seq = NSequence::new(&table, 2).map_err(|e| e.to_string())?;
        let d = ctx.d();
        for alpha in 1..d {
            let j = (alpha + ctx.theta()) % d;
            let ord = series::log_derivative_ord(&mut seq, j).map_err(|e| format!("p={p} d={d}: {e}"))?;
            if ord != solution.per_class_s[alpha] {
                return bad(format!(
                    "p={p} d={d} alpha={alpha}: ord {ord}, s {}",
                    solution.per_class_s[alpha]
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} classes over {} (p, d) pairs", keys.len()))
}

/// Orders above this are skipped when sampling I_j for j != 0.
const SAMPLE_MAX_D: usize = 12;

fn reciprocal_remark() -> Check {
    let keys = keys(200);
    let mut non_polynomial = 0;
    let mut sampled = 0;
    for &(p, d) in &keys {
        let ctx = FieldContext::new(p, d).unwrap();
        let table = CyclotomyTable::compute(&ctx);
        let d = ctx.d();
        let seq = NSequence::new(&table, d + 1).map_err(|e| e.to_string())?;
        let poly = periods::period_polynomial(&seq).map_err(|e| format!("p={p} d={d}: {e}"))?;
        let i0 = series::i_series(&seq, 0, d + 2).map_err(|e| e.to_string())?;
        if !series::reciprocal_check(&i0, &poly) {
            return bad(format!("p={p} d={d}: I_0 is not the reversed period polynomial"));
        }
        if d <= SAMPLE_MAX_D {
            for j in 1..d {
                let ij = series::i_series(&seq, j, d + 2).map_err(|e| e.to_string())?;
                sampled += 1;
                if ij.coeffs()[d + 1..].iter().any(|c| *c != num_traits::Zero::zero()) {
                    non_polynomial += 1;
                }
            }
        }
    }
    if non_polynomial < 20 {
        return bad(format!("only {non_polynomial} of {sampled} sampled I_j have a nonzero tail"));
    }
    Ok(format!(
        "I_0 matches on {} (p, d) pairs; {non_polynomial} of {sampled} sampled I_j (j != 0) have a nonzero tail",
        keys.len()
    ))
}

fn formula_tables() -> Check {
    let mut n = 0;
    for (d, kind) in [(3u64, FormKind::Cubic), (4, FormKind::Quartic)] {
        for p in primes(3, 1000).filter(|p| (p - 1) % d == 0) {
            let ctx = FieldContext::new(p, d).unwrap();
            let table = CyclotomyTable::compute(&ctx);
            let rep = closedform::represent(p, kind).map_err(|e| e.to_string())?;
            closedform::resolve_sign(&rep, &table).map_err(|e| format!("p={p} d={d}: {e}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} tables, all d^2 entries"))
}

fn factorial_integrality() -> Check {
    let keys = keys(100);
    let mut series_count = 0;
    for &(p, d) in &keys {
        let ctx = FieldContext::new(p, d).unwrap();
        let table = CyclotomyTable::compute(&ctx);
        let d = ctx.d();
        let seq = NSequence::new(&table, d + 1).map_err(|e| e.to_string())?;
        for j in 0..d {
            let s = series::i_series(&seq, j, d + 2).map_err(|e| e.to_string())?;
            if !s.factorial_scaled_integral() {
                return bad(format!("p={p} d={d} j={j}: some k! c_k is not an integer"));
            }
            series_count += 1;
        }
    }
    Ok(format!("{series_count} series I_j to order d + 2"))
}

fn sweep_body(jobs: usize) -> Result<Vec<String>, String> {
    let mut config = SweepConfig::new(3, 500);
    config.verify = VerifyLevel::Full;
    config.jobs = jobs;
    let mut lines = Vec::new();
    let mut failure = None;
    run_sweep(&config, &HashSet::new(), |outcome| match outcome {
        Ok(rec) => {
            lines.push(deterministic_part(&emit(&rec, Format::Json), Format::Json));
            Ok(true)
        }
        Err(e) => {
            failure = Some(e.to_string());
            Ok(false)
        }
    })
    .map_err(|e| e.to_string())?;
    match failure {
        Some(f) => Err(f),
        None => Ok(lines),
    }
}

fn determinism() -> Check {
    let first = sweep_body(1)?;
    let second = sweep_body(0)?;
    if first != second {
        let at = first.iter().zip(&second).position(|(a, b)| a != b);
        return bad(format!("bodies differ (first difference at line {at:?})"));
    }
    Ok(format!("{} identical records", first.len()))
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion {
            name: "g_3(p) for p = 1 mod 3, p <= 5000",
            budget: secs(10),
            run: || g_reproduction(3, FormKind::Cubic),
        },
        Criterion {
            name: "g_4(p) for p = 1 mod 4, p <= 5000",
            budget: secs(10),
            run: || g_reproduction(4, FormKind::Quartic),
        },
        Criterion {
            name: "recurrence = reachability = oracle, p <= 300",
            budget: secs(60),
            run: three_way,
        },
        Criterion {
            name: "count bridge against DP counts, p <= 200, k <= 6",
            budget: None,
            run: count_bridge,
        },
        Criterion {
            name: "low-order identities, p <= 200",
            budget: None,
            run: low_order_identities,
        },
        Criterion {
            name: "series valuation equals s, p <= 100",
            budget: secs(30),
            run: valuation_criterion,
        },
        Criterion {
            name: "I_0 is the reversed period polynomial, p <= 200",
            budget: None,
            run: reciprocal_remark,
        },
        Criterion {
            name: "counted tables match formula tables, d = 3, 4, p <= 1000",
            budget: None,
            run: formula_tables,
        },
        Criterion {
            name: "k! c_k integrality",
            budget: None,
            run: factorial_integrality,
        },
        Criterion {
            name: "two full sweeps p <= 500 agree",
            budget: None,
            run: determinism,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let over = c.budget.filter(|b| elapsed > *b);
        let (status, detail) = match (&outcome, over) {
            (Ok(msg), None) => ("PASS", msg.clone()),
            (Ok(msg), Some(b)) => ("FAIL", format!("{msg}; exceeded {:.0}s budget", b.as_secs_f64())),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {} [{:.2}s]: {detail}", c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

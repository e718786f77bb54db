//! s_d(p,a) and g_d(p) from cyclotomic numbers alone.
//!
//! Two independent routes are provided:
//!
//! * the integer recurrence for the cyclotomic integers
//!   n(k,nu) = sum_i eta_i^k eta_{i+nu}, which gives every count
//!   N(k,a) = (f^k + n(k, ind(-a) mod d)) / p exactly, and
//! * shortest paths in the digraph on classes with an edge i -> j whenever
//!   (i,j) != 0, which is the boolean shadow of the same recurrence.
//!
//! [`solve`] runs both and refuses to answer if they disagree.

use std::collections::VecDeque;

use log::warn;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclotomy::CyclotomyTable;
use crate::error::{Error, Result};
use crate::ffield::FieldContext;
use crate::oracle;

/// The cyclotomic integers n(k, nu) for 0 <= k <= k_max and every class nu.
#[derive(Debug, Clone)]
pub struct NSequence<'t> {
    table: &'t CyclotomyTable<'t>,
    /// `values[nu][k]` = n(k, nu).
    values: Vec<Vec<BigInt>>,
    f_powers: Vec<BigInt>,
}

impl<'t> NSequence<'t> {
    pub fn new(table: &'t CyclotomyTable<'t>, k_max: usize) -> Result<Self> {
        let ctx = table.ctx();
        let d = ctx.d();
        let p = BigInt::from(ctx.p());
        let f = BigInt::from(ctx.f());
        let theta = ctx.theta();
        let values = (0..d)
            .map(|nu| {
                let delta = if nu == theta { p.clone() } else { BigInt::zero() };
                vec![-BigInt::one(), delta - &f]
            })
            .collect();
        let mut seq = Self {
            table,
            values,
            f_powers: vec![BigInt::one(), f],
        };
        seq.extend_to(k_max)?;
        Ok(seq)
    }

    pub fn table(&self) -> &'t CyclotomyTable<'t> {
        self.table
    }

    pub fn ctx(&self) -> &'t FieldContext {
        self.table.ctx()
    }

    pub fn k_max(&self) -> usize {
        self.f_powers.len() - 1
    }

    /// n(k, nu). Panics if k exceeds [`k_max`](Self::k_max).
    pub fn n(&self, k: usize, nu: usize) -> &BigInt {
        &self.values[nu % self.values.len()][k]
    }

    /// f^k for k <= k_max.
    pub fn f_power(&self, k: usize) -> &BigInt {
        &self.f_powers[k]
    }

    /// f^k + n(k, nu), which is p times a representation count.
    pub fn scaled_count(&self, k: usize, nu: usize) -> BigInt {
        self.f_power(k) + self.n(k, nu)
    }

    /// Grows the sequence with
    /// n(k+1,nu) = sum_l (nu,l) n(k,l) + f [nu = theta] n(k-1,0),
    /// checking p | f^k + n(k,nu) at each new step.
    pub fn extend_to(&mut self, k_max: usize) -> Result<()> {
        let ctx = self.table.ctx();
        let d = ctx.d();
        let theta = ctx.theta();
        let p = BigInt::from(ctx.p());
        let f = BigInt::from(ctx.f());
        if self.k_max() == 1 {
            self.check_divisibility(1, &p)?;
        }
        while self.k_max() < k_max {
            let k = self.k_max();
            let next: Vec<BigInt> = (0..d)
                .map(|nu| {
                    let mut acc: BigInt = self
                        .table
                        .row(nu)
                        .iter()
                        .map(|&(l, c)| &self.values[l][k] * c)
                        .sum();
                    if nu == theta {
                        acc += &f * &self.values[0][k - 1];
                    }
                    acc
                })
                .collect();
            for (column, value) in self.values.iter_mut().zip(next) {
                column.push(value);
            }
            let fk = &self.f_powers[k] * &f;
            self.f_powers.push(fk);
            self.check_divisibility(k + 1, &p)?;
        }
        Ok(())
    }

    fn check_divisibility(&self, k: usize, p: &BigInt) -> Result<()> {
        for nu in 0..self.values.len() {
            if !self.scaled_count(k, nu).is_multiple_of(p) {
                return Err(Error::SanityFailure { k, nu });
            }
        }
        Ok(())
    }

    /// N(k, a): the number of ordered k-tuples of nonzero d-th powers
    /// summing to a.
    pub fn count_representations(&self, a: u64, k: usize) -> Result<BigUint> {
        let ctx = self.ctx();
        ctx.index_of(a)?;
        let nu = ctx.class_of(ctx.p() - a)?;
        if k > self.k_max() {
            return Err(Error::SequenceTooShort {
                have: self.k_max(),
                need: k,
            });
        }
        let (q, r) = self.scaled_count(k, nu).div_rem(&BigInt::from(ctx.p()));
        debug_assert!(r.is_zero() && !q.is_negative());
        Ok(q.to_biguint().expect("counts are nonnegative"))
    }

    /// s for the class `alpha`: 1 for the d-th powers, otherwise the least
    /// k >= 2 with f^k + n(k, alpha + theta) != 0. The search stops at k = d.
    pub fn s_by_recurrence(&mut self, alpha: usize) -> Result<usize> {
        let ctx = self.ctx();
        let d = ctx.d();
        if alpha >= d {
            return Err(Error::ClassOutOfRange { class: alpha, d });
        }
        if alpha == 0 {
            return Ok(1);
        }
        let nu = (alpha + ctx.theta()) % d;
        for k in 2..=d {
            if k > self.k_max() {
                self.extend_to(k)?;
            }
            if !self.scaled_count(k, nu).is_zero() {
                return Ok(k);
            }
        }
        Err(Error::BoundExceeded { alpha, bound: d })
    }

    /// [`s_by_recurrence`](Self::s_by_recurrence) for every class at once,
    /// extending the sequence only as far as the largest s requires.
    pub fn s_all_by_recurrence(&mut self) -> Result<Vec<Result<usize>>> {
        let ctx = self.ctx();
        let d = ctx.d();
        let theta = ctx.theta();
        let mut out: Vec<Option<Result<usize>>> = vec![None; d];
        out[0] = Some(Ok(1));
        for k in 2..=d {
            if out.iter().all(Option::is_some) {
                break;
            }
            if k > self.k_max() {
                self.extend_to(k)?;
            }
            for (alpha, slot) in out.iter_mut().enumerate().skip(1) {
                if slot.is_none() && !self.scaled_count(k, (alpha + theta) % d).is_zero() {
                    *slot = Some(Ok(k));
                }
            }
        }
        Ok(out
            .into_iter()
            .enumerate()
            .map(|(alpha, s)| s.unwrap_or(Err(Error::BoundExceeded { alpha, bound: d })))
            .collect())
    }

    /// n(2,nu) + f^2 = p (nu,theta) and
    /// n(3,nu) + f^3 = p sum_i (nu,i)(i,theta) + f [theta = 0] (n(1,nu) + f),
    /// for every nu. Returns a description of each violation.
    pub fn low_order_identity_failures(&mut self) -> Result<Vec<String>> {
        self.extend_to(3)?;
        let ctx = self.ctx();
        let d = ctx.d();
        let theta = ctx.theta();
        let p = BigInt::from(ctx.p());
        let f = BigInt::from(ctx.f());
        let mut failures = Vec::new();
        for nu in 0..d {
            let lhs2 = self.scaled_count(2, nu);
            let rhs2 = &p * self.table.get(nu, theta);
            if lhs2 != rhs2 {
                failures.push(format!("k=2, nu={nu}: {lhs2} != {rhs2}"));
            }
            let paths: u64 = self
                .table
                .row(nu)
                .iter()
                .map(|&(i, c)| c as u64 * self.table.get(i, theta) as u64)
                .sum();
            let mut rhs3 = &p * paths;
            if theta == 0 {
                rhs3 += &f * self.scaled_count(1, nu);
            }
            let lhs3 = self.scaled_count(3, nu);
            if lhs3 != rhs3 {
                failures.push(format!("k=3, nu={nu}: {lhs3} != {rhs3}"));
            }
        }
        Ok(failures)
    }
}

/// s for the class `alpha` via the digraph on classes with i -> j iff
/// (i,j) != 0: s is one more than the length of a shortest walk from
/// alpha + theta to theta, which is the least s with entry
/// (alpha + theta, theta) of M^(s-1) nonzero.
pub fn s_by_reachability(table: &CyclotomyTable<'_>, alpha: usize) -> Result<usize> {
    let ctx = table.ctx();
    let d = ctx.d();
    if alpha >= d {
        return Err(Error::ClassOutOfRange { class: alpha, d });
    }
    if alpha == 0 {
        return Ok(1);
    }
    let theta = ctx.theta();
    let start = (alpha + theta) % d;
    let mut dist = vec![usize::MAX; d];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for &(j, _) in table.row(i) {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                if j == theta {
                    return Ok(dist[j] + 1);
                }
                queue.push_back(j);
            }
        }
    }
    Err(Error::Unreachable {
        from: start,
        to: theta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recurrence,
    Reachability,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WaringSolution {
    pub p: u64,
    pub d: usize,
    pub f: usize,
    pub theta: usize,
    pub omega: u64,
    /// s for each class alpha = ind(a) mod d.
    pub per_class_s: Vec<usize>,
    pub g: usize,
    pub method: Method,
}

impl WaringSolution {
    /// s_d(p, a) for a nonzero residue.
    pub fn s_of(&self, ctx: &FieldContext, a: u64) -> Result<usize> {
        Ok(self.per_class_s[ctx.class_of(a)?])
    }
}

pub fn solve(ctx: &FieldContext) -> Result<WaringSolution> {
    solve_table(&CyclotomyTable::compute(ctx))
}

/// Solves by recurrence and certifies every class against reachability.
/// A class where neither route finds s within d steps is handed to the
/// brute-force oracle and logged.
pub fn solve_table(table: &CyclotomyTable<'_>) -> Result<WaringSolution> {
    let ctx = table.ctx();
    let d = ctx.d();
    let mut seq = NSequence::new(table, 2.min(d))?;
    let by_recurrence = seq.s_all_by_recurrence()?;
    let mut per_class_s = Vec::with_capacity(d);
    let mut method = Method::Recurrence;
    let mut oracle_values: Option<Vec<usize>> = None;
    for (alpha, rec) in by_recurrence.into_iter().enumerate() {
        let reach = s_by_reachability(table, alpha);
        let s = match (rec, reach) {
            (Ok(r), Ok(m)) if r == m => r,
            (Ok(r), Ok(m)) => {
                return Err(Error::InternalDisagreement {
                    alpha,
                    recurrence: r,
                    reachability: m,
                })
            }
            (Err(e1), Err(e2)) => {
                warn!(
                    "p={} d={} class {alpha}: {e1}; {e2}; falling back to the oracle",
                    ctx.p(),
                    d
                );
                method = Method::Oracle;
                let values = match &oracle_values {
                    Some(v) => v,
                    None => oracle_values.insert(oracle::brute_s_by_class(ctx)?),
                };
                values[alpha]
            }
            (Ok(r), Err(_)) => {
                return Err(Error::InternalDisagreement {
                    alpha,
                    recurrence: r,
                    reachability: 0,
                })
            }
            (Err(_), Ok(m)) => {
                return Err(Error::InternalDisagreement {
                    alpha,
                    recurrence: 0,
                    reachability: m,
                })
            }
        };
        per_class_s.push(s);
    }
    let g = per_class_s.iter().copied().max().unwrap_or(1);
    Ok(WaringSolution {
        p: ctx.p(),
        d,
        f: ctx.f(),
        theta: ctx.theta(),
        omega: ctx.omega(),
        per_class_s,
        g,
        method,
    })
}

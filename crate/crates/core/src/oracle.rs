//! Brute-force ground truth over F_p.
//!
//! Nothing here touches cyclotomic numbers: counts come from repeated cyclic
//! convolution with the indicator of the d-th powers, and s from growing
//! sumsets. That independence is what makes these results usable as oracles
//! for the recurrence and reachability solvers.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffield::FieldContext;

/// Scale guards for the convolution table. The oracle is a test fixture,
/// not a production path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_p: u64,
    pub max_k: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_p: 2000,
            max_k: 16,
        }
    }
}

/// The f distinct nonzero d-th powers, ascending.
pub fn power_set(ctx: &FieldContext) -> Vec<u64> {
    let mut out: Vec<u64> = (0..ctx.f()).map(|k| ctx.power(k * ctx.d())).collect();
    out.sort_unstable();
    out
}

/// N(k, a) for 1 <= k <= k_max and every residue a (including 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    p: u64,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn k_max(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// N(k, a); `k` starts at 1.
    pub fn get(&self, k: usize, a: u64) -> &BigUint {
        &self.rows[k - 1][(a % self.p) as usize]
    }

    pub fn row(&self, k: usize) -> &[BigUint] {
        &self.rows[k - 1]
    }
}

pub fn dp_counts(ctx: &FieldContext, k_max: usize) -> Result<CountTable> {
    dp_counts_with(ctx, k_max, OracleLimits::default())
}

pub fn dp_counts_with(ctx: &FieldContext, k_max: usize, limits: OracleLimits) -> Result<CountTable> {
    let p = ctx.p();
    if p > limits.max_p {
        return Err(Error::ScaleGuard {
            what: "dp_counts",
            p,
            limit: limits.max_p,
        });
    }
    if k_max > limits.max_k {
        return Err(Error::ScaleGuard {
            what: "dp_counts k_max",
            p: k_max as u64,
            limit: limits.max_k as u64,
        });
    }
    let n = p as usize;
    let powers = power_set(ctx);
    let mut first = vec![BigUint::zero(); n];
    for &u in &powers {
        first[u as usize] = BigUint::one();
    }
    let mut rows = vec![first];
    for _ in 1..k_max.max(1) {
        let prev = rows.last().unwrap();
        let mut next = vec![BigUint::zero(); n];
        for (a, count) in prev.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for &u in &powers {
                next[(a + u as usize) % n] += count;
            }
        }
        rows.push(next);
    }
    Ok(CountTable { p, rows })
}

/// s_d(p, a) for every residue: entry a holds the least k with a in the
/// k-fold sumset of the d-th powers, or `None` if a never appears (entry 0
/// is included for completeness).
pub fn brute_s_all(ctx: &FieldContext) -> Vec<Option<usize>> {
    let n = ctx.p() as usize;
    let powers = power_set(ctx);
    let mut level: Vec<Option<usize>> = vec![None; n];
    let mut current = vec![false; n];
    for &u in &powers {
        current[u as usize] = true;
    }
    let mut k = 1;
    loop {
        for (a, &hit) in current.iter().enumerate() {
            if hit && level[a].is_none() {
                level[a] = Some(k);
            }
        }
        // Stop once every nonzero residue is covered or the sumset is stationary.
        let mut next = vec![false; n];
        for (a, _) in current.iter().enumerate().filter(|(_, &hit)| hit) {
            for &u in &powers {
                next[(a + u as usize) % n] = true;
            }
        }
        let covered = level.iter().skip(1).all(Option::is_some);
        if covered || next == current || k > n {
            break;
        }
        current = next;
        k += 1;
    }
    level
}

pub fn brute_s(ctx: &FieldContext, a: u64) -> Result<usize> {
    ctx.index_of(a)?;
    brute_s_all(ctx)[a as usize].ok_or(Error::Unrepresentable { a })
}

/// Brute-force s at the representative omega^c of each class c. Every
/// element of a class has the same s, so this is s for the class.
pub fn brute_s_by_class(ctx: &FieldContext) -> Result<Vec<usize>> {
    let all = brute_s_all(ctx);
    (0..ctx.d())
        .map(|c| {
            let a = ctx.representative(c);
            all[a as usize].ok_or(Error::Unrepresentable { a })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{divisors, is_prime};
    use num_traits::ToPrimitive;

    #[test]
    fn power_sets() {
        let ctx = FieldContext::new(7, 3).unwrap();
        assert_eq!(power_set(&ctx), vec![1, 6]);
        let ctx = FieldContext::new(5, 4).unwrap();
        assert_eq!(power_set(&ctx), vec![1]);
        let ctx = FieldContext::new(13, 2).unwrap();
        let squares: std::collections::BTreeSet<u64> = (1..=6u64).map(|x| x * x % 13).collect();
        assert_eq!(power_set(&ctx), squares.into_iter().collect::<Vec<_>>());
        assert_eq!(power_set(&ctx), vec![1, 3, 4, 9, 10, 12]);
    }

    #[test]
    fn dp_examples() {
        let ctx = FieldContext::new(7, 3).unwrap();
        let t = dp_counts(&ctx, 2).unwrap();
        assert_eq!(t.get(2, 2).to_u64(), Some(1));
        assert_eq!(t.get(2, 3).to_u64(), Some(0));

        let ctx = FieldContext::new(5, 4).unwrap();
        let t = dp_counts(&ctx, 3).unwrap();
        assert_eq!(t.get(3, 3).to_u64(), Some(1));
        assert_eq!(t.get(3, 4).to_u64(), Some(0));

        let ctx = FieldContext::new(13, 2).unwrap();
        let t = dp_counts(&ctx, 4).unwrap();
        let total: BigUint = t.row(4).iter().sum();
        assert_eq!(total, BigUint::from(1296u32));
    }

    #[test]
    fn dp_guards() {
        let ctx = FieldContext::new(2003, 2).unwrap();
        assert!(matches!(dp_counts(&ctx, 2), Err(Error::ScaleGuard { .. })));
        let ctx = FieldContext::new(7, 3).unwrap();
        assert!(matches!(dp_counts(&ctx, 17), Err(Error::ScaleGuard { .. })));
        let wide = OracleLimits { max_p: 5000, max_k: 20 };
        assert!(dp_counts_with(&ctx, 17, wide).is_ok());
    }

    #[test]
    fn brute_s_examples() {
        let ctx = FieldContext::new(7, 3).unwrap();
        assert_eq!(brute_s(&ctx, 3).unwrap(), 3);
        assert_eq!(brute_s(&ctx, 6).unwrap(), 1);
        let ctx = FieldContext::new(5, 4).unwrap();
        assert_eq!(brute_s(&ctx, 4).unwrap(), 4);
        assert_eq!(brute_s(&ctx, 0), Err(Error::ZeroArgument));
    }

    #[test]
    fn first_row_totals_and_support() {
        for p in (3..=150).filter(|&p| is_prime(p)) {
            for d in divisors(p - 1).into_iter().filter(|&d| d >= 2) {
                let ctx = FieldContext::new(p, d).unwrap();
                let f = BigUint::from(ctx.f());
                let t = dp_counts(&ctx, 5).unwrap();
                let ones = t.row(1).iter().filter(|c| c.is_one()).count();
                assert_eq!(ones, ctx.f());
                for k in 1..=5 {
                    let total: BigUint = t.row(k).iter().sum();
                    assert_eq!(total, f.pow(k as u32), "p={p} d={d} k={k}");
                }
                let s = brute_s_all(&ctx);
                for a in 1..p {
                    let first = (1..=5).find(|&k| !t.get(k, a).is_zero());
                    match (first, s[a as usize]) {
                        (Some(k), Some(sa)) => assert_eq!(k, sa, "p={p} d={d} a={a}"),
                        (None, Some(sa)) => assert!(sa > 5),
                        (_, None) => panic!("p={p} d={d} a={a} unrepresentable"),
                    }
                }
            }
        }
    }

    #[test]
    fn s_is_constant_on_classes() {
        for p in (3..=120).filter(|&p| is_prime(p)) {
            for d in divisors(p - 1).into_iter().filter(|&d| d >= 2) {
                let ctx = FieldContext::new(p, d).unwrap();
                let all = brute_s_all(&ctx);
                let by_class = brute_s_by_class(&ctx).unwrap();
                for a in 1..p {
                    assert_eq!(all[a as usize], Some(by_class[ctx.class_of(a).unwrap()]));
                }
            }
        }
    }
}

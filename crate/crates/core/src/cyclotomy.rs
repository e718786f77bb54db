//! Cyclotomic numbers (i,j) of order d and the 0/1 matrix M derived from them.

use std::fmt;

use serde::Serialize;

use crate::ffield::FieldContext;

/// Square 0/1 matrix with the boolean semiring product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn identity(n: usize) -> Self {
        let mut bits = vec![false; n * n];
        for i in 0..n {
            bits[i * n + i] = true;
        }
        Self { n, bits }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut bits = vec![false; n * n];
        for i in 0..n {
            for k in (0..n).filter(|&k| self.get(i, k)) {
                for j in 0..n {
                    bits[i * n + j] |= other.get(k, j);
                }
            }
        }
        BoolMatrix { n, bits }
    }

    pub fn pow(&self, mut e: usize) -> BoolMatrix {
        let mut acc = BoolMatrix::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// The d x d table of cyclotomic numbers for one (p, d).
#[derive(Debug, Clone)]
pub struct CyclotomyTable<'c> {
    ctx: &'c FieldContext,
    counts: Vec<u32>,
    /// Nonzero entries of each row as (column, count).
    rows: Vec<Vec<(usize, u32)>>,
}

impl<'c> CyclotomyTable<'c> {
    /// Counts every pair in one pass over t in F_p^*: t sits in class i and
    /// t + 1 in class j, so (i,j) is bumped. t = -1 is skipped since 1 + t = 0.
    pub fn compute(ctx: &'c FieldContext) -> Self {
        let d = ctx.d();
        let p = ctx.p();
        let mut counts = vec![0u32; d * d];
        for t in 1..p - 1 {
            let i = ctx.raw_index(t) % d;
            let j = ctx.raw_index(t + 1) % d;
            counts[i * d + j] += 1;
        }
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .filter_map(|j| {
                        let c = counts[i * d + j];
                        (c > 0).then_some((j, c))
                    })
                    .collect()
            })
            .collect();
        Self { ctx, counts, rows }
    }

    pub fn ctx(&self) -> &'c FieldContext {
        self.ctx
    }

    pub fn d(&self) -> usize {
        self.ctx.d()
    }

    /// The cyclotomic number (i, j); indices are taken mod d.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        let d = self.d();
        self.counts[(i % d) * d + (j % d)]
    }

    /// Nonzero entries of row i as (j, (i,j)).
    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.rows[i % self.d()]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        let d = self.d();
        self.counts.chunks(d).map(|r| r.to_vec()).collect()
    }

    /// m_ij = 1 iff (i,j) != 0.
    pub fn bool_matrix(&self) -> BoolMatrix {
        BoolMatrix {
            n: self.d(),
            bits: self.counts.iter().map(|&c| c > 0).collect(),
        }
    }

    pub fn verify_identities(&self) -> IdentityReport {
        let d = self.d();
        let f = self.ctx.f() as u64;
        let theta = self.ctx.theta();
        let mut checks = Vec::new();

        let bad_rows: Vec<String> = (0..d)
            .filter_map(|k| {
                let sum: u64 = self.counts[k * d..(k + 1) * d].iter().map(|&c| c as u64).sum();
                let want = f - u64::from(k == theta);
                (sum != want).then(|| format!("row {k} sums to {sum}, expected {want}"))
            })
            .collect();
        checks.push(IdentityCheck::from_failures("row sums", bad_rows));

        let total: u64 = self.counts.iter().map(|&c| c as u64).sum();
        let want = d as u64 * f - 1;
        checks.push(IdentityCheck::from_failures(
            "total count",
            (total != want)
                .then(|| format!("entries sum to {total}, expected {want}"))
                .into_iter()
                .collect(),
        ));

        if f % 2 == 0 {
            let mut asym = Vec::new();
            for i in 0..d {
                for j in i + 1..d {
                    if self.get(i, j) != self.get(j, i) {
                        asym.push(format!("({i},{j}) != ({j},{i})"));
                    }
                }
            }
            checks.push(IdentityCheck::from_failures("symmetry", asym));
        } else {
            checks.push(IdentityCheck {
                name: "symmetry",
                outcome: Outcome::Skipped,
            });
        }
        IdentityReport { checks }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "detail")]
pub enum Outcome {
    Passed,
    Failed(Vec<String>),
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub outcome: Outcome,
}

impl IdentityCheck {
    fn from_failures(name: &'static str, failures: Vec<String>) -> Self {
        let outcome = if failures.is_empty() {
            Outcome::Passed
        } else {
            Outcome::Failed(failures)
        };
        Self { name, outcome }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.outcome, Outcome::Failed(_)))
    }

    pub fn outcome(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.outcome {
                Outcome::Passed => writeln!(f, "{}: pass", c.name)?,
                Outcome::Skipped => writeln!(f, "{}: skipped", c.name)?,
                Outcome::Failed(why) => writeln!(f, "{}: FAIL ({})", c.name, why.join("; "))?,
            }
        }
        Ok(())
    }
}

//! Closed forms for d = 3 and d = 4.
//!
//! For d = 3 write 4p = L^2 + 27M^2 with L = 1 mod 3; for d = 4 write
//! p = x^2 + 4y^2 with x = 1 mod 4. The cyclotomic numbers of those orders
//! are linear in the representation, with the sign of M (resp. y) fixed by
//! the choice of generator. [`resolve_sign`] recovers that sign from a
//! counted table and checks every entry against the formulas.

use std::fmt;

use serde::Serialize;

use crate::cyclotomy::CyclotomyTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    /// 4p = L^2 + 27 M^2, L = 1 mod 3.
    Cubic,
    /// p = x^2 + 4 y^2, x = 1 mod 4.
    Quartic,
}

impl FormKind {
    pub fn order(self) -> usize {
        match self {
            FormKind::Cubic => 3,
            FormKind::Quartic => 4,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            FormKind::Cubic => "4p = L^2 + 27M^2",
            FormKind::Quartic => "p = x^2 + 4y^2",
        }
    }

    pub fn for_order(d: usize) -> Option<Self> {
        match d {
            3 => Some(FormKind::Cubic),
            4 => Some(FormKind::Quartic),
            _ => None,
        }
    }
}

/// (L, M) or (x, y). `first` carries its congruence normalization; the
/// sign of `second` is only meaningful after [`resolve_sign`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadFormRep {
    pub kind: FormKind,
    pub first: i64,
    pub second: i64,
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn check_residue(p: u64, modulus: u64) -> Result<()> {
    if p % modulus != 1 {
        return Err(Error::WrongResidueClass { p, modulus });
    }
    Ok(())
}

/// Exhaustive search for the normalized representation; `second` >= 0.
/// The search also confirms that the representation is unique.
pub fn represent(p: u64, kind: FormKind) -> Result<QuadFormRep> {
    let pi = p as i64;
    let (modulus, target, scale, bound) = match kind {
        FormKind::Cubic => (3, 4 * pi, 27, isqrt(4 * pi)),
        FormKind::Quartic => (4, pi, 4, isqrt(pi)),
    };
    check_residue(p, modulus as u64)?;
    let found: Vec<QuadFormRep> = (-bound..=bound)
        .filter(|first| first.rem_euclid(modulus) == 1)
        .filter_map(|first| {
            let rest = target - first * first;
            if rest < 0 || rest % scale != 0 {
                return None;
            }
            let second = isqrt(rest / scale);
            (second * second * scale == rest).then_some(QuadFormRep { kind, first, second })
        })
        .collect();
    match found.len() {
        0 => Err(Error::NoRepresentation {
            p,
            form: kind.describe(),
        }),
        1 => Ok(found[0]),
        count => Err(Error::AmbiguousRepresentation {
            p,
            form: kind.describe(),
            count,
        }),
    }
}

/// Cyclotomic numbers predicted by the representation, scaled by
/// `denominator`. Entries the formulas do not give are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaTable {
    pub d: usize,
    pub denominator: i64,
    pub scaled: Vec<Option<i64>>,
}

impl FormulaTable {
    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        self.scaled[i * self.d + j]
    }

    fn describe(&self, i: usize, j: usize) -> String {
        match self.get(i, j) {
            Some(v) => format!("{v}/{}", self.denominator),
            None => "unconstrained".to_string(),
        }
    }
}

/// Formula table for the given representation (sign of `second` as given)
/// and cofactor f = (p-1)/d.
pub fn formula_table(rep: &QuadFormRep, p: u64, f: usize) -> FormulaTable {
    let p = p as i64;
    let (a, b) = (rep.first, rep.second);
    match rep.kind {
        FormKind::Cubic => {
            let mut t = vec![None; 9];
            let c01 = 2 * p - 4 - a + 9 * b;
            let c02 = 2 * p - 4 - a - 9 * b;
            t[1] = Some(c01);
            t[2] = Some(c02);
            // f is even here, so the table is symmetric and row 0 sums to f - 1
            t[3] = Some(c01);
            t[6] = Some(c02);
            t[0] = Some(18 * (f as i64 - 1) - c01 - c02);
            FormulaTable {
                d: 3,
                denominator: 18,
                scaled: t,
            }
        }
        FormKind::Quartic => {
            let mut t = [0i64; 16];
            let mut set = |i: usize, j: usize, v: i64| t[i * 4 + j] = v;
            if f % 2 == 0 {
                let c00 = p - 11 - 6 * a;
                let c01 = p - 3 + 2 * a + 8 * b;
                let c02 = p - 3 + 2 * a;
                let c03 = p - 3 + 2 * a - 8 * b;
                let c12 = p + 1 - 2 * a;
                let upper = [
                    (0, 0, c00),
                    (0, 1, c01),
                    (0, 2, c02),
                    (0, 3, c03),
                    (1, 1, c03),
                    (1, 2, c12),
                    (1, 3, c12),
                    (2, 2, c02),
                    (2, 3, c12),
                    (3, 3, c01),
                ];
                for (i, j, v) in upper {
                    set(i, j, v);
                    set(j, i, v);
                }
            } else {
                let c00 = p - 7 + 2 * a;
                let c01 = p + 1 + 2 * a - 8 * b;
                let c02 = p + 1 - 6 * a;
                let c03 = p + 1 + 2 * a + 8 * b;
                let c10 = p - 3 - 2 * a;
                for (i, j) in [(0, 0), (2, 0), (2, 2)] {
                    set(i, j, c00);
                }
                for (i, j) in [(0, 1), (1, 3), (3, 2)] {
                    set(i, j, c01);
                }
                set(0, 2, c02);
                for (i, j) in [(0, 3), (1, 2), (3, 1)] {
                    set(i, j, c03);
                }
                for (i, j) in [(1, 0), (1, 1), (2, 1), (2, 3), (3, 0), (3, 3)] {
                    set(i, j, c10);
                }
            }
            FormulaTable {
                d: 4,
                denominator: 16,
                scaled: t.iter().map(|&v| Some(v)).collect(),
            }
        }
    }
}

/// First disagreement between a counted table and the formulas, if any.
/// Entries without a formula must still satisfy symmetry and the row sums.
fn first_mismatch(table: &CyclotomyTable<'_>, formulas: &FormulaTable) -> Option<Error> {
    let d = formulas.d;
    let ctx = table.ctx();
    for i in 0..d {
        for j in 0..d {
            let counted = table.get(i, j) as i64;
            let ok = match formulas.get(i, j) {
                Some(v) => v == formulas.denominator * counted,
                None => counted == table.get(j, i) as i64,
            };
            if !ok {
                return Some(Error::FormulaMismatch {
                    i,
                    j,
                    counted,
                    formula: formulas.describe(i, j),
                });
            }
        }
        let row: i64 = (0..d).map(|j| table.get(i, j) as i64).sum();
        let want = ctx.f() as i64 - i64::from(i == ctx.theta());
        if row != want {
            return Some(Error::FormulaMismatch {
                i,
                j: d,
                counted: row,
                formula: format!("row sum {want}"),
            });
        }
    }
    None
}

/// Fixes the sign of `second` so that the formula table reproduces the
/// counted table, and checks all d^2 entries under that sign.
pub fn resolve_sign(rep: &QuadFormRep, table: &CyclotomyTable<'_>) -> Result<QuadFormRep> {
    let ctx = table.ctx();
    if ctx.d() != rep.kind.order() {
        return Err(Error::InvalidOrder(ctx.d() as u64));
    }
    let mut first_error = None;
    for sign in [1, -1] {
        let candidate = QuadFormRep {
            second: sign * rep.second.abs(),
            ..*rep
        };
        let formulas = formula_table(&candidate, ctx.p(), ctx.f());
        match first_mismatch(table, &formulas) {
            None => return Ok(candidate),
            Some(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    Err(first_error.expect("both signs were tried"))
}

/// g_3(p): 3 for p = 7, else 2.
pub fn g3_closed(p: u64) -> Result<usize> {
    check_residue(p, 3)?;
    Ok(if p == 7 { 3 } else { 2 })
}

/// g_4(p): 4 for p = 5, 3 for p in {13, 17, 29}, else 2.
pub fn g4_closed(p: u64) -> Result<usize> {
    check_residue(p, 4)?;
    Ok(match p {
        5 => 4,
        13 | 17 | 29 => 3,
        _ => 2,
    })
}

pub fn g_closed(p: u64, d: usize) -> Option<Result<usize>> {
    match d {
        3 => Some(g3_closed(p)),
        4 => Some(g4_closed(p)),
        _ => None,
    }
}

/// One of the six quartic equations whose solutions force s_4(p, a) > 2
/// for the class alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessTag {
    pub f_even: bool,
    pub alpha: usize,
}

impl WitnessTag {
    pub fn equation(&self) -> &'static str {
        match (self.f_even, self.alpha) {
            (true, 1) => "x^2+4y^2+2x+8y=3",
            (true, 2) => "x^2+4y^2+2x=3",
            (true, 3) => "x^2+4y^2+2x-8y=3",
            (false, 1) => "x^2+4y^2+2x-8y=-1",
            (false, 2) => "x^2+4y^2-6x=-1",
            (false, 3) => "x^2+4y^2+2x+8y=-1",
            _ => unreachable!("alpha is 1, 2 or 3"),
        }
    }
}

impl fmt::Display for WitnessTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parity = if self.f_even { "f-even" } else { "f-odd" };
        write!(f, "{parity}/alpha={}: {}", self.alpha, self.equation())
    }
}

/// Whether the sign-resolved quartic representation satisfies the
/// equation for class `alpha` (1..=3) in the given f parity. A match is
/// the same as (alpha + theta, theta) = 0, i.e. s_4(p, omega^alpha) > 2.
pub fn diophantine_witness(rep: &QuadFormRep, f_even: bool, alpha: usize) -> Option<WitnessTag> {
    if rep.kind != FormKind::Quartic || !(1..=3).contains(&alpha) {
        return None;
    }
    let (x, y) = (rep.first, rep.second);
    let base = x * x + 4 * y * y;
    let holds = match (f_even, alpha) {
        (true, 1) => base + 2 * x + 8 * y == 3,
        (true, 2) => base + 2 * x == 3,
        (true, 3) => base + 2 * x - 8 * y == 3,
        (false, 1) => base + 2 * x - 8 * y == -1,
        (false, 2) => base - 6 * x == -1,
        (false, 3) => base + 2 * x + 8 * y == -1,
        _ => unreachable!(),
    };
    holds.then_some(WitnessTag { f_even, alpha })
}

pub fn witnesses(rep: &QuadFormRep, f_even: bool) -> Vec<WitnessTag> {
    (1..=3)
        .filter_map(|alpha| diophantine_witness(rep, f_even, alpha))
        .collect()
}

/// Everything the closed-form route says about one (p, d) with d in {3, 4}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormReport {
    pub g: usize,
    pub representation: QuadFormRep,
    pub witnesses: Vec<WitnessTag>,
}

pub fn closed_form(table: &CyclotomyTable<'_>) -> Result<Option<ClosedFormReport>> {
    let ctx = table.ctx();
    let Some(kind) = FormKind::for_order(ctx.d()) else {
        return Ok(None);
    };
    let rep = resolve_sign(&represent(ctx.p(), kind)?, table)?;
    let g = match kind {
        FormKind::Cubic => g3_closed(ctx.p())?,
        FormKind::Quartic => g4_closed(ctx.p())?,
    };
    Ok(Some(ClosedFormReport {
        g,
        representation: rep,
        witnesses: witnesses(&rep, ctx.f() % 2 == 0),
    }))
}

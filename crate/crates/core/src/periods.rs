//! The period polynomial G(T) = prod (T - eta_i) and its discriminant.
//!
//! Coefficients come from the power sums P_m = sum_i eta_i^m = n(m-1, 0)
//! through Newton's identities, so everything stays in Z. Floating-point
//! Gauss periods are provided only as a validation oracle.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ffield::FieldContext;
use crate::waring::NSequence;

/// Largest p for which [`numeric_periods`] will run.
pub const NUMERIC_MAX_P: u64 = 10_000;

/// P_0 = d, then P_m = n(m-1, 0) for 1 <= m <= m_max.
pub fn power_sums(seq: &NSequence<'_>, m_max: usize) -> Result<Vec<BigInt>> {
    let need = m_max.saturating_sub(1);
    if seq.k_max() < need {
        return Err(Error::SequenceTooShort {
            have: seq.k_max(),
            need,
        });
    }
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(BigInt::from(seq.ctx().d()));
    out.extend((1..=m_max).map(|m| seq.n(m - 1, 0).clone()));
    Ok(out)
}

/// Elementary symmetric functions e_0..e_n of the roots whose power sums
/// are `sums[1..=n]` (`sums[0]` is ignored).
pub fn elementary_from_power_sums(sums: &[BigInt]) -> Result<Vec<BigInt>> {
    let n = sums.len() - 1;
    let mut e = vec![BigInt::one()];
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=m {
            let term = &e[m - i] * &sums[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(m));
        if !r.is_zero() {
            return Err(Error::IntegralityFailure(m));
        }
        e.push(q);
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPolynomial {
    /// Coefficients of G(T), constant term first; the last two are 1.
    pub coeffs: Vec<BigInt>,
    pub discriminant: BigInt,
}

impl PeriodPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of T^d G(1/T), constant term first.
    pub fn reversed(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }
}

pub fn period_polynomial(seq: &NSequence<'_>) -> Result<PeriodPolynomial> {
    let d = seq.ctx().d();
    let sums = power_sums(seq, d)?;
    let e = elementary_from_power_sums(&sums)?;
    // coefficient of T^(d-k) is (-1)^k e_k
    let coeffs: Vec<BigInt> = (0..=d)
        .map(|j| {
            let k = d - j;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                -&e[k]
            }
        })
        .collect();
    let discriminant = discriminant(&coeffs);
    Ok(PeriodPolynomial {
        coeffs,
        discriminant,
    })
}

/// Discriminant of an integer polynomial (constant term first) of degree
/// at least 1: (-1)^(n(n-1)/2) Res(F, F') / lc(F).
pub fn discriminant(coeffs: &[BigInt]) -> BigInt {
    let f = trim(coeffs.to_vec());
    let n = f.len() - 1;
    let deriv: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
    let res = resultant(&f, &deriv);
    let lc = f.last().unwrap();
    let (q, r) = res.div_rem(lc);
    debug_assert!(r.is_zero());
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn degree(v: &[BigInt]) -> usize {
    v.len() - 1
}

fn is_zero_poly(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) a mod b.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b);
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = degree(a) + 1 - db;
    while !is_zero_poly(&r) && r.len() > db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * c;
        }
        r = trim(r);
        e -= 1;
    }
    let scale = lb.pow(e as u32);
    r.into_iter().map(|c| c * &scale).collect()
}

/// Resultant of two integer polynomials (constant term first) by the
/// subresultant remainder sequence.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if is_zero_poly(&a) || is_zero_poly(&b) {
        return BigInt::zero();
    }
    if degree(&b) == 0 {
        return b[0].pow(degree(&a) as u32);
    }
    if degree(&a) == 0 {
        return a[0].pow(degree(&b) as u32);
    }
    let ca = content(&a).abs();
    let cb = content(&b).abs();
    let t = ca.pow(degree(&b) as u32) * cb.pow(degree(&a) as u32);
    a = a.into_iter().map(|c| c / &ca).collect();
    b = b.into_iter().map(|c| c / &cb).collect();

    let mut sign = 1i32;
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
        if degree(&a) % 2 == 1 && degree(&b) % 2 == 1 {
            sign = -1;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (degree(&a), degree(&b));
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = trim(pseudo_rem(&a, &b));
        a = b;
        if is_zero_poly(&r) {
            return BigInt::zero();
        }
        let divisor = &g * h.pow(delta);
        b = r.into_iter().map(|c| c / &divisor).collect();
        g = a[degree(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta) / h.pow(delta - 1)
        };
        if degree(&b) == 0 {
            let da = degree(&a) as u32;
            let h_final = b[0].pow(da) / h.pow(da - 1);
            let out = t * h_final;
            return if sign < 0 { -out } else { out };
        }
    }
}

fn to_f64(c: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// eta_i = sum_k exp(2 pi i omega^(dk+i) / p) for 0 <= i < d, in double
/// precision with compensated summation. Approximate; for validation only.
pub fn numeric_periods(ctx: &FieldContext) -> Result<Vec<Complex64>> {
    let p = ctx.p();
    if p > NUMERIC_MAX_P {
        return Err(Error::ScaleGuard {
            what: "numeric_periods",
            p,
            limit: NUMERIC_MAX_P,
        });
    }
    let (d, f) = (ctx.d(), ctx.f());
    Ok((0..d)
        .map(|i| {
            let (mut re, mut im) = (Kahan::default(), Kahan::default());
            for k in 0..f {
                let angle = 2.0 * PI * ctx.power(d * k + i) as f64 / p as f64;
                re.add(angle.cos());
                im.add(angle.sin());
            }
            Complex64::new(re.sum, im.sum)
        })
        .collect())
}

/// Absolute tolerance used when comparing numeric periods with exact values.
pub fn numeric_tolerance(p: u64) -> f64 {
    if p <= 100 {
        1e-8
    } else {
        1e-6
    }
}

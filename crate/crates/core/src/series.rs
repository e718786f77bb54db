//! Truncated power series over Q built from the cyclotomic integers.
//!
//! I_j(T) = sum c_k T^k is defined by c_0 = 1 and
//! c_k = -(1/k) sum_{l<k} c_l n(k-1-l, j), which makes
//! -I_j'/I_j = sum_k n(k, j) T^k. Hence the coefficient of T^k in
//! 1/(1 - fT) - I_j'/I_j is f^k + n(k, j) = p N(k, a) for any a with
//! ind(-a) = j mod d, and its valuation is s_d(p, a).
//!
//! All arithmetic is exact; zero tests on coefficients must be exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::periods::PeriodPolynomial;
use crate::waring::NSequence;

/// Coefficients c_0..c_K of a power series truncated after T^K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least c_0");
        Self { coeffs }
    }

    /// 1/(1 - aT) to the given order.
    pub fn geometric(a: &BigInt, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut x = BigInt::one();
        for _ in 0..=order {
            coeffs.push(BigRational::from_integer(x.clone()));
            x *= a;
        }
        Self { coeffs }
    }

    /// Highest power of T kept.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient, if any within the order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self {
                coeffs: vec![BigRational::zero()],
            };
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        }
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .map(|i| &self.coeffs[i] * &other.coeffs[k - i])
                    .sum()
            })
            .collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    /// Multiplicative inverse; `None` if c_0 = 0.
    pub fn inverse(&self) -> Option<Self> {
        if self.coeffs[0].is_zero() {
            return None;
        }
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<BigRational> = vec![inv0.clone()];
        for k in 1..=self.order() {
            let acc: BigRational = (1..=k)
                .filter(|&i| !self.coeffs[i].is_zero())
                .map(|i| &self.coeffs[i] * &out[k - i])
                .sum();
            out.push(-acc * &inv0);
        }
        Some(Self { coeffs: out })
    }

    /// Whether k! c_k is an integer for every kept k.
    pub fn factorial_scaled_integral(&self) -> bool {
        let mut factorial = BigInt::one();
        self.coeffs.iter().enumerate().all(|(k, c)| {
            if k > 0 {
                factorial *= k;
            }
            (&factorial * c.numer()).is_multiple_of(c.denom())
        })
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})T^{k}")?;
        }
        write!(f, " + O(T^{})", self.order() + 1)
    }
}

fn check_class(seq: &NSequence<'_>, j: usize) -> Result<()> {
    let d = seq.ctx().d();
    if j >= d {
        return Err(Error::ClassOutOfRange { class: j, d });
    }
    Ok(())
}

/// Next coefficient of I_j given c_0..c_{k-1}; needs n(k-1, j).
fn next_coefficient(seq: &NSequence<'_>, j: usize, prev: &[BigRational]) -> BigRational {
    let k = prev.len();
    let acc: BigRational = prev
        .iter()
        .enumerate()
        .map(|(l, c)| c * BigRational::from_integer(seq.n(k - 1 - l, j).clone()))
        .sum();
    -acc / BigRational::from_integer(BigInt::from(k))
}

/// I_j(T) to the given order. Needs n(k, j) for k < order.
pub fn i_series(seq: &NSequence<'_>, j: usize, order: usize) -> Result<RationalSeries> {
    check_class(seq, j)?;
    let need = order.saturating_sub(1);
    if seq.k_max() < need {
        return Err(Error::SequenceTooShort {
            have: seq.k_max(),
            need,
        });
    }
    let mut coeffs = vec![BigRational::one()];
    for _ in 1..=order {
        let c = next_coefficient(seq, j, &coeffs);
        coeffs.push(c);
    }
    Ok(RationalSeries { coeffs })
}

/// 1/(1 - fT) - I_j'(T)/I_j(T) to the given order, via the inverse of I_j.
pub fn log_derivative_series(seq: &mut NSequence<'_>, j: usize, order: usize) -> Result<RationalSeries> {
    seq.extend_to(order)?;
    let series = i_series(seq, j, order + 1)?;
    let inv = series.inverse().expect("c_0 = 1");
    let ratio = series.derivative().mul(&inv.truncate(order));
    let f = BigInt::from(seq.ctx().f());
    Ok(RationalSeries::geometric(&f, order).sub(&ratio))
}

/// Valuation of 1/(1 - fT) - I_j'/I_j, which equals s_d(p, a) for the
/// classes a with ind(-a) = j mod d.
///
/// Coefficients are produced one at a time by exact series division and the
/// search stops at the first nonzero one. The search runs to order d + 2,
/// then to 2d, and fails past that.
pub fn log_derivative_ord(seq: &mut NSequence<'_>, j: usize) -> Result<usize> {
    check_class(seq, j)?;
    let d = seq.ctx().d();
    let f = BigInt::from(seq.ctx().f());
    let max_order = (2 * d).max(d + 2);

    let mut c = vec![BigRational::one()];
    // q = I'/I, from I q = I' with c_0 = 1
    let mut q: Vec<BigRational> = Vec::new();
    let mut f_power = BigInt::one();
    for k in 0..=max_order {
        if k > seq.k_max() {
            seq.extend_to(k)?;
        }
        let next = next_coefficient(seq, j, &c);
        c.push(next);
        let mut qk = &c[k + 1] * BigRational::from_integer(BigInt::from(k + 1));
        for i in 1..=k {
            if !c[i].is_zero() {
                qk -= &c[i] * &q[k - i];
            }
        }
        let h = BigRational::from_integer(f_power.clone()) - &qk;
        if !h.is_zero() {
            return Ok(k);
        }
        q.push(qk);
        f_power *= &f;
    }
    Err(Error::AllZeroToOrder { j, order: max_order })
}

/// Whether `series` (taken as I_0) equals T^d G(1/T) through T^d and
/// vanishes beyond, up to its order.
pub fn reciprocal_check(series: &RationalSeries, poly: &PeriodPolynomial) -> bool {
    let reversed = poly.reversed();
    series.coeffs.iter().enumerate().all(|(k, c)| match reversed.get(k) {
        Some(r) => c.is_integer() && c.numer() == r,
        None => c.is_zero(),
    })
}

//! Arithmetic in F_p, primitive roots and the index (discrete log) table.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default upper bound on p. Every downstream algorithm is linear in p, so
/// the index table is the dominant allocation.
pub const DEFAULT_MAX_P: u64 = 1 << 22;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality by trial division; fine for the supported range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut q = 5u64;
    while q * q <= n {
        if n % q == 0 || n % (q + 2) == 0 {
            return false;
        }
        q += 6;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut q = 1u64;
    while q * q <= n {
        if n % q == 0 {
            small.push(q);
            if q * q != n {
                large.push(n / q);
            }
        }
        q += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Smallest positive primitive root of the odd prime `p`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("F_p^* is cyclic")
}

/// Everything about (p, d) that the rest of the crate needs: the generator,
/// both directions of the index map, and the cofactor f and class theta of -1.
///
/// Immutable once built; share it freely between threads.
#[derive(Debug, Clone)]
pub struct FieldContext {
    p: u64,
    omega: u64,
    d: usize,
    f: usize,
    theta: usize,
    /// `index[a]` = ind_omega(a) for 1 <= a < p; slot 0 is unused.
    index: Vec<u32>,
    /// `powers[k]` = omega^k mod p for 0 <= k < p-1.
    powers: Vec<u32>,
}

impl FieldContext {
    /// Context for the prime `p` and order `d`, with the default size guard.
    ///
    /// An order that does not divide p-1 is replaced by gcd(d, p-1), which
    /// yields the same set of d-th powers.
    pub fn new(p: u64, d: u64) -> Result<Self> {
        Self::with_limit(p, d, DEFAULT_MAX_P)
    }

    pub fn with_limit(p: u64, d: u64, max_p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > max_p {
            return Err(Error::PrimeTooLarge { p, limit: max_p });
        }
        if d < 2 {
            return Err(Error::InvalidOrder(d));
        }
        let reduced = d.gcd(&(p - 1));
        if reduced == 1 {
            return Err(Error::DegenerateOrder { p, d });
        }

        let omega = smallest_primitive_root(p);
        let n = (p - 1) as usize;
        let mut index = vec![0u32; p as usize];
        let mut powers = Vec::with_capacity(n);
        let mut x = 1u64;
        for k in 0..n {
            powers.push(x as u32);
            index[x as usize] = k as u32;
            x = mul_mod(x, omega, p);
        }
        debug_assert_eq!(x, 1);

        let d = reduced as usize;
        let f = n / d;
        let theta = if f % 2 == 0 { 0 } else { d / 2 };
        Ok(Self {
            p,
            omega,
            d,
            f,
            theta,
            index,
            powers,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn f(&self) -> usize {
        self.f
    }

    /// Class of -1 modulo d.
    pub fn theta(&self) -> usize {
        self.theta
    }

    /// ind_omega(a), in 0..p-1.
    pub fn index_of(&self, a: u64) -> Result<usize> {
        let a = self.check_residue(a)?;
        Ok(self.index[a as usize] as usize)
    }

    /// ind_omega(a) mod d.
    pub fn class_of(&self, a: u64) -> Result<usize> {
        Ok(self.index_of(a)? % self.d)
    }

    /// omega^k mod p, for any k.
    pub fn power(&self, k: usize) -> u64 {
        self.powers[k % self.powers.len()] as u64
    }

    /// The smallest positive residue in class `class`, used when a CLI user
    /// asks about a class rather than an element.
    pub fn representative(&self, class: usize) -> u64 {
        self.power(class % self.d)
    }

    pub fn is_dth_power(&self, a: u64) -> Result<bool> {
        Ok(self.class_of(a)? == 0)
    }

    /// Index of a nonzero residue, without range checks. `a` must lie in 1..p.
    pub(crate) fn raw_index(&self, a: u64) -> usize {
        self.index[a as usize] as usize
    }

    fn check_residue(&self, a: u64) -> Result<u64> {
        let r = a % self.p;
        if r == 0 {
            return Err(Error::ZeroArgument);
        }
        if a >= self.p {
            return Err(Error::ResidueOutOfRange { a, p: self.p - 1 });
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn generates(g: u64, p: u64) -> bool {
        let mut seen = vec![false; p as usize];
        let mut x = 1;
        for _ in 0..p - 1 {
            if seen[x as usize] {
                return false;
            }
            seen[x as usize] = true;
            x = x * g % p;
        }
        true
    }

    #[test]
    fn context_p7_d3() {
        let ctx = FieldContext::new(7, 3).unwrap();
        assert_eq!(ctx.omega(), 3);
        assert!(generates(3, 7));
        assert_eq!((ctx.f(), ctx.theta()), (2, 0));
    }

    #[test]
    fn context_p5_d4() {
        let ctx = FieldContext::new(5, 4).unwrap();
        assert_eq!(ctx.omega(), 2);
        assert!(generates(2, 5));
        assert_eq!((ctx.f(), ctx.theta()), (1, 2));
    }

    #[test]
    fn context_full_order() {
        let ctx = FieldContext::new(13, 12).unwrap();
        assert_eq!((ctx.d(), ctx.f(), ctx.theta()), (12, 1, 6));
    }

    #[test]
    fn order_reduced_to_gcd() {
        let ctx = FieldContext::new(13, 8).unwrap();
        assert_eq!(ctx.d(), 4);
        assert_eq!(
            FieldContext::new(13, 5).unwrap_err(),
            Error::DegenerateOrder { p: 13, d: 5 }
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldContext::new(9, 2).unwrap_err(), Error::NotPrime(9));
        assert_eq!(FieldContext::new(2, 2).unwrap_err(), Error::NotPrime(2));
        assert_eq!(FieldContext::new(7, 1).unwrap_err(), Error::InvalidOrder(1));
        assert!(matches!(
            FieldContext::with_limit(101, 2, 100),
            Err(Error::PrimeTooLarge { .. })
        ));
    }

    #[test]
    fn index_examples() {
        let ctx = FieldContext::new(7, 3).unwrap();
        assert_eq!(ctx.index_of(1).unwrap(), 0);
        assert_eq!(ctx.index_of(3).unwrap(), 1);
        assert_eq!(pow_mod(3, 3, 7), 6);
        assert_eq!(ctx.index_of(6).unwrap(), 3);
        assert_eq!(ctx.index_of(0), Err(Error::ZeroArgument));
        assert_eq!(ctx.index_of(14), Err(Error::ZeroArgument));
        assert!(ctx.index_of(8).is_err());
    }

    #[test]
    fn primality_matches_naive() {
        for n in 0..2000u64 {
            let naive = n >= 2 && (2..n).all(|q| n % q != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
    }

    #[test]
    fn divisors_of_60() {
        assert_eq!(divisors(60), vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
    }

    fn prime_and_order() -> impl Strategy<Value = (u64, u64)> {
        (3u64..600)
            .prop_filter("prime", |&p| is_prime(p))
            .prop_flat_map(|p| {
                let ds: Vec<u64> = divisors(p - 1).into_iter().filter(|&d| d >= 2).collect();
                (Just(p), proptest::sample::select(ds))
            })
    }

    proptest! {
        #[test]
        fn index_table_is_a_bijection((p, d) in prime_and_order()) {
            let ctx = FieldContext::new(p, d).unwrap();
            prop_assert!(generates(ctx.omega(), p));
            prop_assert_eq!(ctx.d() * ctx.f(), (p - 1) as usize);
            for k in 0..(p - 1) as usize {
                prop_assert_eq!(ctx.index_of(ctx.power(k)).unwrap(), k);
            }
        }

        #[test]
        fn index_is_a_homomorphism((p, d) in prime_and_order(), a in 1u64..600, b in 1u64..600) {
            let ctx = FieldContext::new(p, d).unwrap();
            let (a, b) = (a % (p - 1) + 1, b % (p - 1) + 1);
            let lhs = ctx.index_of(a * b % p).unwrap();
            let rhs = (ctx.index_of(a).unwrap() + ctx.index_of(b).unwrap()) % (p - 1) as usize;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn theta_and_power_classes((p, d) in prime_and_order()) {
            let ctx = FieldContext::new(p, d).unwrap();
            prop_assert_eq!(ctx.class_of(p - 1).unwrap(), ctx.theta());
            let powers = (1..p).filter(|&a| ctx.is_dth_power(a).unwrap()).count();
            prop_assert_eq!(powers, ctx.f());
            let direct: std::collections::BTreeSet<u64> = (1..p).map(|x| pow_mod(x, d, p)).collect();
            prop_assert_eq!(direct.len(), ctx.f());
            prop_assert!(direct.iter().all(|&a| ctx.is_dth_power(a).unwrap()));
        }
    }
}

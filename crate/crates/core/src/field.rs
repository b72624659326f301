//! Exact arithmetic in `F_p` for odd primes: reduction of rationals mod `p`,
//! the Legendre character, inverses.
//!
//! All moduli fit in a machine word; intermediate products go through `u128`.
//! The trace-counting hot loop does not use these pointwise routines — it
//! builds a per-prime character table instead (see [`crate::curves`]).

use crate::{Error, Result};
use num_rational::Rational64;

/// An odd prime modulus with its elementwise operations.
///
/// This is a context object: elements are plain `u64` values in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Creates the field context, rejecting `p < 3`, even `p`, and composites.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { self.p - b + a }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.p - a }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; errors on zero.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Canonical representative of a signed integer.
    #[inline]
    pub fn reduce_int(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Reduces a rational mod `p`: `num * den^{-1}`.
    ///
    /// Errors with `DenominatorVanishes` when `p` divides the denominator of
    /// the fraction in lowest terms.
    pub fn reduce_rational(&self, q: Rational64) -> Result<u64> {
        let den = self.reduce_int(*q.denom());
        if den == 0 {
            return Err(Error::DenominatorVanishes { p: self.p });
        }
        let num = self.reduce_int(*q.numer());
        Ok(self.mul(num, self.inv(den)?))
    }

    /// Legendre character by Euler's criterion: `a^{(p-1)/2}`.
    ///
    /// Returns `0` iff `p | a`, `1` for nonzero squares, `-1` otherwise.
    pub fn legendre(&self, a: i64) -> i32 {
        let a = self.reduce_int(a);
        if a == 0 {
            return 0;
        }
        let e = self.pow(a, (self.p - 1) / 2);
        if e == 1 { 1 } else { -1 }
    }
}

/// An element of `F_p` that carries its modulus.
///
/// Convenience wrapper over [`Fp`] for API boundaries (curve coefficients,
/// reduced parameters); numeric kernels work with raw `u64`s and a shared
/// context instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn new(value: i64, field: Fp) -> Self {
        FieldElement { value: field.reduce_int(value), p: field.modulus() }
    }

    pub fn from_rational(q: Rational64, field: Fp) -> Result<Self> {
        Ok(FieldElement { value: field.reduce_rational(q)?, p: field.modulus() })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn field(&self) -> Fp {
        Fp { p: self.p }
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        Ok(FieldElement { value: self.field().inv(self.value)?, p: self.p })
    }

    pub fn legendre(&self) -> i32 {
        self.field().legendre(self.value as i64)
    }
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    // These witnesses decide primality for every n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % n as u128) as u64;
        }
        a = ((a as u128 * a as u128) % n as u128) as u64;
        e >>= 1;
    }
    acc
}

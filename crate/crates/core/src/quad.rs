//! Exact arithmetic in Q[α] where `α² = a·α − p`, so that α and
//! `ᾱ = a − α` are the Frobenius eigenvalues (`α + ᾱ = a`, `α·ᾱ = p`).
//!
//! Results of eigenvalue formulas live here until the final
//! [`QuadElement::to_rational`] call, which certifies that the α-part
//! vanished exactly instead of comparing floats against an epsilon.

use crate::{Error, Result};
use alloc::format;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `x + y·α` with exact rational coordinates in the context `α² = a·α − p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElement {
    x: BigRational,
    y: BigRational,
    a: i64,
    p: u64,
}

impl QuadElement {
    pub fn new(x: BigRational, y: BigRational, a: i64, p: u64) -> Self {
        QuadElement { x, y, a, p }
    }

    pub fn from_rational(x: BigRational, a: i64, p: u64) -> Self {
        QuadElement { x, y: BigRational::zero(), a, p }
    }

    pub fn zero(a: i64, p: u64) -> Self {
        Self::from_rational(BigRational::zero(), a, p)
    }

    pub fn one(a: i64, p: u64) -> Self {
        Self::from_rational(BigRational::one(), a, p)
    }

    /// The eigenvalue α itself.
    pub fn alpha(a: i64, p: u64) -> Self {
        QuadElement { x: BigRational::zero(), y: BigRational::one(), a, p }
    }

    /// The conjugate eigenvalue `ᾱ = a − α`.
    pub fn alpha_bar(a: i64, p: u64) -> Self {
        Self::alpha(a, p).conj()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.x
    }

    pub fn alpha_part(&self) -> &BigRational {
        &self.y
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.a != other.a || self.p != other.p {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Conjugation: `x + y·α ↦ (x + y·a) − y·α`.
    pub fn conj(&self) -> Self {
        QuadElement {
            x: &self.x + &self.y * BigRational::from_integer(BigInt::from(self.a)),
            y: -self.y.clone(),
            a: self.a,
            p: self.p,
        }
    }

    /// Norm `(x + yα)(x + yᾱ) = x² + a·xy + p·y²`, a rational.
    pub fn norm(&self) -> BigRational {
        let a = BigRational::from_integer(BigInt::from(self.a));
        let p = BigRational::from_integer(BigInt::from(self.p));
        &self.x * &self.x + a * &self.x * &self.y + p * &self.y * &self.y
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(QuadElement {
            x: &self.x + &other.x,
            y: &self.y + &other.y,
            a: self.a,
            p: self.p,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        Ok(QuadElement {
            x: &self.x - &other.x,
            y: &self.y - &other.y,
            a: self.a,
            p: self.p,
        })
    }

    /// Product with the reduction `α² → a·α − p`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        let a = BigRational::from_integer(BigInt::from(self.a));
        let p = BigRational::from_integer(BigInt::from(self.p));
        let cross = &self.x * &other.y + &self.y * &other.x;
        let yy = &self.y * &other.y;
        Ok(QuadElement {
            x: &self.x * &other.x - p * &yy,
            y: cross + a * &yy,
            a: self.a,
            p: self.p,
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QuadElement { x: &self.x * c, y: &self.y * c, a: self.a, p: self.p }
    }

    pub fn neg(&self) -> Self {
        QuadElement { x: -self.x.clone(), y: -self.y.clone(), a: self.a, p: self.p }
    }

    /// Inverse `conj / norm`; fails on norm zero.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(self.conj().scale(&n.recip()))
    }

    /// Exact integer power; negative exponents go through the inverse,
    /// e.g. `α^{−1} = (a − α)/p`.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.a, self.p);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            sq = sq.mul(&sq)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Certifies the α-part vanished and returns the rational value.
    pub fn to_rational(&self) -> Result<BigRational> {
        if !self.y.is_zero() {
            return Err(Error::NonRealResult(format!(
                "alpha coefficient {} survives (a={}, p={})",
                self.y, self.a, self.p
            )));
        }
        Ok(self.x.clone())
    }
}

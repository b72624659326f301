//! Exact q-series combinatorics at `q = p`: Pochhammer symbols,
//! q-multinomials, the trace-weight polynomials `P(n,k)_p`, partitions with
//! their statistics, ordered partition tuples, and the coefficients of
//! `∏(1−q^i)^5`.
//!
//! Everything here is arbitrary-precision and exact; inexact division is a
//! reported error, never a rounding.

use crate::{Error, Result};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `(p;p)_n = ∏_{i=1}^n (1 − p^i)`, exact; the empty product is 1.
///
/// The sign is `(−1)^n` for `p ≥ 2`.
pub fn q_pochhammer(p: u64, n: u32) -> BigInt {
    let p = BigInt::from(p);
    let mut acc = BigInt::one();
    let mut power = BigInt::one();
    for _ in 0..n {
        power *= &p;
        acc *= BigInt::one() - &power;
    }
    acc
}

/// `(p^{−1};p^{−1})_n = ∏_{i=1}^n (1 − p^{−i})`, exact rational.
pub fn q_pochhammer_recip(p: u64, n: u32) -> BigRational {
    let inv = BigRational::new(BigInt::one(), BigInt::from(p));
    let mut acc = BigRational::one();
    let mut power = BigRational::one();
    for _ in 0..n {
        power *= &inv;
        acc *= BigRational::one() - &power;
    }
    acc
}

/// q-multinomial `(p;p)_n / ∏_i (p;p)_{m_i}` with `Σ m_i = n`, exact.
///
/// The quotient is a polynomial in p with integer coefficients, so the
/// division must be exact; an inexact division signals a transcription
/// error upstream and is reported as `NonIntegral`.
pub fn q_multinomial(n: u32, parts: &[u32], p: u64) -> Result<BigInt> {
    let sum: u32 = parts.iter().sum();
    if sum != n {
        return Err(Error::PartsMismatch { n, sum });
    }
    let mut denom = BigInt::one();
    for &m in parts {
        denom *= q_pochhammer(p, m);
    }
    let numer = q_pochhammer(p, n);
    let (quot, rem) = num_integer::Integer::div_rem(&numer, &denom);
    if !rem.is_zero() {
        return Err(Error::NonIntegral(alloc::format!(
            "q-multinomial ({n}; {parts:?}) at p={p} does not divide exactly"
        )));
    }
    Ok(quot)
}

/// The polynomial `P(n,k)_p` weighting `a_E(p^k)` in the matrix-count error:
///
/// `P(n,k)_p = (−1)^k p^{n(n−k)+k(k+1)/2} Σ_s p^{2ks−2ns+2s²}
///             (p;p)_n / [(p;p)_s (p;p)_{s+k} (p;p)_{n−2s−k}]`,
///
/// summed over `0 ≤ s ≤ (n−k)/2`. Each summand combines into a nonnegative
/// power of p times the q-multinomial `(n; s, s+k, n−2s−k)`, so the whole
/// evaluation stays in integers.
pub fn p_poly(n: u32, k: u32, p: u64) -> Result<BigInt> {
    if k > n {
        return Err(Error::BadParameter);
    }
    let mut sum = BigInt::zero();
    let big_p = BigInt::from(p);
    for s in 0..=(n - k) / 2 {
        // Combined exponent n(n−k)+k(k+1)/2+2ks−2ns+2s²
        //   = (n−k−s)(n−s) + s² + ks + k(k+1)/2 ≥ 0.
        let e = (n - k - s) * (n - s) + s * s + k * s + k * (k + 1) / 2;
        let m = q_multinomial(n, &[s, s + k, n - 2 * s - k], p)?;
        sum += big_p.pow(e) * m;
    }
    if k % 2 == 1 {
        sum = -sum;
    }
    Ok(sum)
}

/// An integer partition with weakly decreasing parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::BadParameter);
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `|λ| = Σ parts`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `l(λ)`, the number of parts.
    pub fn length(&self) -> u32 {
        self.parts.len() as u32
    }

    /// `n(λ, j)`, the number of parts equal to j.
    pub fn multiplicity(&self, j: u32) -> u32 {
        self.parts.iter().filter(|&&x| x == j).count() as u32
    }

    /// Distinct part values with their multiplicities, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &part in &self.parts {
            match out.last_mut() {
                Some((j, m)) if *j == part => *m += 1,
                _ => out.push((part, 1)),
            }
        }
        out
    }

    /// Compact display form: "[3 1 1]", or "-" for the empty partition.
    pub fn display(&self) -> String {
        if self.parts.is_empty() {
            return String::from("-");
        }
        let mut s = String::from("[");
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&alloc::format!("{part}"));
        }
        s.push(']');
        s
    }
}

/// All partitions of `r` in descending lexicographic order of part lists;
/// `r = 0` yields exactly the empty partition.
pub fn partitions_of(r: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            descend(remaining - part, part, current, out);
            current.pop();
        }
    }
    descend(r, r.max(1), &mut current, &mut out);
    out
}

/// Ordered `count`-tuples of partitions with total size exactly `r`.
///
/// Order: lexicographic over the composition `(|λ_1|, …)` with larger first
/// slots first, then the `partitions_of` order within each slot.
pub fn partition_tuples(r: u32, count: usize) -> Vec<Vec<Partition>> {
    let per_size: Vec<Vec<Partition>> = (0..=r).map(partitions_of).collect();
    let mut out = Vec::new();
    let mut tuple: Vec<Partition> = Vec::with_capacity(count);
    fn descend(
        slot: usize,
        count: usize,
        remaining: u32,
        per_size: &[Vec<Partition>],
        tuple: &mut Vec<Partition>,
        out: &mut Vec<Vec<Partition>>,
    ) {
        if slot == count {
            if remaining == 0 {
                out.push(tuple.clone());
            }
            return;
        }
        // The last slot must absorb the remaining size exactly.
        let sizes: Vec<u32> = if slot + 1 == count {
            vec![remaining]
        } else {
            (0..=remaining).rev().collect()
        };
        for size in sizes {
            for part in &per_size[size as usize] {
                tuple.push(part.clone());
                descend(slot + 1, count, remaining - size, per_size, tuple, out);
                tuple.pop();
            }
        }
    }
    descend(0, count, r, &per_size, &mut tuple, &mut out);
    out
}

/// Coefficients `b_0..b_nmax` of `∏_{i≥1} (1 − q^i)^5`, exact.
pub fn eta5_coeffs(nmax: u32) -> Vec<BigInt> {
    let n = nmax as usize;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::one();
    for i in 1..=n {
        // Multiply five times by (1 − q^i), truncating at degree nmax.
        for _ in 0..5 {
            for d in (i..=n).rev() {
                let lower = coeffs[d - i].clone();
                coeffs[d] -= lower;
            }
        }
    }
    coeffs
}

/// Lemma-style reciprocal identity: `(p;p)_n = (−1)^n p^{n(n+1)/2} (p^{−1};p^{−1})_n`.
pub fn pochhammer_reciprocal_identity_holds(p: u64, n: u32) -> bool {
    let lhs = BigRational::from_integer(q_pochhammer(p, n));
    let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let rhs = BigRational::from_integer(sign * BigInt::from(p).pow(n * (n + 1) / 2))
        * q_pochhammer_recip(p, n);
    lhs == rhs
}

/// Lemma-style bracket: `0.5601 < (p^{−1};p^{−1})_n < 1`, checked exactly.
pub fn pochhammer_recip_in_bracket(p: u64, n: u32) -> bool {
    let v = q_pochhammer_recip(p, n);
    let lower = BigRational::new(BigInt::from(5601), BigInt::from(10000));
    v > lower && v < BigRational::one()
}

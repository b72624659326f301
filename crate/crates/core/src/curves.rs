//! Weierstrass curve models, reduction mod p, Frobenius traces and their
//! prime-power extensions, supersingular and split-prime classification, and
//! the Clausen curve attached to a K3 surface parameter.

use crate::field::{Fp, FieldElement};
use crate::{Error, Result};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Zero;

/// An elliptic curve over Q in long Weierstrass form
/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalCurveModel {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    /// Conductor, when known; must be at least 11 (the smallest elliptic
    /// conductor) because the explicit discrepancy bound assumes it.
    pub conductor: Option<u64>,
    /// CM field discriminant, when the curve has complex multiplication.
    pub cm_discriminant: Option<i64>,
}

impl RationalCurveModel {
    /// Builds a model and rejects singular curves and conductors below 11.
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Result<Self> {
        let m = RationalCurveModel { a1, a2, a3, a4, a6, conductor: None, cm_discriminant: None };
        if m.discriminant().is_zero() {
            return Err(Error::BadParameter);
        }
        Ok(m)
    }

    pub fn with_conductor(mut self, n: u64) -> Result<Self> {
        if n < 11 {
            return Err(Error::BadParameter);
        }
        self.conductor = Some(n);
        Ok(self)
    }

    pub fn with_cm_discriminant(mut self, d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::BadParameter);
        }
        self.cm_discriminant = Some(d);
        Ok(self)
    }

    /// Discriminant of the model over Q, exact.
    pub fn discriminant(&self) -> BigInt {
        let [a1, a2, a3, a4, a6] =
            [self.a1, self.a2, self.a3, self.a4, self.a6].map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }
}

/// A curve with good reduction at an odd prime, coefficients in `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedCurve {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
    pub p: u64,
}

impl ReducedCurve {
    fn from_values(c: [u64; 5], field: Fp) -> Result<Self> {
        let p = field.modulus();
        let curve = ReducedCurve {
            a1: FieldElement::new(c[0] as i64, field),
            a2: FieldElement::new(c[1] as i64, field),
            a3: FieldElement::new(c[2] as i64, field),
            a4: FieldElement::new(c[3] as i64, field),
            a6: FieldElement::new(c[4] as i64, field),
            p,
        };
        if curve.discriminant_mod_p() == 0 {
            return Err(Error::BadReduction { p });
        }
        Ok(curve)
    }

    /// Discriminant of the reduced curve, in `[0, p)`.
    pub fn discriminant_mod_p(&self) -> u64 {
        let f = Fp::new(self.p).expect("modulus validated at construction");
        let [a1, a2, a3, a4, a6] =
            [self.a1, self.a2, self.a3, self.a4, self.a6].map(|e| e.value());
        let b2 = f.add(f.mul(a1, a1), f.mul(4 % self.p, a2));
        let b4 = f.add(f.mul(2, a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(4 % self.p, a6));
        let b8 = {
            let t1 = f.mul(f.mul(a1, a1), a6);
            let t2 = f.mul(f.mul(4 % self.p, a2), a6);
            let t3 = f.mul(f.mul(a1, a3), a4);
            let t4 = f.mul(f.mul(a2, a3), a3);
            let t5 = f.mul(a4, a4);
            f.sub(f.add(f.add(t1, t2), t4), f.add(t3, t5))
        };
        let d1 = f.mul(f.mul(b2, b2), b8);
        let d2 = f.mul(8 % self.p, f.mul(f.mul(b4, b4), b4));
        let d3 = f.mul(27 % self.p, f.mul(b6, b6));
        let d4 = f.mul(9 % self.p, f.mul(f.mul(b2, b4), b6));
        f.sub(f.add(d4, 0), f.add(f.add(d1, d2), d3))
    }
}

/// Reduces an integral model mod an odd prime.
///
/// Fails with `BadReduction` when the discriminant vanishes mod `p`; sweep
/// drivers treat that as a skip.
pub fn reduce_curve(model: &RationalCurveModel, p: u64) -> Result<ReducedCurve> {
    let field = Fp::new(p)?;
    let c = [model.a1, model.a2, model.a3, model.a4, model.a6]
        .map(|a| field.reduce_int(a));
    ReducedCurve::from_values(c, field)
}

/// Character table of `F_p`: `chi(v)` is the Legendre symbol of `v`.
///
/// Built in O(p) by marking squares with the running sum of odd numbers.
/// `rebuild` lets one allocation serve many primes inside a sweep worker.
pub struct ChiTable {
    p: u64,
    table: Vec<i8>,
}

impl ChiTable {
    pub fn new(p: u64) -> Self {
        let mut t = ChiTable { p: 0, table: Vec::new() };
        t.rebuild(p);
        t
    }

    pub fn rebuild(&mut self, p: u64) {
        debug_assert!(p >= 3 && p % 2 == 1);
        self.p = p;
        self.table.clear();
        self.table.resize(p as usize, -1);
        self.table[0] = 0;
        // x² − (x−1)² = 2x − 1, so squares are reached by cumulative sums.
        let mut v = 0u64;
        let mut inc = 1u64;
        for _ in 1..=(p - 1) / 2 {
            v += inc;
            if v >= p {
                v -= p;
            }
            inc += 2;
            if inc >= p {
                inc -= p;
            }
            self.table[v as usize] = 1;
        }
    }

    #[inline(always)]
    pub fn chi(&self, v: u64) -> i8 {
        self.table[v as usize]
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }
}

#[inline(always)]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p { s - p } else { s }
}

/// Trace of Frobenius `a_E(p) = p + 1 − #E(F_p)`.
///
/// Completing the square (p is odd) turns the affine count into
/// `p + Σ_x chi(g(x))` with `g(x) = 4x³ + b2·x² + 2b4·x + b6`, so the trace
/// is `−Σ_x chi(g(x))`. The loop walks `g` by cubic finite differences:
/// three modular additions per x, no multiplications.
pub fn trace_with_table(curve: &ReducedCurve, table: &ChiTable) -> i64 {
    let p = curve.p;
    debug_assert_eq!(table.modulus(), p);
    let f = Fp::new(p).expect("modulus validated at construction");
    let [a1, a2, a3, a4, a6] =
        [curve.a1, curve.a2, curve.a3, curve.a4, curve.a6].map(|e| e.value());
    let b2 = f.add(f.mul(a1, a1), f.mul(4 % p, a2));
    let two_b4 = f.add(f.mul(4 % p, a4), f.mul(2, f.mul(a1, a3)));
    let b6 = f.add(f.mul(a3, a3), f.mul(4 % p, a6));

    let mut g = b6;
    let mut d1 = f.add(f.add(4 % p, b2), two_b4);
    let mut d2 = f.add(24 % p, f.add(b2, b2));
    let d3 = 24 % p;
    let mut sum: i64 = 0;
    for _ in 0..p {
        sum += table.chi(g) as i64;
        g = add_mod(g, d1, p);
        d1 = add_mod(d1, d2, p);
        d2 = add_mod(d2, d3, p);
    }
    -sum
}

/// Trace of Frobenius with a freshly built character table.
pub fn trace(curve: &ReducedCurve) -> i64 {
    trace_with_table(curve, &ChiTable::new(curve.p))
}

/// Traces over prime-power fields: `[a_E(p), a_E(p²), …, a_E(p^n)]`.
///
/// Uses `a_E(p^{k+1}) = a·a_E(p^k) − p·a_E(p^{k−1})` with `a_E(p^0) = 2`,
/// the power-sum recurrence for the Frobenius eigenvalues.
pub fn prime_power_traces(a: i64, p: u64, n: usize) -> Result<Vec<i128>> {
    if (a as i128) * (a as i128) >= 4 * p as i128 {
        return Err(Error::HasseViolation { a, p });
    }
    let mut powers = Vec::with_capacity(n);
    let (mut prev, mut cur) = (2i128, a as i128);
    for _ in 0..n {
        powers.push(cur);
        let next = (a as i128) * cur - (p as i128) * prev;
        prev = cur;
        cur = next;
    }
    Ok(powers)
}

/// Frobenius trace data for one curve at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusData {
    pub p: u64,
    pub a: i64,
    /// `powers[k-1] = a_E(p^k)` for `k = 1..=n`.
    pub powers: Vec<i128>,
}

impl FrobeniusData {
    pub fn new(a: i64, p: u64, n: usize) -> Result<Self> {
        Ok(FrobeniusData { p, a, powers: prime_power_traces(a, p, n)? })
    }

    pub fn from_curve(curve: &ReducedCurve, n: usize) -> Result<Self> {
        Self::new(trace(curve), curve.p, n)
    }
}

/// Supersingularity as used by the closed-form counts: `a_E(p) = 0`.
///
/// At p = 3 a classically supersingular curve may instead have `a = ±3`;
/// those traces make the Frobenius eigenvalues real multiples of a root of
/// unity rather than `±√p·i`, so the closed forms exclude them by design.
pub fn is_supersingular(a: i64, _p: u64) -> bool {
    a == 0
}

/// Whether `p` splits in the imaginary quadratic field of discriminant `D`:
/// true iff `D` is a nonzero square mod `p`.
pub fn splits(p: u64, d: i64) -> Result<bool> {
    let field = Fp::new(p)?;
    if d >= 0 {
        return Err(Error::BadParameter);
    }
    match field.legendre(d) {
        0 => Err(Error::RamifiedPrime { p, d }),
        1 => Ok(true),
        _ => Ok(false),
    }
}

/// The K3 parameter λ with its per-prime character and CM data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct K3Parameter {
    lambda: Rational64,
}

/// Limiting-density regime of the normalized K3 errors, by λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K3Regime {
    /// λ+1 not a rational square, Clausen curve without CM: all primes.
    OriginalBatman,
    /// λ+1 a rational square, no CM: all primes.
    HalfBatman,
    /// CM with λ+1 a nonsquare: split primes of the CM field.
    FlyingBatman { cm_discriminant: i64 },
    /// CM with λ+1 a square: split primes of the CM field. The source
    /// statements disagree on whether the set is {−4, 8, −64} or {−4, 8, 64};
    /// we accept {−4, 8, −64} and callers surface the ambiguity in metadata.
    HalfFlyingBatman { cm_discriminant: i64 },
}

impl K3Parameter {
    /// λ must avoid 0 and −1, the degenerate surface parameters.
    pub fn new(lambda: Rational64) -> Result<Self> {
        if lambda == Rational64::from_integer(0) || lambda == Rational64::from_integer(-1) {
            return Err(Error::BadParameter);
        }
        Ok(K3Parameter { lambda })
    }

    pub fn lambda(&self) -> Rational64 {
        self.lambda
    }

    /// γ_p = Legendre character of λ+1; zero only at excluded primes.
    pub fn gamma(&self, p: u64) -> Result<i32> {
        let field = Fp::new(p)?;
        let v = field.reduce_rational(self.lambda + 1)?;
        Ok(field.legendre(v as i64))
    }

    /// CM field discriminant of the Clausen curve for the seven CM values
    /// of λ; `None` otherwise.
    pub fn cm_discriminant(&self) -> Option<i64> {
        let l = self.lambda;
        let r = |n: i64, d: i64| Rational64::new(n, d);
        if l == r(8, 1) || l == r(1, 8) {
            Some(-4)
        } else if l == r(1, 1) {
            Some(-8)
        } else if l == r(-4, 1) || l == r(-1, 4) {
            Some(-3)
        } else if l == r(-64, 1) || l == r(-1, 64) {
            Some(-7)
        } else {
            None
        }
    }

    /// Which limiting density governs the normalized errors for this λ.
    pub fn regime(&self) -> K3Regime {
        // Half-flying set {−4, 8, −64}: λ = 64 is sometimes listed in place
        // of −64, but only −64 gives the Clausen curve CM, so the set is
        // resolved to the CM values.
        let half_flying = [(-4, 1), (8, 1), (-64, 1)]
            .iter()
            .any(|&(n, d)| self.lambda == Rational64::new(n, d));
        match self.cm_discriminant() {
            Some(d) if half_flying => K3Regime::HalfFlyingBatman { cm_discriminant: d },
            Some(d) => K3Regime::FlyingBatman { cm_discriminant: d },
            None if is_rational_square(self.lambda + 1) => K3Regime::HalfBatman,
            None => K3Regime::OriginalBatman,
        }
    }

    /// Primes dividing the numerator or denominator of λ or λ+1; the Clausen
    /// curve degenerates there.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        let l = self.lambda;
        let pi = p as i64;
        l.numer() % pi == 0 || l.denom() % pi == 0 || (l + 1).numer() % pi == 0
    }
}

fn is_rational_square(q: Rational64) -> bool {
    fn is_square(n: i64) -> bool {
        if n < 0 {
            return false;
        }
        let r = num_integer::Roots::sqrt(&n);
        r * r == n
    }
    *q.numer() > 0 && is_square(*q.numer()) && is_square(*q.denom())
}

/// The reduction mod p of the Clausen curve `y² = (x+1)(x² − λ/(λ+1))`,
/// i.e. `y² = x³ + x² − c·x − c` with `c = λ/(λ+1) mod p`.
///
/// Fails with `BadPrime` when p divides the numerator or denominator of λ
/// or of λ+1 (which also covers all bad-reduction primes, since the curve
/// discriminant is `64·c·(1−c)²`).
pub fn clausen_curve(param: &K3Parameter, p: u64) -> Result<ReducedCurve> {
    let field = Fp::new(p)?;
    if param.is_bad_prime(p) {
        return Err(Error::BadPrime { p });
    }
    let lambda = param.lambda();
    let c = field.reduce_rational(lambda / (lambda + 1))?;
    ReducedCurve::from_values([0, 1, 0, field.neg(c), field.neg(c)], field)
}

//! Ground-truth matrix point counts by exhaustive enumeration of commuting
//! matrix tuples over F_p: pairs (A,B) with
//! B² + a₁AB + a₃B = A³ + a₂A² + a₄A + a₆I for the elliptic case, and
//! invertible triples (A,B,C) with C² = AB(A+I)(B+I)(A+λB) for the K3 case.
//!
//! Nothing here shares code with the closed-form engines; this module is the
//! independent check they are validated against.

use crate::curves::{ChiTable, K3Parameter, ReducedCurve};
use crate::field::Fp;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;

/// Hard cap on enumeration size: estimated inner checks, not wall time.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

const MAX_DIM: usize = 3;

/// An exhaustive count plus enumeration statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCount {
    pub value: BigInt,
    /// Innermost membership checks performed.
    pub visited: u64,
}

/// Dense n×n matrix over F_p, n ≤ 3, entries row-major and reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    p: u64,
    e: [u64; MAX_DIM * MAX_DIM],
}

impl SquareMatrix {
    pub fn new(n: usize, p: u64, entries: &[u64]) -> Result<Self> {
        if n == 0 || n > MAX_DIM || entries.len() != n * n {
            return Err(Error::BadParameter);
        }
        let mut e = [0u64; MAX_DIM * MAX_DIM];
        for (slot, &v) in e.iter_mut().zip(entries) {
            *slot = v % p;
        }
        Ok(SquareMatrix { n, p, e })
    }

    pub fn zero(n: usize, p: u64) -> Self {
        SquareMatrix { n, p, e: [0; MAX_DIM * MAX_DIM] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zero(n, p);
        for i in 0..n {
            m.e[i * n + i] = 1 % p;
        }
        m
    }

    /// c·I for a scalar c.
    pub fn scalar(n: usize, p: u64, c: u64) -> Self {
        let mut m = Self::zero(n, p);
        for i in 0..n {
            m.e[i * n + i] = c % p;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.e[..self.n * self.n]
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> u64 {
        self.e[i * self.n + j]
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.n == other.n && self.p == other.p);
        let mut out = *self;
        for (v, w) in out.e.iter_mut().zip(other.e.iter()) {
            *v += *w;
            if *v >= self.p {
                *v -= self.p;
            }
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let mut out = *self;
        for v in out.e.iter_mut() {
            *v = (*v as u128 * c as u128 % self.p as u128) as u64;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.n == other.n && self.p == other.p);
        let n = self.n;
        let mut out = Self::zero(n, self.p);
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += self.get(i, k) as u128 * other.get(k, j) as u128;
                }
                out.e[i * n + j] = (acc % self.p as u128) as u64;
            }
        }
        out
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Rank by Gaussian elimination; n ≤ 3 keeps this trivial.
    pub fn is_invertible(&self) -> bool {
        let field = Fp::new(self.p).expect("matrix modulus is prime");
        let n = self.n;
        let mut rows: Vec<Vec<u64>> = (0..n).map(|i| self.entries()[i * n..(i + 1) * n].to_vec()).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(rank, pivot);
            let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
            for v in rows[rank].iter_mut() {
                *v = field.mul(*v, inv);
            }
            for r in 0..n {
                if r != rank && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..n {
                        let sub = field.mul(f, rows[rank][c]);
                        rows[r][c] = field.sub(rows[r][c], sub);
                    }
                }
            }
            rank += 1;
        }
        rank == n
    }
}

/// Reduced row echelon kernel basis of a homogeneous system over F_p.
/// `rows` are the equation coefficients; unknowns number `ncols`.
fn kernel_basis(p: u64, mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let field = Fp::new(p).expect("modulus is prime");
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for v in rows[rank].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let f = row[col];
            if f != 0 {
                for c in 0..ncols {
                    let sub = field.mul(f, pivot_row[c]);
                    row[c] = field.sub(row[c], sub);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = field.sub(0, rows[i][free]);
        }
        basis.push(v);
    }
    basis
}

/// Coefficient rows of the linear map X ↦ AX − XA, unknowns X[k,l] at
/// column k·n + l, one equation per output entry (i,j).
fn commutator_rows(a: &SquareMatrix) -> Vec<Vec<u64>> {
    let (n, p) = (a.n, a.p);
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![0u64; n * n];
            for k in 0..n {
                row[k * n + j] = (row[k * n + j] + a.get(i, k)) % p;
                row[i * n + k] = (row[i * n + k] + p - a.get(k, j)) % p;
            }
            rows.push(row);
        }
    }
    rows
}

/// Walks the span of `basis` (p^dim vectors), passing each as a matrix.
/// The odometer adds one basis vector per step, so the running value stays
/// consistent through digit carries (p additions of a vector cancel mod p).
fn for_each_in_span<F: FnMut(&SquareMatrix)>(n: usize, p: u64, basis: &[Vec<u64>], mut f: F) {
    let dim = basis.len();
    let mut current = SquareMatrix::zero(n, p);
    let mut digits = vec![0u64; dim];
    loop {
        f(&current);
        let mut i = 0;
        loop {
            if i == dim {
                return;
            }
            for (slot, &v) in current.e.iter_mut().zip(basis[i].iter()) {
                *slot += v;
                if *slot >= p {
                    *slot -= p;
                }
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// All matrices commuting with `a`, enumerated from the kernel of
/// X ↦ AX − XA.
pub fn commutant(a: &SquareMatrix) -> Vec<SquareMatrix> {
    let basis = kernel_basis(a.p, commutator_rows(a), a.n * a.n);
    let mut out = Vec::new();
    for_each_in_span(a.n, a.p, &basis, |m| out.push(*m));
    out
}

fn checked_pow(p: u64, e: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p as u128);
    }
    acc
}

fn ensure_budget(estimated: u128, budget: u128) -> Result<()> {
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    Ok(())
}

/// Exhaustive count of commuting pairs (A,B) of n×n matrices over F_p with
/// B² + a₁AB + a₃B = A³ + a₂A² + a₄A + a₆I. For n = 1 this is the affine
/// point count, enumerated as a literal (x,y) double loop.
pub fn oracle_elliptic(n: u32, curve: &ReducedCurve, budget: u128) -> Result<OracleCount> {
    if n == 0 || n as usize > MAX_DIM {
        return Err(Error::BadParameter);
    }
    if n == 1 {
        ensure_budget(checked_pow(curve.p, 2), budget)?;
        return Ok(affine_point_count(curve));
    }
    ensure_budget(checked_pow(curve.p, n * n + n), budget)?;

    let (n, p) = (n as usize, curve.p);
    let (a1, a2, a3, a4, a6) = (
        curve.a1.value(),
        curve.a2.value(),
        curve.a3.value(),
        curve.a4.value(),
        curve.a6.value(),
    );
    let mut count: u64 = 0;
    let mut visited: u64 = 0;
    for_each_all_matrices(n, p, |a| {
        // Horner: ((A + a2·I)·A + a4·I)·A + a6·I.
        let rhs = a
            .add(&SquareMatrix::scalar(n, p, a2))
            .mul(a)
            .add(&SquareMatrix::scalar(n, p, a4))
            .mul(a)
            .add(&SquareMatrix::scalar(n, p, a6));
        let basis = kernel_basis(p, commutator_rows(a), n * n);
        for_each_in_span(n, p, &basis, |b| {
            visited += 1;
            let mut lhs = b.mul(b);
            if a1 != 0 {
                lhs = lhs.add(&a.mul(b).scale(a1));
            }
            if a3 != 0 {
                lhs = lhs.add(&b.scale(a3));
            }
            if lhs == rhs {
                count += 1;
            }
        });
    });
    Ok(OracleCount { value: BigInt::from(count), visited })
}

/// Literal affine (x,y) enumeration: for each x the inner scan walks
/// h(y) = y² + cy − r by finite differences on eight stride-8 chains
/// (y ≡ k mod 8), counting zeros of h. The chains are independent u32
/// lanes with branch-free reductions, so the scan vectorizes.
fn affine_point_count(curve: &ReducedCurve) -> OracleCount {
    let p = curve.p;
    let (a1, a2, a3, a4, a6) = (
        curve.a1.value(),
        curve.a2.value(),
        curve.a3.value(),
        curve.a4.value(),
        curve.a6.value(),
    );
    let mut count: u64 = 0;
    if p < 17 || p >= (1 << 30) {
        for x in 0..p {
            let x2 = x as u128 * x as u128 % p as u128;
            let r = ((x2 * x as u128 + a2 as u128 * x2 + a4 as u128 * x as u128 + a6 as u128)
                % p as u128) as u64;
            let c = ((a1 as u128 * x as u128 + a3 as u128) % p as u128) as u64;
            for y in 0..p {
                if (y as u128 * y as u128 + c as u128 * y as u128) % p as u128 == r as u128 {
                    count += 1;
                }
            }
        }
        return OracleCount { value: BigInt::from(count), visited: p * p };
    }

    // Horner in u64: every partial stays below 2p < 2^31 before the next
    // multiply by x < 2^30.
    let rhs = |x: u64| ((x + a2) * x % p + a4) * x % p + a6;

    if a1 == 0 {
        // The y-side y² + a₃y does not involve x: tabulate it once, then
        // each (x,y) membership check is a lane compare against r(x).
        let table: Vec<u32> = (0..p).map(|y| ((y * y + a3 * y) % p) as u32).collect();
        for x in 0..p {
            count += count_matches(&table, (rhs(x) % p) as u32);
        }
        return OracleCount { value: BigInt::from(count), visited: p * p };
    }

    let dd = [(128 % p) as u32; 8];
    let steps = p / 8;
    for x in 0..p {
        let r = rhs(x) % p;
        let c = (a1 * x + a3) % p;

        // Chain k holds h(k + 8t); h(y+8) − h(y) = 16y + 64 + 8c, second
        // diff 2·8² = 128.
        let mut h = [0u32; 8];
        let mut d = [0u32; 8];
        for k in 0..8u64 {
            h[k as usize] = ((k * k + c * k + p - r) % p) as u32;
            d[k as usize] = ((16 * k + 64 + 8 * c) % p) as u32;
        }
        count += count_chain_zeros(&mut h, &mut d, &dd, p as u32, steps);
        for y in 8 * steps..p {
            count += ((y * y + c * y) % p == r) as u64;
        }
    }
    OracleCount { value: BigInt::from(count), visited: p * p }
}

/// Occurrences of `r` in the tabulated y-side values. Kept out of line so
/// the compare-and-accumulate lanes vectorize independently of the caller.
#[inline(never)]
fn count_matches(table: &[u32], r: u32) -> u64 {
    let mut hits = [0u32; 8];
    let mut chunks = table.chunks_exact(8);
    for chunk in &mut chunks {
        for k in 0..8 {
            hits[k] += (chunk[k] == r) as u32;
        }
    }
    let mut total: u64 = hits.iter().map(|&v| v as u64).sum();
    for &v in chunks.remainder() {
        total += (v == r) as u64;
    }
    total
}

/// Advances eight stride-8 finite-difference chains `steps` times and counts
/// lane zeros. Kept out of line: inlined into the per-x loop the chain walk
/// stops auto-vectorizing.
#[inline(never)]
fn count_chain_zeros(
    h: &mut [u32; 8],
    d: &mut [u32; 8],
    dd: &[u32; 8],
    p: u32,
    steps: u64,
) -> u64 {
    // Lane-wise a + b mod p for a, b < p < 2^30: subtract p eagerly, then
    // the sign bit (broadcast by the arithmetic shift) adds p back when
    // the subtraction overshot. All four ops exist as baseline SSE2
    // vector instructions.
    #[inline(always)]
    fn step(h: &mut [u32; 8], d: &[u32; 8], p: u32) {
        for k in 0..8 {
            let t = h[k].wrapping_add(d[k]).wrapping_sub(p) as i32;
            h[k] = t.wrapping_add((t >> 31) & p as i32) as u32;
        }
    }
    let mut hits = [0u32; 8];
    for _ in 0..steps {
        for k in 0..8 {
            hits[k] += (h[k] == 0) as u32;
        }
        step(h, d, p);
        step(d, dd, p);
    }
    hits.iter().map(|&v| v as u64).sum()
}

/// Odometer over all p^{n²} matrices.
fn for_each_all_matrices<F: FnMut(&SquareMatrix)>(n: usize, p: u64, mut f: F) {
    let cells = n * n;
    let mut m = SquareMatrix::zero(n, p);
    loop {
        f(&m);
        let mut i = 0;
        loop {
            if i == cells {
                return;
            }
            m.e[i] += 1;
            if m.e[i] < p {
                break;
            }
            m.e[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive count of pairwise-commuting triples (A,B,C) of n×n matrices
/// over F_p with C invertible and C² = AB(A+I)(B+I)(A+λB). For n = 1 this
/// is Σ_{f(x,y)≠0} (1 + χ(f)) with f = xy(x+1)(y+1)(x+λy), and the count
/// is always even (C and −C pair up).
pub fn oracle_k3(n: u32, param: &K3Parameter, p: u64, budget: u128) -> Result<OracleCount> {
    if n == 0 || n as usize > MAX_DIM {
        return Err(Error::BadParameter);
    }
    if param.is_bad_prime(p) {
        return Err(Error::BadPrime { p });
    }
    let field = Fp::new(p)?;
    let lambda = field.reduce_rational(param.lambda())?;
    if n == 1 {
        ensure_budget(checked_pow(p, 2), budget)?;
        return Ok(k3_surface_point_count(p, lambda));
    }
    ensure_budget(checked_pow(p, n * n + 2 * n), budget)?;

    let n = n as usize;
    let identity = SquareMatrix::identity(n, p);
    let mut count: u64 = 0;
    let mut visited: u64 = 0;
    for_each_all_matrices(n, p, |a| {
        let rows_a = commutator_rows(a);
        let basis_a = kernel_basis(p, rows_a.clone(), n * n);
        let a_plus_i = a.add(&identity);
        for_each_in_span(n, p, &basis_a, |b| {
            let rhs = a
                .mul(b)
                .mul(&a_plus_i)
                .mul(&b.add(&identity))
                .mul(&a.add(&b.scale(lambda)));
            let mut rows = rows_a.clone();
            rows.extend(commutator_rows(b));
            let joint = kernel_basis(p, rows, n * n);
            for_each_in_span(n, p, &joint, |c| {
                visited += 1;
                if c.mul(c) == rhs && c.is_invertible() {
                    count += 1;
                }
            });
        });
    });
    Ok(OracleCount { value: BigInt::from(count), visited })
}

/// n = 1 K3 count: z ranges over the square roots of f(x,y) when f ≠ 0.
fn k3_surface_point_count(p: u64, lambda: u64) -> OracleCount {
    let chi = ChiTable::new(p);
    let pw = p as u128;
    let mut count: u64 = 0;
    for x in 0..p {
        let xw = x as u128;
        let x_part = xw * ((x + 1) as u128 % pw) % pw;
        for y in 0..p {
            let yw = y as u128;
            let f = x_part * (yw * ((y + 1) as u128 % pw) % pw) % pw
                * ((xw + lambda as u128 * yw) % pw)
                % pw;
            if f != 0 {
                count += (1 + chi.chi(f as u64) as i64) as u64;
            }
        }
    }
    debug_assert_eq!(count % 2, 0, "n=1 K3 counts pair z with -z");
    OracleCount { value: BigInt::from(count), visited: p * p }
}

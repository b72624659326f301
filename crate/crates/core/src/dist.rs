//! Limiting densities for the normalized error statistics (semicircle,
//! arcsine, and the four Batman densities B1-B4), exact-form CDFs,
//! interval-grid discrepancy, histogram binning, and the explicit
//! effective bounds with their companion inequalities.

use crate::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
// f64 math methods come from this trait (via libm) whenever no crate in
// the build graph links std; builds that do link std resolve the inherent
// methods instead and leave the import redundant, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

/// Endpoint count of the default discrepancy interval grid.
pub const DEFAULT_GRID_ENDPOINTS: usize = 401;

/// One record of a prime sweep: the trace data and normalized error for a
/// single good prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub p: u64,
    pub a: i64,
    pub supersingular: bool,
    /// Split/inert classification when a CM field applies.
    pub split: Option<bool>,
    /// a*_{E,n}(p) for elliptic sweeps, A*_λ(p) for K3 sweeps.
    pub star_error: f64,
    /// R_n*(p) for elliptic sweeps; absent for K3 sweeps.
    pub r_star: Option<f64>,
}

/// The six limiting densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Semicircle,
    Arcsine,
    B1,
    B2,
    B3,
    B4,
}

impl DensityKind {
    pub const ALL: [DensityKind; 6] = [
        DensityKind::Semicircle,
        DensityKind::Arcsine,
        DensityKind::B1,
        DensityKind::B2,
        DensityKind::B3,
        DensityKind::B4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DensityKind::Semicircle => "semicircle",
            DensityKind::Arcsine => "arcsine",
            DensityKind::B1 => "b1",
            DensityKind::B2 => "b2",
            DensityKind::B3 => "b3",
            DensityKind::B4 => "b4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            DensityKind::Semicircle | DensityKind::Arcsine => (-2.0, 2.0),
            DensityKind::B1 | DensityKind::B3 => (-3.0, 3.0),
            DensityKind::B2 | DensityKind::B4 => (-1.0, 3.0),
        }
    }

    /// Pointwise density, evaluated from the printed formulas; 0 outside
    /// the support, +inf at integrable endpoint singularities.
    pub fn density(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return 0.0;
        }
        match self {
            DensityKind::Semicircle => (4.0 - t * t).max(0.0).sqrt() / (2.0 * PI),
            DensityKind::Arcsine => 1.0 / (PI * (4.0 - t * t).max(0.0).sqrt()),
            DensityKind::B1 => {
                let at = t.abs();
                if at >= 1.0 {
                    let q = 3.0 + 2.0 * at - at * at;
                    if q <= 0.0 {
                        0.0
                    } else {
                        (3.0 - at) / (4.0 * PI * q.sqrt())
                    }
                } else {
                    (3.0 + t) / (4.0 * PI * (3.0 - 2.0 * t - t * t).sqrt())
                        + (3.0 - t) / (4.0 * PI * (3.0 + 2.0 * t - t * t).sqrt())
                }
            }
            DensityKind::B2 => ((3.0 - t) / (1.0 + t)).sqrt() / (2.0 * PI),
            DensityKind::B3 => {
                let at = t.abs();
                if at >= 1.0 {
                    1.0 / (2.0 * PI * (3.0 + 2.0 * at - at * at).max(0.0).sqrt())
                } else {
                    1.0 / (2.0 * PI * (3.0 - 2.0 * t - t * t).sqrt())
                        + 1.0 / (2.0 * PI * (3.0 + 2.0 * t - t * t).sqrt())
                }
            }
            DensityKind::B4 => 1.0 / (PI * (3.0 + 2.0 * t - t * t).max(0.0).sqrt()),
        }
    }

    /// Exact-form cumulative distribution; clamped to [0,1] outside the
    /// support. B2/B4 are the pushforwards of semicircle/arcsine under
    /// t = u² − 1, and B1/B3 are the even mixtures of B2/B4.
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            DensityKind::Semicircle => cdf_semicircle(t),
            DensityKind::Arcsine => cdf_arcsine(t),
            DensityKind::B2 => cdf_pushforward(t, cdf_semicircle),
            DensityKind::B4 => cdf_pushforward(t, cdf_arcsine),
            DensityKind::B1 => {
                let f2 = |x| cdf_pushforward(x, cdf_semicircle);
                (f2(t) + 1.0 - f2(-t)) / 2.0
            }
            DensityKind::B3 => {
                let f4 = |x| cdf_pushforward(x, cdf_arcsine);
                (f4(t) + 1.0 - f4(-t)) / 2.0
            }
        }
    }

    /// Probability of the closed interval [a, b].
    pub fn interval_probability(&self, a: f64, b: f64) -> f64 {
        (self.cdf(b) - self.cdf(a)).max(0.0)
    }

    /// Quadrature of the density over its whole support, with the
    /// integrable singularities removed by trigonometric substitution
    /// (t = 2 sin θ on [−2,2]; t = 4 sin²θ − 1 and t = 2 sin²θ − 1 on the
    /// Batman pieces). Every transformed integrand is smooth.
    pub fn integral_over_support(&self) -> f64 {
        let tol = 1e-9;
        let half_pi = PI / 2.0;
        match self {
            DensityKind::Semicircle => {
                adaptive_simpson(&|th: f64| 2.0 / PI * th.cos() * th.cos(), -half_pi, half_pi, tol)
            }
            DensityKind::Arcsine => adaptive_simpson(&|_| 1.0 / PI, -half_pi, half_pi, tol),
            DensityKind::B2 => {
                adaptive_simpson(&|th: f64| 4.0 / PI * th.cos() * th.cos(), 0.0, half_pi, tol)
            }
            DensityKind::B4 => adaptive_simpson(&|_| 2.0 / PI, 0.0, half_pi, tol),
            DensityKind::B1 => {
                let outer = adaptive_simpson(
                    &|th: f64| 2.0 / PI * th.cos() * th.cos(),
                    PI / 4.0,
                    half_pi,
                    tol,
                );
                let inner = adaptive_simpson(
                    &|th: f64| {
                        let t = 2.0 * th.sin() * th.sin() - 1.0;
                        ((3.0 - t).sqrt() * th.cos() + (3.0 + t).sqrt() * th.sin())
                            / (PI * 2f64.sqrt())
                    },
                    0.0,
                    half_pi,
                    tol,
                );
                2.0 * outer + inner
            }
            DensityKind::B3 => {
                let outer = adaptive_simpson(&|_| 1.0 / PI, PI / 4.0, half_pi, tol);
                let inner = adaptive_simpson(
                    &|th: f64| {
                        let t = 2.0 * th.sin() * th.sin() - 1.0;
                        (th.cos() / (3.0 - t).sqrt() + th.sin() / (3.0 + t).sqrt())
                            * (2f64.sqrt() / PI)
                    },
                    0.0,
                    half_pi,
                    tol,
                );
                2.0 * outer + inner
            }
        }
    }
}

fn cdf_semicircle(t: f64) -> f64 {
    if t <= -2.0 {
        return 0.0;
    }
    if t >= 2.0 {
        return 1.0;
    }
    (t * (4.0 - t * t).sqrt() / 2.0 + 2.0 * (t / 2.0).asin() + PI) / (2.0 * PI)
}

fn cdf_arcsine(t: f64) -> f64 {
    if t <= -2.0 {
        return 0.0;
    }
    if t >= 2.0 {
        return 1.0;
    }
    ((t / 2.0).asin() + PI / 2.0) / PI
}

/// CDF of u² − 1 where u has the given symmetric base CDF on [−2,2].
fn cdf_pushforward(t: f64, base: fn(f64) -> f64) -> f64 {
    if t <= -1.0 {
        return 0.0;
    }
    if t >= 3.0 {
        return 1.0;
    }
    2.0 * base((1.0 + t).sqrt()) - 1.0
}

/// Adaptive Simpson quadrature; `f` must be finite on [a, b].
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = (a + m) / 2.0;
        let rm = (m + b) / 2.0;
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let m = (a + b) / 2.0;
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 40)
}

/// Sup over all grid interval pairs [g_i, g_j], i < j, of
/// |empirical closed-interval proportion − CDF mass|, with `endpoints`
/// equispaced grid points spanning the support.
pub fn discrepancy(samples: &[f64], kind: DensityKind, endpoints: usize) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if endpoints < 2 {
        return Err(Error::DomainError(format!(
            "interval grid needs at least 2 endpoints, got {endpoints}"
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::DomainError("samples must be finite".into()));
    }
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite floats compare"));
    let n = sorted.len() as f64;

    let (lo, hi) = kind.support();
    let step = (hi - lo) / (endpoints - 1) as f64;
    let grid: Vec<f64> = (0..endpoints).map(|i| lo + step * i as f64).collect();
    let count_lt: Vec<usize> = grid.iter().map(|&g| sorted.partition_point(|&x| x < g)).collect();
    let count_le: Vec<usize> = grid.iter().map(|&g| sorted.partition_point(|&x| x <= g)).collect();
    let cdfs: Vec<f64> = grid.iter().map(|&g| kind.cdf(g)).collect();

    let mut sup: f64 = 0.0;
    for i in 0..endpoints {
        for j in i + 1..endpoints {
            let empirical = (count_le[j] - count_lt[i]) as f64 / n;
            let analytic = (cdfs[j] - cdfs[i]).max(0.0);
            sup = sup.max((empirical - analytic).abs());
        }
    }
    Ok(sup)
}

/// One histogram bin over [lo, hi) (closed at the top for the final bin).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// count / (total · width), so bin heights overlay densities directly.
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub support: (f64, f64),
    pub bins: Vec<HistogramBin>,
    /// Samples inside the support (the normalization denominator).
    pub total: u64,
}

/// Equal-width binning over `support`; samples outside are dropped.
pub fn histogram(samples: &[f64], bins: usize, support: (f64, f64)) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let (lo, hi) = support;
    if bins == 0 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DomainError(format!(
            "histogram needs bins >= 1 and a finite support, got bins={bins}, support=({lo},{hi})"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0u64; bins];
    let mut total = 0u64;
    for &t in samples {
        if !(lo..=hi).contains(&t) {
            continue;
        }
        let idx = (((t - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::EmptySample);
    }
    let bins = counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramBin {
            lo: lo + width * i as f64,
            hi: lo + width * (i + 1) as f64,
            count,
            height: count as f64 / (total as f64 * width),
        })
        .collect();
    Ok(Histogram { support, bins, total })
}

/// Midpoints of `cells` equal cells over [lo, hi].
pub fn midpoint_grid(lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let width = (hi - lo) / cells as f64;
    (0..cells).map(|i| lo + width * (i as f64 + 0.5)).collect()
}

/// Max absolute gap of whole(t) vs (half(t) + half(−t))/2 over a midpoint
/// grid on [−3,3]; the grid midpoints avoid the singular abscissas ±1, ±3.
pub fn mixture_max_gap(whole: DensityKind, half: DensityKind, cells: usize) -> f64 {
    midpoint_grid(-3.0, 3.0, cells)
        .into_iter()
        .map(|t| {
            let mixed = (half.density(t) + half.density(-t)) / 2.0;
            (whole.density(t) - mixed).abs()
        })
        .fold(0.0, f64::max)
}

/// Max relative gap between the pushforward of `base` under t = u² − 1 and
/// `image`, over a u-midpoint grid on [−2,2]: compares base(u)/|u| with
/// image(u²−1). Relative scaling max(1,|x|,|y|) keeps the check meaningful
/// where both sides blow up near u = 0.
pub fn pushforward_max_gap(base: DensityKind, image: DensityKind, cells: usize) -> f64 {
    midpoint_grid(-2.0, 2.0, cells)
        .into_iter()
        .map(|u| {
            let lhs = base.density(u) / u.abs();
            let rhs = image.density(u * u - 1.0);
            (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
        })
        .fold(0.0, f64::max)
}

fn require_bound_domain(n: u64, x: f64) -> Result<()> {
    if x < 289.0 {
        return Err(Error::DomainError(format!("effective bound needs X >= 289, got {x}")));
    }
    if n < 11 {
        return Err(Error::DomainError(format!("effective bound needs conductor N >= 11, got {n}")));
    }
    Ok(())
}

/// Effective discrepancy bound 58.44·ln(N·ln X)/√(ln X) for a square-free
/// conductor N. Vacuous (> 1) at practical X; recorded anyway.
pub fn effective_bound(n: u64, x: f64) -> Result<f64> {
    require_bound_domain(n, x)?;
    let lx = x.ln();
    Ok(58.44 * (n as f64 * lx).ln() / lx.sqrt())
}

/// Companion constant from the bound's derivation: 58.1 in place of 58.44.
pub fn effective_bound_variant(n: u64, x: f64) -> Result<f64> {
    require_bound_domain(n, x)?;
    let lx = x.ln();
    Ok(58.1 * (n as f64 * lx).ln() / lx.sqrt())
}

/// Chebyshev-type window: X/ln X < π(X) < 1.2551·X/ln X for X ≥ 17.
pub fn prime_count_window(x: f64) -> Result<(f64, f64)> {
    if x < 17.0 {
        return Err(Error::DomainError(format!("prime-count window needs X >= 17, got {x}")));
    }
    let lx = x.ln();
    Ok((x / lx, 1.2551 * x / lx))
}

/// Ratio bound π(A)/π(X) ≤ 1.2551·(A·ln X)/(X·ln A) for 17 ≤ A ≤ X.
pub fn prime_ratio_bound(a: f64, x: f64) -> Result<f64> {
    if a < 17.0 || x < a {
        return Err(Error::DomainError(format!(
            "ratio bound needs 17 <= A <= X, got A={a}, X={x}"
        )));
    }
    Ok(1.2551 * a * x.ln() / (x * a.ln()))
}

/// Right side of X^{−1/2} ≤ 0.2429·ln(N·ln X)/√(ln X) on the bound's domain.
pub fn sqrt_absorption_bound(n: u64, x: f64) -> Result<f64> {
    require_bound_domain(n, x)?;
    let lx = x.ln();
    Ok(0.2429 * (n as f64 * lx).ln() / lx.sqrt())
}

//! Verification suites behind `matrixpoints verify --suite <name>`.
//!
//! Each suite returns a line-per-check report. A suite passes only when
//! every hard check holds; comparison rows that merely surface a
//! formula/oracle disagreement are reported without failing the suite.

use matrixpoints_core::curves::{
    clausen_curve, reduce_curve, trace_with_table, ChiTable, FrobeniusData, K3Parameter,
    RationalCurveModel,
};
use matrixpoints_core::dist::{
    adaptive_simpson, discrepancy, effective_bound, effective_bound_variant, mixture_max_gap,
    prime_count_window, prime_ratio_bound, pushforward_max_gap, sqrt_absorption_bound,
    DensityKind, DEFAULT_GRID_ENDPOINTS,
};
use matrixpoints_core::engines::{
    elliptic_error, elliptic_matrix_count, k3_matrix_count, k3_supersingular_count,
    supersingular_elliptic_count,
};
use matrixpoints_core::oracle::{oracle_elliptic, oracle_k3, DEFAULT_BUDGET};
use matrixpoints_core::primes::{odd_primes_in, prime_count};
use num_bigint::BigInt;
use num_rational::Rational64;

/// Outcome of one suite: per-check lines plus the overall verdict.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub ok: bool,
    pub lines: Vec<String>,
}

/// CM test curve y^2 = x^3 + x, CM discriminant -4.
pub fn test_curve_cm() -> RationalCurveModel {
    RationalCurveModel::new(0, 0, 0, 1, 0)
        .expect("nonsingular model")
        .with_cm_discriminant(-4)
        .expect("valid discriminant")
}

/// Non-CM test curve y^2 = x^3 - 432x + 8208, conductor 11.
pub fn test_curve_generic() -> RationalCurveModel {
    RationalCurveModel::new(0, 0, 0, -432, 8208)
        .expect("nonsingular model")
        .with_conductor(11)
        .expect("valid conductor")
}

struct Suite {
    lines: Vec<String>,
    failures: usize,
}

impl Suite {
    fn new() -> Self {
        Suite { lines: Vec::new(), failures: 0 }
    }

    fn check(&mut self, ok: bool, msg: String) {
        if ok {
            self.lines.push(format!("ok   {msg}"));
        } else {
            self.failures += 1;
            self.lines.push(format!("FAIL {msg}"));
        }
    }

    fn note(&mut self, msg: String) {
        self.lines.push(format!("     {msg}"));
    }

    fn report(self, name: &str) -> SuiteReport {
        let mut lines = self.lines;
        let ok = self.failures == 0;
        lines.push(if ok {
            format!("suite {name}: PASS")
        } else {
            format!("suite {name}: FAIL ({} checks failed)", self.failures)
        });
        SuiteReport { name: name.to_string(), ok, lines }
    }
}

/// Runs one named suite; `None` means the name is unknown.
///
/// `nmax`/`pmax` override the per-suite defaults where they apply.
pub fn run_suite(name: &str, nmax: Option<u32>, pmax: Option<u64>) -> Option<SuiteReport> {
    match name {
        "lemmas" => Some(lemmas(nmax, pmax)),
        "formulas" => Some(formulas(nmax, pmax)),
        "oracle" => Some(oracle_suite(nmax, pmax)),
        "densities" => Some(densities()),
        _ => None,
    }
}

/// Explicit error-term bounds and the analytic-number-theory inequalities.
fn lemmas(nmax: Option<u32>, pmax: Option<u64>) -> SuiteReport {
    let nmax = nmax.unwrap_or(4).max(1);
    let pmax = pmax.unwrap_or(1000).max(3);
    let curves = [test_curve_cm(), test_curve_generic()];
    let mut s = Suite::new();

    let mut cases = 0u64;
    let mut violations = 0u64;
    let mut bracket_violations = 0u64;
    let mut max_rp = 0.0f64;
    let mut table = ChiTable::new(3);
    for &p in &odd_primes_in(3, pmax) {
        table.rebuild(p);
        for model in &curves {
            let curve = match reduce_curve(model, p) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let a = trace_with_table(&curve, &table);
            let frob = FrobeniusData::new(a, p, nmax as usize)
                .expect("point counts satisfy the trace bound");
            for n in 1..=nmax {
                let err = elliptic_error(n, &frob).expect("error decomposition");
                cases += 1;
                if !err.explicit_bounds().all_ok() {
                    violations += 1;
                }
                max_rp = max_rp.max(err.r_star.abs() * p as f64);
            }
        }
        // Bracket for the finite product (p^{-1}; p^{-1})_n, curve-free.
        let mut prod = 1.0f64;
        for i in 1..=nmax {
            prod *= 1.0 - (p as f64).powi(-(i as i32));
            if !(prod > 0.5601 && prod < 1.0) {
                bracket_violations += 1;
            }
        }
    }
    s.check(
        violations == 0,
        format!(
            "Q*, S*, T*, R* explicit bounds: {cases} (curve, n, p) cases, {violations} \
             violations (n <= {nmax}, p <= {pmax}, exact rational arithmetic)"
        ),
    );
    s.check(
        max_rp <= 14.1339,
        format!("max p|R*| observed {max_rp:.4} <= 14.1339"),
    );
    s.check(
        max_rp <= 14.15,
        format!("variant constant: max p|R*| observed {max_rp:.4} <= 14.15"),
    );
    s.check(
        bracket_violations == 0,
        format!(
            "0.5601 < (p^-1; p^-1)_n < 1: {bracket_violations} violations (n <= {nmax}, p <= {pmax})"
        ),
    );

    match effective_bound(11, 1e6) {
        Ok(b) => {
            let variant = effective_bound_variant(11, 1e6).expect("same domain");
            s.check(
                b > 0.0 && variant < b,
                format!(
                    "effective discrepancy bound at (N, X) = (11, 10^6): {b:.4} \
                     (variant constant gives {variant:.4})"
                ),
            );
        }
        Err(e) => s.check(false, format!("effective bound evaluation: {e}")),
    }
    match prime_count_window(1e4) {
        Ok((lo, hi)) => {
            let pi = prime_count(10_000) as f64;
            s.check(
                lo < pi && pi < hi,
                format!("pi(10^4) = {pi} inside Chebyshev-type window ({lo:.2}, {hi:.2})"),
            );
        }
        Err(e) => s.check(false, format!("prime count window: {e}")),
    }
    match prime_ratio_bound(17.0, 1e4) {
        Ok(bound) => {
            let ratio = prime_count(17) as f64 / prime_count(10_000) as f64;
            s.check(
                ratio <= bound,
                format!("pi(17)/pi(10^4) = {ratio:.6} <= ratio bound {bound:.6}"),
            );
        }
        Err(e) => s.check(false, format!("prime ratio bound: {e}")),
    }
    match sqrt_absorption_bound(11, 1e6) {
        Ok(rhs) => {
            let lhs = 1e-3;
            s.check(
                lhs <= rhs,
                format!("X^(-1/2) = {lhs:.3e} <= {rhs:.3e} at (N, X) = (11, 10^6)"),
            );
        }
        Err(e) => s.check(false, format!("sqrt absorption bound: {e}")),
    }
    s.report("lemmas")
}

/// Internal consistency of the counting formulas.
fn formulas(nmax: Option<u32>, pmax: Option<u64>) -> SuiteReport {
    let nmax = nmax.unwrap_or(4).max(1);
    let pmax = pmax.unwrap_or(100).max(3);
    let curves = [test_curve_cm(), test_curve_generic()];
    let mut s = Suite::new();
    let mut table = ChiTable::new(3);

    // n = 1: the matrix count collapses to the affine point count p - a.
    let mut collapse_cases = 0u64;
    let mut collapse_bad = 0u64;
    for &p in &odd_primes_in(3, pmax) {
        table.rebuild(p);
        for model in &curves {
            let curve = match reduce_curve(model, p) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let a = trace_with_table(&curve, &table);
            let frob = FrobeniusData::new(a, p, 1).expect("trace bound");
            let count = elliptic_matrix_count(1, &frob).expect("n = 1 count");
            collapse_cases += 1;
            if count.value != BigInt::from(p as i128 - a as i128) {
                collapse_bad += 1;
            }
        }
    }
    s.check(
        collapse_bad == 0,
        format!("n = 1 collapse N_1 = p - a: {collapse_cases} cases, {collapse_bad} mismatches"),
    );

    // Error decomposition identities (asserted inside the evaluator):
    // P_p(n, 0) - a_{E,n}(p) = N_n and a*_{E,n} = a/p + Q* + S* - T*.
    let mut identity_cases = 0u64;
    for &p in &odd_primes_in(3, pmax.min(60)) {
        table.rebuild(p);
        for model in &curves {
            let curve = match reduce_curve(model, p) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let frob = FrobeniusData::from_curve(&curve, nmax as usize).expect("trace bound");
            for n in 1..=nmax {
                elliptic_error(n, &frob).expect("identities hold exactly");
                identity_cases += 1;
            }
        }
    }
    s.check(
        identity_cases > 0,
        format!(
            "P_p(n, 0) - a_(E,n) = N_n and the starred decomposition: {identity_cases} cases \
             verified exactly"
        ),
    );

    // Supersingular closed form agrees with the eigenvalue formula at a = 0.
    let mut ss_cases = 0u64;
    let mut ss_bad = 0u64;
    for &p in &odd_primes_in(3, pmax.min(60)) {
        if p % 4 != 3 {
            continue;
        }
        let frob = FrobeniusData::new(0, p, nmax as usize).expect("a = 0 is within bounds");
        for n in 1..=nmax {
            let closed = supersingular_elliptic_count(n, p).expect("closed form");
            let full = elliptic_matrix_count(n, &frob).expect("eigenvalue formula");
            ss_cases += 1;
            if closed.value != full.value {
                ss_bad += 1;
            }
        }
    }
    s.check(
        ss_bad == 0,
        format!(
            "supersingular closed form vs eigenvalue formula: {ss_cases} cases, {ss_bad} \
             mismatches (a = 0, n <= {nmax})"
        ),
    );

    // K3 closed form at a = 0 agrees with the full rational sum.
    let mut k3_cases = 0u64;
    let mut k3_bad = 0u64;
    for &p in &odd_primes_in(3, pmax.min(13)) {
        for gamma in [1, -1] {
            let frob = FrobeniusData::new(0, p, nmax as usize).expect("a = 0 is within bounds");
            for n in 1..=nmax.min(3) {
                let closed = k3_supersingular_count(n, gamma, p).expect("closed form");
                let full = k3_matrix_count(n, &frob, gamma).expect("full sum");
                k3_cases += 1;
                if closed.value != full.value || closed.verdict != full.verdict {
                    k3_bad += 1;
                }
            }
        }
    }
    s.check(
        k3_bad == 0,
        format!(
            "K3 supersingular closed form vs full sum: {k3_cases} cases, {k3_bad} mismatches \
             (a = 0, gamma = +-1)"
        ),
    );

    // Frozen reference values.
    let n2p3 = supersingular_elliptic_count(2, 3).expect("reference").value;
    s.check(n2p3 == BigInt::from(99), format!("N_2 at p = 3, a = 0: {n2p3} (expected 99)"));
    let lam1 = K3Parameter::new(Rational64::new(1, 1)).expect("lambda = 1");
    for (p, expected) in [(3u64, "0"), (5, "3"), (7, "7/3")] {
        let curve = clausen_curve(&lam1, p).expect("good prime");
        let frob = FrobeniusData::from_curve(&curve, 1).expect("trace bound");
        let gamma = lam1.gamma(p).expect("good prime");
        let got = k3_matrix_count(1, &frob, gamma).expect("count");
        s.check(
            got.value.to_string() == expected,
            format!(
                "K3 n = 1 reference at lambda = 1, p = {p}: {} ({}), expected {expected}",
                got.value,
                got.verdict.as_str()
            ),
        );
    }
    s.report("formulas")
}

/// Brute-force cross-checks of both engines within the oracle's reach.
fn oracle_suite(nmax: Option<u32>, pmax: Option<u64>) -> SuiteReport {
    let nmax = nmax.unwrap_or(3).clamp(1, 3);
    let pmax = pmax.unwrap_or(97).max(3);
    let curves = [("y^2 = x^3 + x", test_curve_cm()), ("y^2 = x^3 - 432x + 8208", test_curve_generic())];
    let mut s = Suite::new();
    let mut table = ChiTable::new(3);

    // n = 1: exhaustive affine count against the character-sum trace.
    let mut n1_cases = 0u64;
    let mut n1_bad = 0u64;
    for &p in &odd_primes_in(3, pmax) {
        table.rebuild(p);
        for (_, model) in &curves {
            let curve = match reduce_curve(model, p) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let a = trace_with_table(&curve, &table);
            let got = oracle_elliptic(1, &curve, DEFAULT_BUDGET).expect("within budget").value;
            n1_cases += 1;
            if got != BigInt::from(p as i128 - a as i128) {
                n1_bad += 1;
            }
        }
    }
    s.check(
        n1_bad == 0,
        format!("elliptic n = 1 oracle vs trace: {n1_cases} cases, {n1_bad} mismatches (p <= {pmax})"),
    );

    // Matrix dimensions: oracle vs the eigenvalue formula.
    let mut mat_cases = 0u64;
    let mut mat_bad = 0u64;
    for &p in &odd_primes_in(3, pmax.min(13)) {
        table.rebuild(p);
        for (_, model) in &curves {
            let curve = match reduce_curve(model, p) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let frob = FrobeniusData::from_curve(&curve, 2).expect("trace bound");
            if nmax >= 2 {
                let formula = elliptic_matrix_count(2, &frob).expect("formula").value;
                let got = oracle_elliptic(2, &curve, DEFAULT_BUDGET).expect("within budget").value;
                mat_cases += 1;
                if formula != got {
                    mat_bad += 1;
                }
            }
        }
    }
    if nmax >= 3 {
        // One 3x3 case stays affordable: p = 3 enumerates 3^12 pairs.
        let curve = reduce_curve(&test_curve_cm(), 3).expect("good reduction");
        let frob = FrobeniusData::from_curve(&curve, 3).expect("trace bound");
        let formula = elliptic_matrix_count(3, &frob).expect("formula").value;
        let got = oracle_elliptic(3, &curve, DEFAULT_BUDGET).expect("within budget").value;
        mat_cases += 1;
        if formula != got {
            mat_bad += 1;
        }
    }
    s.check(
        mat_bad == 0,
        format!("elliptic matrix oracle vs formula: {mat_cases} cases, {mat_bad} mismatches (n <= {nmax})"),
    );

    // K3 comparison table. Disagreement is surfaced, not failed; the
    // parity invariant (point counts over F_p are even) is hard.
    let mut parity_bad = 0u64;
    let mut k3_rows = 0u64;
    let mut k3_agree = 0u64;
    s.note("K3 table: formula value and verdict vs exhaustive surface count".to_string());
    let lambdas = [
        Rational64::new(1, 1),
        Rational64::new(3, 1),
        Rational64::new(5, 1),
        Rational64::new(-4, 1),
        Rational64::new(1, 8),
    ];
    for lam in lambdas {
        let param = K3Parameter::new(lam).expect("valid lambda");
        for &p in &odd_primes_in(3, pmax.min(50)) {
            if param.is_bad_prime(p) {
                continue;
            }
            let curve = clausen_curve(&param, p).expect("good prime");
            let frob = FrobeniusData::from_curve(&curve, 2).expect("trace bound");
            let gamma = param.gamma(p).expect("good prime");
            let dims: &[u32] = if nmax >= 2 && p <= 7 { &[1, 2] } else { &[1] };
            for &n in dims {
                let formula = k3_matrix_count(n, &frob, gamma).expect("formula");
                let got = oracle_k3(n, &param, p, DEFAULT_BUDGET).expect("within budget").value;
                let agree = formula.value == num_rational::BigRational::from_integer(got.clone());
                k3_rows += 1;
                if agree {
                    k3_agree += 1;
                }
                if n == 1 && got.clone() % BigInt::from(2) != BigInt::from(0) {
                    parity_bad += 1;
                }
                s.note(format!(
                    "k3 lambda={lam} n={n} p={p} a={} gamma={gamma} formula={} verdict={} \
                     oracle={} agree={}",
                    frob.a,
                    formula.value,
                    formula.verdict.as_str(),
                    got,
                    if agree { "yes" } else { "no" },
                ));
            }
        }
    }
    s.check(
        parity_bad == 0,
        format!("K3 n = 1 oracle parity (counts are even): {parity_bad} violations"),
    );
    s.note(format!(
        "K3 formula vs oracle agreement: {k3_agree}/{k3_rows} rows (disagreement is reported, \
         not a suite failure)"
    ));

    // Budget refusal is part of the oracle contract.
    let curve97 = reduce_curve(&test_curve_cm(), 97).expect("good reduction");
    let refused = oracle_elliptic(2, &curve97, 1000).is_err();
    s.check(refused, "oracle refuses work beyond an explicit budget".to_string());

    s.report("oracle")
}

/// Density normalization, closed-form CDFs, and sampling diagnostics.
fn densities() -> SuiteReport {
    let mut s = Suite::new();

    for kind in DensityKind::ALL {
        let v = kind.integral_over_support();
        s.check(
            (v - 1.0).abs() <= 1e-6,
            format!("integral of {} over its support: {v:.9}", kind.name()),
        );
    }

    // Closed-form CDF vs direct quadrature on smooth interior intervals.
    let spans: [(DensityKind, f64, f64); 7] = [
        (DensityKind::Semicircle, -1.5, 0.7),
        (DensityKind::Arcsine, -1.2, 1.3),
        (DensityKind::B1, -0.9, 0.9),
        (DensityKind::B1, 1.1, 2.5),
        (DensityKind::B2, -0.8, 0.9),
        (DensityKind::B3, 1.1, 2.8),
        (DensityKind::B4, -0.9, 0.95),
    ];
    let mut cdf_bad = 0u32;
    for (kind, a, b) in spans {
        let direct = adaptive_simpson(&|t| kind.density(t), a, b, 1e-11);
        let closed = kind.cdf(b) - kind.cdf(a);
        if (direct - closed).abs() > 1e-7 {
            cdf_bad += 1;
        }
    }
    s.check(cdf_bad == 0, format!("closed-form CDF vs quadrature on {} spans: {cdf_bad} mismatches", spans.len()));

    let gap_b1 = mixture_max_gap(DensityKind::B1, DensityKind::B2, 1000);
    s.check(
        gap_b1 <= 1e-12,
        format!("b1 = (b2 + reflection)/2 mixture identity: max gap {gap_b1:.3e}"),
    );
    let gap_b3 = mixture_max_gap(DensityKind::B3, DensityKind::B4, 1000);
    s.check(
        gap_b3 <= 1e-12,
        format!("b3 = (b4 + reflection)/2 mixture identity: max gap {gap_b3:.3e}"),
    );
    let push_sc = pushforward_max_gap(DensityKind::Semicircle, DensityKind::B2, 2000);
    s.check(
        push_sc <= 1e-9,
        format!("t -> t^2 - 1 pushforward semicircle -> b2: max relative gap {push_sc:.3e}"),
    );
    let push_as = pushforward_max_gap(DensityKind::Arcsine, DensityKind::B4, 2000);
    s.check(
        push_as <= 1e-9,
        format!("t -> t^2 - 1 pushforward arcsine -> b4: max relative gap {push_as:.3e}"),
    );

    // Quantile samples of each law must have tiny discrepancy against it;
    // semicircle quantiles against the arcsine law must not.
    for kind in DensityKind::ALL {
        let samples = quantile_samples(kind, 2000);
        let d = discrepancy(&samples, kind, DEFAULT_GRID_ENDPOINTS).expect("valid samples");
        s.check(
            d < 0.01,
            format!("discrepancy of 2000 {} quantiles vs {}: {d:.5}", kind.name(), kind.name()),
        );
    }
    let sc = quantile_samples(DensityKind::Semicircle, 2000);
    let cross = discrepancy(&sc, DensityKind::Arcsine, DEFAULT_GRID_ENDPOINTS).expect("valid");
    s.check(
        cross > 0.05,
        format!("semicircle quantiles vs arcsine law separate: discrepancy {cross:.4}"),
    );
    s.report("densities")
}

/// Deterministic samples at the (i + 1/2)/count quantiles of `kind`,
/// found by bisecting the closed-form CDF.
pub fn quantile_samples(kind: DensityKind, count: usize) -> Vec<f64> {
    let (lo, hi) = kind.support();
    (0..count)
        .map(|i| {
            let target = (i as f64 + 0.5) / count as f64;
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if kind.cdf(m) < target {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nonsense", None, None).is_none());
    }

    #[test]
    fn densities_suite_passes() {
        let report = run_suite("densities", None, None).expect("known suite");
        assert!(report.ok, "{:#?}", report.lines);
    }

    #[test]
    fn formulas_suite_passes_quickly() {
        let report = run_suite("formulas", Some(3), Some(30)).expect("known suite");
        assert!(report.ok, "{:#?}", report.lines);
    }

    #[test]
    fn lemmas_suite_passes_quickly() {
        let report = run_suite("lemmas", Some(3), Some(200)).expect("known suite");
        assert!(report.ok, "{:#?}", report.lines);
    }

    #[test]
    fn oracle_suite_surfaces_k3_disagreement_without_failing() {
        let report = run_suite("oracle", Some(2), Some(13)).expect("known suite");
        assert!(report.ok, "{:#?}", report.lines);
        // The lambda = 1, p = 5 row is the canonical formula/oracle split:
        // the rational sum gives 3 while the surface count is 12.
        assert!(
            report
                .lines
                .iter()
                .any(|l| l.contains("lambda=1 n=1 p=5") && l.contains("agree=no")),
            "expected at least one disagreement row: {:#?}",
            report.lines
        );
    }
}

//! Parallel prime sweeps producing one normalized-error record per good
//! prime and per task.
//!
//! A batch of tasks shares a single pass over the odd primes up to the
//! sweep bound, so the quadratic-residue table for each prime is built
//! once and reused by every curve in the batch.

use matrixpoints_core::curves::{
    clausen_curve, reduce_curve, splits, trace_with_table, ChiTable, FrobeniusData, K3Parameter,
    RationalCurveModel,
};
use matrixpoints_core::dist::SweepRecord;
use matrixpoints_core::engines::{elliptic_error, k3_star_error};
use matrixpoints_core::primes::odd_primes_in;
use rayon::prelude::*;

/// One sweep job. Several jobs can ride the same prime pass.
#[derive(Debug, Clone)]
pub enum SweepTask {
    /// Normalized n-dimensional error a*_{E,n}(p) for an elliptic curve,
    /// with the split/inert flag taken against `cm_disc` when present.
    Elliptic {
        model: RationalCurveModel,
        n: u32,
        cm_disc: Option<i64>,
    },
    /// Normalized error A*_lambda(p) for the K3 member at `param`; the
    /// split flag comes from the parameter's CM field when it has one.
    K3 { param: K3Parameter, n: u32 },
}

/// A prime a task could not process, with the reason it was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPrime {
    pub task: usize,
    pub p: u64,
    pub reason: String,
}

/// Worker count: `MATRIXPOINTS_THREADS` when set to a positive integer,
/// otherwise the machine's available parallelism.
pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("MATRIXPOINTS_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

enum Outcome {
    Record(SweepRecord),
    Skip(String),
}

fn run_elliptic(
    model: &RationalCurveModel,
    n: u32,
    cm_disc: Option<i64>,
    p: u64,
    table: &ChiTable,
) -> Outcome {
    let curve = match reduce_curve(model, p) {
        Ok(c) => c,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let a = trace_with_table(&curve, table);
    let frob = match FrobeniusData::new(a, p, n as usize) {
        Ok(f) => f,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let err = match elliptic_error(n, &frob) {
        Ok(e) => e,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    // Ramified primes carry neither flag; the split column stays empty.
    let split = cm_disc.and_then(|d| splits(p, d).ok());
    Outcome::Record(SweepRecord {
        p,
        a,
        supersingular: a == 0,
        split,
        star_error: err.a_en_star,
        r_star: Some(err.r_star),
    })
}

fn run_k3(param: &K3Parameter, p: u64, table: &ChiTable) -> Outcome {
    if param.is_bad_prime(p) {
        return Outcome::Skip(format!("bad prime for lambda = {}", param.lambda()));
    }
    let curve = match clausen_curve(param, p) {
        Ok(c) => c,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let a = trace_with_table(&curve, table);
    let gamma = match param.gamma(p) {
        Ok(g) => g,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let star = match k3_star_error(a, gamma, p) {
        Ok(s) => s,
        Err(e) => return Outcome::Skip(e.to_string()),
    };
    let split = param.cm_discriminant().and_then(|d| splits(p, d).ok());
    Outcome::Record(SweepRecord {
        p,
        a,
        supersingular: a == 0,
        split,
        star_error: star,
        r_star: None,
    })
}

fn run_task(task: &SweepTask, p: u64, table: &ChiTable) -> Outcome {
    match task {
        SweepTask::Elliptic { model, n, cm_disc } => run_elliptic(model, *n, *cm_disc, p, table),
        SweepTask::K3 { param, .. } => run_k3(param, p, table),
    }
}

/// Runs every task over all odd primes 3 <= p <= xmax in one shared pass.
///
/// Returns one record vector per task (ascending p, skipped primes
/// absent) plus the combined skip log. Output is deterministic for a
/// fixed task list and bound regardless of worker count.
pub fn sweep_batch(tasks: &[SweepTask], xmax: u64) -> (Vec<Vec<SweepRecord>>, Vec<SkippedPrime>) {
    let primes = odd_primes_in(3, xmax);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .expect("thread pool construction succeeds");
    // map_init gives each worker a private residue table that is rebuilt
    // per prime; collect preserves the ascending prime order.
    let per_prime: Vec<Vec<Outcome>> = pool.install(|| {
        primes
            .par_iter()
            .map_init(
                || ChiTable::new(3),
                |table, &p| {
                    table.rebuild(p);
                    tasks.iter().map(|t| run_task(t, p, table)).collect()
                },
            )
            .collect()
    });

    let mut records: Vec<Vec<SweepRecord>> = vec![Vec::new(); tasks.len()];
    let mut skipped = Vec::new();
    for (outcomes, &p) in per_prime.into_iter().zip(primes.iter()) {
        for (task, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Outcome::Record(r) => records[task].push(r),
                Outcome::Skip(reason) => skipped.push(SkippedPrime { task, p, reason }),
            }
        }
    }
    (records, skipped)
}

/// Single-task elliptic sweep; see [`sweep_batch`].
pub fn sweep_elliptic(
    model: &RationalCurveModel,
    n: u32,
    xmax: u64,
    cm_disc: Option<i64>,
) -> (Vec<SweepRecord>, Vec<SkippedPrime>) {
    let tasks = [SweepTask::Elliptic {
        model: model.clone(),
        n,
        cm_disc,
    }];
    let (mut records, skipped) = sweep_batch(&tasks, xmax);
    (records.pop().expect("one task"), skipped)
}

/// Single-task K3 sweep; see [`sweep_batch`].
pub fn sweep_k3(param: &K3Parameter, n: u32, xmax: u64) -> (Vec<SweepRecord>, Vec<SkippedPrime>) {
    let tasks = [SweepTask::K3 { param: *param, n }];
    let (mut records, skipped) = sweep_batch(&tasks, xmax);
    (records.pop().expect("one task"), skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrixpoints_core::primes::odd_primes_in;

    fn cm_model() -> RationalCurveModel {
        RationalCurveModel::new(0, 0, 0, 1, 0)
            .expect("nonsingular")
            .with_cm_discriminant(-4)
            .expect("valid discriminant")
    }

    #[test]
    fn elliptic_sweep_matches_direct_traces() {
        let model = cm_model();
        let (records, skipped) = sweep_elliptic(&model, 1, 60, Some(-4));
        // p = 3 divides the discriminant -64? No: disc = -64, so only
        // p = 2 is bad and every odd prime to 60 appears.
        assert!(skipped.is_empty());
        let primes = odd_primes_in(3, 60);
        assert_eq!(records.len(), primes.len());
        for (r, &p) in records.iter().zip(primes.iter()) {
            assert_eq!(r.p, p);
            // y^2 = x^3 + x is supersingular exactly at p = 3 mod 4.
            assert_eq!(r.supersingular, p % 4 == 3, "p = {p}");
            assert_eq!(r.split, Some(p % 4 == 1), "p = {p}");
            let expected = r.a as f64 / (p as f64).sqrt();
            assert!((r.star_error - expected).abs() < 1e-12);
            assert_eq!(r.r_star, Some(0.0));
        }
    }

    #[test]
    fn k3_sweep_skips_bad_primes() {
        let param = K3Parameter::new(num_rational::Rational64::new(1, 8)).expect("valid lambda");
        let (records, skipped) = sweep_k3(&param, 2, 30, );
        // lambda = 1/8: bad primes are 2 (always), 2 (num/den), and
        // lambda + 1 = 9/8 vanishing at p = 3.
        assert_eq!(
            skipped.iter().map(|s| s.p).collect::<Vec<_>>(),
            vec![3],
            "{skipped:?}"
        );
        for r in &records {
            assert!(r.star_error.abs() < 3.0);
            assert!(r.r_star.is_none());
        }
        let ps: Vec<u64> = records.iter().map(|r| r.p).collect();
        assert_eq!(ps, vec![5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn batch_shares_one_prime_pass() {
        let model = cm_model();
        let param = K3Parameter::new(num_rational::Rational64::new(-4, 1)).expect("valid lambda");
        let tasks = [
            SweepTask::Elliptic {
                model: model.clone(),
                n: 2,
                cm_disc: Some(-4),
            },
            SweepTask::K3 { param, n: 2 },
        ];
        let (records, _) = sweep_batch(&tasks, 40);
        let (solo_e, _) = sweep_elliptic(&model, 2, 40, Some(-4));
        let (solo_k, _) = sweep_k3(&param, 2, 40);
        assert_eq!(records[0], solo_e);
        assert_eq!(records[1], solo_k);
    }
}

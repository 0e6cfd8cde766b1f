//! Closed-form bounds behind the `n^{1+ε}` argument: the unit-equation
//! solution bound `A(k, r)` in log form, the ε inequality, the optimal path
//! length window, and a brute-force solution counter for explicit groups.
//!
//! `A(k, r) = (8k)^{4k⁴(k + kr + 1)}` overflows every fixed-width type for
//! `k >= 2`, so it only ever appears as `log₂ A`.

mod cyclotomic;
mod lambert;
mod unit_equation;

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

pub use cyclotomic::{Cyclo12, GaussRational};
pub use lambert::lambert_w;
pub use unit_equation::{
    enumerate_nondegenerate, no_vanishing_subsum, solution_count_check, GroupSpec, NondegenerateSolutions,
    SolutionCountCheck, UnitEquationError, ENUMERATION_BUDGET, MAX_HEIGHT, MAX_TERMS,
};

/// Path lengths scanned when minimising the ε bound.
pub const K_SCAN: RangeInclusive<u64> = 2..=64;

/// Window constants `c'`, `c''` for `c₂ = 1`, frozen from
/// [`calibrate_window`] over [`calibration_grid`] (rounded outward).
pub const DEFAULT_C_LO: f64 = 0.50;
pub const DEFAULT_C_HI: f64 = 2.24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("path length k = {0} needs log k > 0, use k >= 2")]
    PathTooShort(u64),
    #[error("log n = {0} must be positive")]
    NonPositiveLogN(f64),
    #[error("rank must be at least 1 for the path-length window")]
    ZeroRank,
    #[error("epsilon = {0} must be positive")]
    NonPositiveEpsilon(f64),
}

/// `log₂ A(k, r) = 4k⁴(k + kr + 1)·log₂(8k)`.
pub fn log2_a(k: u64, r: u64) -> f64 {
    let kf = k as f64;
    4.0 * kf.powi(4) * (kf + kf * r as f64 + 1.0) * (8.0 * kf).log2()
}

fn check_log_n(log_n: f64) -> Result<(), BoundsError> {
    if log_n > 0.0 {
        Ok(())
    } else {
        Err(BoundsError::NonPositiveLogN(log_n))
    }
}

/// `5rk⁴ log k / log n + 3/(2k)`, natural logs.
pub fn epsilon_rhs(k: u64, r: u64, log_n: f64) -> Result<f64, BoundsError> {
    if k < 2 {
        return Err(BoundsError::PathTooShort(k));
    }
    check_log_n(log_n)?;
    let kf = k as f64;
    Ok(5.0 * r as f64 * kf.powi(4) * kf.ln() / log_n + 3.0 / (2.0 * kf))
}

/// Path count requirement `2^k <= n^ε / 2`, i.e. `k < ε log n / log 2 − 1`.
pub fn feasible_k(k: u64, epsilon: f64, log_n: f64) -> bool {
    (k as f64) < epsilon * log_n / std::f64::consts::LN_2 - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowConstants {
    pub c2: f64,
    pub c_lo: f64,
    pub c_hi: f64,
}

impl Default for WindowConstants {
    fn default() -> Self {
        Self {
            c2: 1.0,
            c_lo: DEFAULT_C_LO,
            c_hi: DEFAULT_C_HI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KWindow {
    pub k_star: f64,
    pub k_lo: f64,
    pub k_hi: f64,
    pub in_window: bool,
}

/// `k* = exp(W(5c₂ log n / r) / 5)` and the window `c'(log n/r)^{1/5} ..
/// c''(log n/r)^{1/5}` with the default `c'`, `c''`.
pub fn optimal_k_window(log_n: f64, r: u64, c2: f64) -> Result<KWindow, BoundsError> {
    optimal_k_window_with(
        log_n,
        r,
        &WindowConstants {
            c2,
            ..WindowConstants::default()
        },
    )
}

pub fn optimal_k_window_with(log_n: f64, r: u64, consts: &WindowConstants) -> Result<KWindow, BoundsError> {
    check_log_n(log_n)?;
    if r == 0 {
        return Err(BoundsError::ZeroRank);
    }
    let ratio = log_n / r as f64;
    let k_star = (lambert_w(5.0 * consts.c2 * ratio) / 5.0).exp();
    let scale = ratio.powf(0.2);
    let (k_lo, k_hi) = (consts.c_lo * scale, consts.c_hi * scale);
    Ok(KWindow {
        k_star,
        k_lo,
        k_hi,
        in_window: k_lo <= k_star && k_star <= k_hi,
    })
}

/// Integer `k` in `ks` minimising [`epsilon_rhs`]; ties go to the smaller `k`.
pub fn argmin_epsilon_rhs(r: u64, log_n: f64, ks: RangeInclusive<u64>) -> Result<(u64, f64), BoundsError> {
    let mut best: Option<(u64, f64)> = None;
    for k in ks {
        let v = epsilon_rhs(k, r, log_n)?;
        if best.is_none_or(|(_, b)| v < b) {
            best = Some((k, v));
        }
    }
    best.ok_or(BoundsError::PathTooShort(0))
}

/// `(log n, r)` pairs the window constants are fitted on: `n = 10², …, 10¹²`
/// plus `log n ∈ {100, 1000}`, each with `r = 1..=8`.
pub fn calibration_grid() -> Vec<(f64, u64)> {
    let log_ns = (2..=12)
        .map(|j| (10f64).powi(j).ln())
        .chain([100.0, 1000.0]);
    log_ns.flat_map(|l| (1..=8).map(move |r| (l, r))).collect()
}

/// Smallest and largest `k / (log n / r)^{1/5}` over the grid, for both `k*`
/// at `c₂ = 1` and the scanned minimiser of the ε bound.
pub fn calibrate_window(grid: &[(f64, u64)]) -> Result<(f64, f64), BoundsError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(log_n, r) in grid {
        let scale = (log_n / r as f64).powf(0.2);
        let k_star = optimal_k_window(log_n, r, 1.0)?.k_star;
        let (k_opt, _) = argmin_epsilon_rhs(r, log_n, K_SCAN)?;
        for k in [k_star, k_opt as f64] {
            lo = lo.min(k / scale);
            hi = hi.max(k / scale);
        }
    }
    Ok((lo, hi))
}

/// Both sides of `k log 4 + 4k⁴(k + kr + 1) log(8k) <= 5rk⁵ log k`, the step
/// that folds the path-count terms into a single power of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Absorption {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn absorption_check(k: u64, r: u64) -> Absorption {
    let kf = k as f64;
    let lhs = kf * 4f64.ln() + 4.0 * kf.powi(4) * (kf + kf * r as f64 + 1.0) * (8.0 * kf).ln();
    let rhs = 5.0 * r as f64 * kf.powi(5) * kf.ln();
    Absorption {
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub k: u64,
    pub r: u64,
    pub n: u64,
    pub log2_a: f64,
    pub epsilon_rhs: f64,
    pub k_star: Option<f64>,
    pub feasible_k: bool,
}

/// One row per `k` in `ks` (each `k >= 2`) for a fixed `(r, n, ε)`.
pub fn bound_rows(n: u64, r: u64, epsilon: f64, ks: RangeInclusive<u64>) -> Result<Vec<BoundRow>, BoundsError> {
    if epsilon <= 0.0 {
        return Err(BoundsError::NonPositiveEpsilon(epsilon));
    }
    let log_n = (n as f64).ln();
    let k_star = if r == 0 {
        None
    } else {
        Some(optimal_k_window(log_n, r, 1.0)?.k_star)
    };
    ks.map(|k| {
        Ok(BoundRow {
            k,
            r,
            n,
            log2_a: log2_a(k, r),
            epsilon_rhs: epsilon_rhs(k, r, log_n)?,
            k_star,
            feasible_k: feasible_k(k, epsilon, log_n),
        })
    })
    .collect()
}

pub fn rows_to_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("k,r,n,log2_A,epsilon_rhs,k_star,feasible_k\n");
    for row in rows {
        let k_star = row.k_star.map(|k| k.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.k, row.r, row.n, row.log2_a, row.epsilon_rhs, k_star, row.feasible_k
        )
        .unwrap();
    }
    out
}

/// The largest `c` such that every rank `r < c log n` admits some feasible
/// `k` in [`K_SCAN`] with `epsilon_rhs(k, r, n) <= ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankConstant {
    pub c: f64,
    pub max_rank: u64,
}

pub fn largest_rank_constant(epsilon: f64, log_n: f64) -> Result<Option<RankConstant>, BoundsError> {
    if epsilon <= 0.0 {
        return Err(BoundsError::NonPositiveEpsilon(epsilon));
    }
    check_log_n(log_n)?;
    let verifies = |r: u64| -> Result<bool, BoundsError> {
        for k in K_SCAN.filter(|&k| feasible_k(k, epsilon, log_n)) {
            if epsilon_rhs(k, r, log_n)? <= epsilon {
                return Ok(true);
            }
        }
        Ok(false)
    };
    if !verifies(0)? {
        return Ok(None);
    }
    // the bound grows with r, so the good ranks form an initial segment
    let (mut good, mut bad) = (0u64, 1u64);
    while verifies(bad)? {
        good = bad;
        bad *= 2;
    }
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if verifies(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(Some(RankConstant {
        c: (good + 1) as f64 / log_n,
        max_rank: good,
    }))
}

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use udl_core::bounds::{self, Absorption, GaussRational, GroupSpec};
use udl_core::config::{self, build_config, choose_params, ConfigParams, RankWindow};
use udl_core::gaussian::{self, GaussInt};
use udl_core::numtheory::{APClass, ChebyshevKind, PrimeTable};
use udl_core::paths;
use udl_core::udgraph::{self, DegreeSummary, UnitDistanceGraph};

use crate::CliError;

pub const MAX_K: usize = 6;
/// Start vertices sampled for the per-start lower bound.
pub const SAMPLED_STARTS: usize = 50;
/// Largest `n` for which the all-pairs edge oracle runs.
pub const EDGE_ORACLE_MAX_N: u64 = 10_000;
const CHEBYSHEV_X: u64 = 1_000_000;
const LAMBERT_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub step_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: &'static str,
    pub pass: bool,
}

impl BoundCheck {
    fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation: "<=",
            pass: lhs <= rhs,
        }
    }

    fn eq(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            relation: "==",
            pass: lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStats {
    pub k: usize,
    pub sampled_starts: usize,
    pub min_count: u64,
    pub lower_bound: u64,
    pub max_pair_count: u64,
    pub total_paths: u64,
    pub projected_steps: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub params: ConfigParams,
    pub edge_count: usize,
    pub degree_summary: DegreeSummary,
    pub peeled: DegreeSummary,
    pub rank_window: Option<RankWindow>,
    pub path_stats: Vec<PathStats>,
    pub bound_checks: Vec<BoundCheck>,
    /// Both sides of the absorption step for each `k`; informational only.
    pub absorption: Vec<Absorption>,
    /// Checks that are undefined for these parameters.
    pub skipped: Vec<String>,
    pub seed: u64,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.bound_checks.iter().all(|c| c.pass)
    }
}

pub fn verify_all(n: u64, k_max: usize, opts: &VerifyOptions) -> Result<RunReport, CliError> {
    if n < 4 {
        return Err(CliError::Usage(format!("verify needs n >= 4, got {n}")));
    }
    if k_max > MAX_K {
        return Err(CliError::Usage(format!("--k-max is at most {MAX_K}, got {k_max}")));
    }
    let params = choose_params(n)?;
    let rank = params.group_rank() as u64;
    let points = build_config(&params);
    let g = udgraph::build_graph(&points, params.m)?;
    let h = udgraph::peel(&g, udgraph::default_peel_threshold(&g));
    let mut checks = Vec::new();
    let mut skipped = Vec::new();

    check_representations(&params, &mut checks)?;
    check_edges(&params, &g, &mut checks, &mut skipped);
    check_membership(&params, &g, &mut checks, &mut skipped)?;

    let rank_window = config::rank_bounds(n).ok();
    match rank_window {
        Some(w) => {
            checks.push(BoundCheck::le("rank_lower", w.low, params.r as f64));
            checks.push(BoundCheck::le("rank_upper", params.r as f64, w.high));
        }
        None => skipped.push("rank_window".into()),
    }
    let (theta, log_budget) = config::theta_budget(&params);
    checks.push(BoundCheck {
        pass: 4 * params.m <= n,
        ..BoundCheck::le("theta_budget", theta, log_budget)
    });

    check_peel(&g, &h, &mut checks);
    let path_stats = check_paths(&h, rank, k_max, opts, &mut checks, &mut skipped)?;

    match bounds::optimal_k_window((n as f64).ln(), rank, 1.0) {
        Ok(w) => {
            checks.push(BoundCheck::le("k_window_lower", w.k_lo, w.k_star));
            checks.push(BoundCheck::le("k_window_upper", w.k_star, w.k_hi));
        }
        Err(_) => skipped.push("k_window".into()),
    }
    check_chebyshev(&mut checks);
    check_lambert(opts.seed, &mut checks);
    check_unit_equation(&mut checks)?;

    let absorption = (2..=k_max.max(2) as u64).map(|k| bounds::absorption_check(k, rank)).collect();
    Ok(RunReport {
        params,
        edge_count: g.edge_count(),
        degree_summary: udgraph::degree_summary(&g),
        peeled: udgraph::degree_summary(&h),
        rank_window,
        path_stats,
        bound_checks: checks,
        absorption,
        skipped,
        seed: opts.seed,
    })
}

fn check_representations(params: &ConfigParams, checks: &mut Vec<BoundCheck>) -> Result<(), CliError> {
    let reps = if params.primes.is_empty() {
        gaussian::lattice_points_on_circle(1).into_iter().collect()
    } else {
        gaussian::representations(&params.primes)?
    };
    let expected = 1u64 << (params.r + 1);
    checks.push(BoundCheck::eq("representation_count", reps.len() as f64, expected as f64));
    let direct: BTreeSet<GaussInt> = gaussian::lattice_points_on_circle(params.m).into_iter().collect();
    let mismatched = reps.symmetric_difference(&direct).count();
    checks.push(BoundCheck::eq("representations_match_search", mismatched as f64, 0.0));
    Ok(())
}

fn check_edges(params: &ConfigParams, g: &UnitDistanceGraph, checks: &mut Vec<BoundCheck>, skipped: &mut Vec<String>) {
    let e = g.edge_count() as f64;
    let n = params.n as f64;
    checks.push(BoundCheck::le(
        "edges_lower",
        n * (1u64 << (params.r - 1)) as f64 / 16.0,
        e,
    ));
    checks.push(BoundCheck::le("edges_upper", e, (1u64 << (params.r + 3)) as f64 * n));
    if params.n <= EDGE_ORACLE_MAX_N {
        checks.push(BoundCheck::eq("edges_all_pairs", e, all_pairs_edges(g) as f64));
    } else {
        skipped.push("edges_all_pairs".into());
    }
}

fn all_pairs_edges(g: &UnitDistanceGraph) -> usize {
    let pts = g.points().points();
    let m = g.m();
    let mut count = 0;
    for (i, &p) in pts.iter().enumerate() {
        count += pts[i + 1..].iter().filter(|&&q| (q - p).norm() == m).count();
    }
    count
}

fn check_membership(
    params: &ConfigParams,
    g: &UnitDistanceGraph,
    checks: &mut Vec<BoundCheck>,
    skipped: &mut Vec<String>,
) -> Result<(), CliError> {
    let gens = match config::generators(params) {
        Ok(gens) => gens,
        Err(_) => {
            skipped.push("edge_directions_in_group".into());
            return Ok(());
        }
    };
    let directions: BTreeSet<GaussInt> = g
        .edges()
        .flat_map(|(u, v)| {
            let d = g.point(v) - g.point(u);
            [d, -d]
        })
        .collect();
    let verified = directions
        .iter()
        .filter(|&&d| config::verify_edge_in_group(d, &gens).is_ok())
        .count();
    checks.push(BoundCheck::eq(
        "edge_directions_in_group",
        verified as f64,
        directions.len() as f64,
    ));
    Ok(())
}

fn check_peel(g: &UnitDistanceGraph, h: &UnitDistanceGraph, checks: &mut Vec<BoundCheck>) {
    let threshold = udgraph::default_peel_threshold(g);
    let peeled = udgraph::degree_summary(h);
    if peeled.vertex_count > 0 {
        checks.push(BoundCheck::le("peel_min_degree", threshold, peeled.min_degree as f64));
    }
    let removed = (g.edge_count() - h.edge_count()) as f64;
    let cap = g.vertex_count() as f64 * threshold;
    checks.push(BoundCheck {
        pass: removed == 0.0 || removed < cap,
        relation: "<",
        ..BoundCheck::le("peel_edges_removed", removed, cap)
    });
}

fn check_paths(
    h: &UnitDistanceGraph,
    rank: u64,
    k_max: usize,
    opts: &VerifyOptions,
    checks: &mut Vec<BoundCheck>,
    skipped: &mut Vec<String>,
) -> Result<Vec<PathStats>, CliError> {
    if h.vertex_count() == 0 {
        skipped.push("paths".into());
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let amount = SAMPLED_STARTS.min(h.vertex_count());
    let mut starts = index::sample(&mut rng, h.vertex_count(), amount).into_vec();
    starts.sort_unstable();
    let all: Vec<usize> = (0..h.vertex_count()).collect();
    let delta = udgraph::degree_summary(h).min_degree as u64;

    let mut spent: u128 = 0;
    let mut stats = Vec::new();
    for k in 1..=k_max {
        let projected = paths::projected_steps(h, &starts, k) + paths::projected_steps(h, &all, k);
        spent += projected;
        if spent > opts.step_budget as u128 {
            return Err(paths::PathError::BudgetExceeded {
                projected: spent,
                budget: opts.step_budget,
            }
            .into());
        }
        let counts = paths::counts_from(h, &starts, k)?;
        let min_count = counts.iter().map(|c| c.count).min().unwrap_or(0);
        let lower_bound = paths::path_count_lower_bound(delta, k);
        checks.push(BoundCheck::le(
            format!("path_lower_bound_k{k}"),
            lower_bound as f64,
            min_count as f64,
        ));
        let best = paths::max_pair_count(h, k)?;
        // an empty path family is vacuously within the bound
        let log_count = (best.count().max(1) as f64).log2();
        checks.push(BoundCheck::le(
            format!("pair_count_k{k}"),
            log_count,
            bounds::log2_a(k as u64, rank),
        ));
        stats.push(PathStats {
            k,
            sampled_starts: starts.len(),
            min_count,
            lower_bound,
            max_pair_count: best.count(),
            total_paths: best.total.count,
            projected_steps: projected,
        });
    }
    Ok(stats)
}

fn check_chebyshev(checks: &mut Vec<BoundCheck>) {
    let table = PrimeTable::new(CHEBYSHEV_X);
    let cls = APClass::new(4, 1).expect("1 mod 4 is a class");
    let theta = table.chebyshev(ChebyshevKind::Theta, CHEBYSHEV_X, cls);
    let psi = table.chebyshev(ChebyshevKind::Psi, CHEBYSHEV_X, cls);
    checks.push(BoundCheck::le(
        "theta_1mod4_density",
        (theta * 2.0 / CHEBYSHEV_X as f64 - 1.0).abs(),
        0.1,
    ));
    checks.push(BoundCheck::le("psi_over_theta_1mod4", (psi / theta - 1.0).abs(), 0.01));
}

fn check_lambert(seed: u64, checks: &mut Vec<BoundCheck>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5745_5f52_4553_4944);
    let worst = (0..LAMBERT_SAMPLES)
        .map(|_| {
            let x = 10f64.powf(rng.gen_range(-3.0..12.0));
            let w = bounds::lambert_w(x);
            (w * w.exp() - x).abs() / x.max(1.0)
        })
        .fold(0.0, f64::max);
    checks.push(BoundCheck::le("lambert_w_residual", worst, 1e-12));
}

fn check_unit_equation(checks: &mut Vec<BoundCheck>) -> Result<(), CliError> {
    let group = GroupSpec::new(2, vec![GaussRational::int(2, 0)])?;
    let coeffs = [GaussRational::int(1, 0), GaussRational::int(1, 0)];
    let sols = bounds::enumerate_nondegenerate(&coeffs, &group, 2)?;
    checks.push(BoundCheck::eq("unit_equation_example", sols.count as f64, 3.0));
    let c = bounds::solution_count_check(&sols, 2, group.rank());
    checks.push(BoundCheck::le("unit_equation_count", c.log2_count, c.log2_bound));
    Ok(())
}

//! Erdős' grid configuration: an `⌊√n⌋ × ⌊√n⌋` integer grid whose "unit"
//! distance is `√m`, with `m` the product of the first `r − 1` primes
//! `= 1 (mod 4)` and `4m <= n`.
//!
//! Geometry stays in integer grid units throughout; the `1/√m` rescaling that
//! turns `√m` into a unit distance is never carried out.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::gaussian::{factor_over, isqrt, two_squares_prime, GaussInt, Unit};
use crate::numtheory::{first_primes_one_mod_four, APClass, ChebyshevKind, PrimeTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("n = {0} is too small, the configuration needs n >= 4")]
    TooFewPoints(u64),
    #[error("rank parameter r = {0} has no free generators")]
    NoFreeGenerators(usize),
    #[error("rank window needs n >= 16 so that log log n > 0, got {0}")]
    RankWindowUndefined(u64),
    #[error("vector {v} has norm {norm}, expected {m}")]
    NormMismatch { v: GaussInt, norm: u64, m: u64 },
    #[error("vector {0} does not factor over the generators")]
    NotInGroup(GaussInt),
    #[error("vector {0} factors over more than one generator selection")]
    AmbiguousFactorization(GaussInt),
    #[error("duplicate point {0}")]
    DuplicatePoint(GaussInt),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigParams {
    pub n: u64,
    pub r: usize,
    pub m: u64,
    pub primes: Vec<u64>,
    pub side: u64,
}

impl ConfigParams {
    /// Rank of the group generated by the configuration's directions.
    pub fn group_rank(&self) -> usize {
        self.r - 1
    }
}

/// Picks the largest `r` with `4·p₁⋯p_{r−1} <= n`.
pub fn choose_params(n: u64) -> Result<ConfigParams, ConfigError> {
    if n < 4 {
        return Err(ConfigError::TooFewPoints(n));
    }
    let mut primes = Vec::new();
    let mut m = 1u64;
    let mut candidates = first_primes_one_mod_four(16).into_iter();
    loop {
        let p = candidates.next().expect("n fits in u64, so fewer than 16 primes are used");
        match m.checked_mul(p).and_then(|next| next.checked_mul(4)) {
            Some(bound) if bound <= n => {
                m *= p;
                primes.push(p);
            }
            _ => break,
        }
    }
    Ok(ConfigParams {
        n,
        r: primes.len() + 1,
        m,
        primes,
        side: isqrt(n),
    })
}

/// A finite set of lattice points, kept in lexicographic `(x, y)` order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointSet {
    points: Vec<GaussInt>,
}

impl PointSet {
    pub fn new(mut points: Vec<GaussInt>) -> Result<Self, ConfigError> {
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(ConfigError::DuplicatePoint(w[0]));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[GaussInt] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One `x y` line per point.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.points.len() * 8);
        for p in &self.points {
            writeln!(out, "{} {}", p.a, p.b).unwrap();
        }
        out
    }

    /// Parses the `x y`-per-line format. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut points = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError::Parse {
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!("expected 2 integers, found {}", fields.len())));
            }
            let coord = |s: &str| s.parse::<i64>().map_err(|e| err(format!("{s:?}: {e}")));
            let p = GaussInt::new(coord(fields[0])?, coord(fields[1])?);
            if !seen.insert(p) {
                return Err(ConfigError::DuplicatePoint(p));
            }
            points.push(p);
        }
        Self::new(points)
    }
}

pub fn build_config(params: &ConfigParams) -> PointSet {
    grid(params.side)
}

/// The `side × side` grid `{0..side}²`.
pub fn grid(side: u64) -> PointSet {
    let side = side as i64;
    let points = (0..side)
        .flat_map(|x| (0..side).map(move |y| GaussInt::new(x, y)))
        .collect();
    PointSet { points }
}

/// Conjugate generator pairs `(x_j + i y_j, x_j − i y_j)`, one per prime, all
/// scaled by `m^{scale_exponent}` with `scale_exponent = −1/(2r − 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub primes: Vec<u64>,
    pub pairs: Vec<(GaussInt, GaussInt)>,
    #[serde(serialize_with = "serialize_ratio")]
    pub scale_exponent: Rational64,
}

fn serialize_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl GeneratorSet {
    pub fn rank_bound(&self) -> usize {
        self.pairs.len()
    }

    pub fn m(&self) -> u64 {
        self.primes.iter().product()
    }
}

pub fn generators(params: &ConfigParams) -> Result<GeneratorSet, ConfigError> {
    if params.r < 2 {
        return Err(ConfigError::NoFreeGenerators(params.r));
    }
    let pairs = params
        .primes
        .iter()
        .map(|&p| {
            let (x, y) = two_squares_prime(p).expect("configuration primes are 1 mod 4");
            let z = GaussInt::new(x as i64, y as i64);
            (z, z.conj())
        })
        .collect();
    Ok(GeneratorSet {
        primes: params.primes.clone(),
        pairs,
        scale_exponent: Rational64::new(-1, 2 * params.r as i64 - 2),
    })
}

/// Which member of each conjugate pair divides an edge vector, plus the
/// leftover unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSelection {
    /// `true` where the conjugate `(x_j, −y_j)` was chosen.
    pub conjugated: Vec<bool>,
    pub factors: Vec<GaussInt>,
    pub unit: Unit,
}

/// Factors `v` over every selection of one generator per conjugate pair and
/// requires exactly one selection to succeed.
pub fn verify_edge_in_group(v: GaussInt, gens: &GeneratorSet) -> Result<EdgeSelection, ConfigError> {
    let m = gens.m();
    if v.norm() != m {
        return Err(ConfigError::NormMismatch { v, norm: v.norm(), m });
    }
    let t = gens.pairs.len();
    let mut found: Option<EdgeSelection> = None;
    for mask in 0u64..1 << t {
        let conjugated: Vec<bool> = (0..t).map(|j| mask >> j & 1 == 1).collect();
        let atoms: Vec<GaussInt> = gens
            .pairs
            .iter()
            .zip(&conjugated)
            .map(|(&(z, w), &c)| if c { w } else { z })
            .collect();
        if let Some(f) = factor_over(v, &atoms) {
            if found.is_some() {
                return Err(ConfigError::AmbiguousFactorization(v));
            }
            found = Some(EdgeSelection {
                conjugated,
                factors: f.factors,
                unit: f.unit,
            });
        }
    }
    found.ok_or(ConfigError::NotInGroup(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankWindow {
    pub low: f64,
    pub high: f64,
}

impl RankWindow {
    pub fn contains(&self, r: f64) -> bool {
        self.low <= r && r <= self.high
    }
}

/// `(log n / (3 log log n), 16 log n / log log n)` in natural logs.
pub fn rank_bounds(n: u64) -> Result<RankWindow, ConfigError> {
    if n < 16 {
        return Err(ConfigError::RankWindowUndefined(n));
    }
    let log_n = (n as f64).ln();
    let log_log_n = log_n.ln();
    Ok(RankWindow {
        low: log_n / (3.0 * log_log_n),
        high: 16.0 * log_n / log_log_n,
    })
}

/// `(ϑ_{4,1}(p_{r−1}), log(n/4))`; the first never exceeds the second.
pub fn theta_budget(params: &ConfigParams) -> (f64, f64) {
    let largest = params.primes.last().copied().unwrap_or(1);
    let theta = PrimeTable::new(largest).chebyshev(
        ChebyshevKind::Theta,
        largest,
        APClass::new(4, 1).unwrap(),
    );
    (theta, (params.n as f64 / 4.0).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::representations;

    fn g(a: i64, b: i64) -> GaussInt {
        GaussInt::new(a, b)
    }

    #[test]
    fn params_examples() {
        let p = choose_params(100).unwrap();
        assert_eq!((p.r, p.m, p.primes.clone(), p.side), (2, 5, vec![5], 10));
        let p = choose_params(1_000_000).unwrap();
        assert_eq!((p.r, p.m, p.primes.clone()), (5, 32045, vec![5, 13, 17, 29]));
        let p = choose_params(10).unwrap();
        assert_eq!((p.r, p.m, p.side), (1, 1, 3));
        assert!(p.primes.is_empty());
        assert_eq!(choose_params(3), Err(ConfigError::TooFewPoints(3)));
        assert_eq!(choose_params(10_000).unwrap().m, 1105);
    }

    #[test]
    fn params_sandwich_holds_everywhere() {
        for n in (4..5000).chain([19, 20, 259, 260, 4419, 4420, u64::MAX]) {
            let p = choose_params(n).unwrap();
            assert!(4 * p.m <= n);
            let next = first_primes_one_mod_four(p.r)[p.r - 1];
            assert!((4 * p.m as u128 * next as u128) > n as u128);
            assert_eq!(p.r == 1, n < 20);
        }
    }

    #[test]
    fn grid_examples() {
        let pts = grid(2);
        assert_eq!(pts.points(), &[g(0, 0), g(0, 1), g(1, 0), g(1, 1)]);
        assert_eq!(build_config(&choose_params(100).unwrap()).len(), 100);
        assert!(grid(0).is_empty());
    }

    #[test]
    fn point_text_round_trip() {
        let pts = grid(3);
        assert_eq!(PointSet::parse(&pts.to_text()).unwrap(), pts);
        assert!(pts.to_text().starts_with("0 0\n0 1\n0 2\n1 0\n"));
        let parsed = PointSet::parse("# header\n3 -1\n\n0 0  # origin\n").unwrap();
        assert_eq!(parsed.points(), &[g(0, 0), g(3, -1)]);
        assert!(matches!(PointSet::parse("1 2\n1 2\n"), Err(ConfigError::DuplicatePoint(_))));
        assert!(matches!(PointSet::parse("1 2 3\n"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(matches!(PointSet::parse("1\nx y\n"), Err(ConfigError::Parse { line: 1, .. })));
        assert!(PointSet::new(vec![g(1, 1), g(1, 1)]).is_err());
    }

    #[test]
    fn generator_examples() {
        let gens = generators(&choose_params(100).unwrap()).unwrap();
        assert_eq!(gens.pairs, vec![(g(1, 2), g(1, -2))]);
        assert_eq!(gens.scale_exponent, Rational64::new(-1, 2));
        let params = ConfigParams {
            n: 260,
            r: 3,
            m: 65,
            primes: vec![5, 13],
            side: 16,
        };
        let gens = generators(&params).unwrap();
        assert_eq!(gens.pairs, vec![(g(1, 2), g(1, -2)), (g(2, 3), g(2, -3))]);
        assert_eq!(gens.scale_exponent, Rational64::new(-1, 4));
        assert_eq!(gens.rank_bound(), 2);
        assert_eq!(
            generators(&choose_params(10).unwrap()),
            Err(ConfigError::NoFreeGenerators(1))
        );
    }

    #[test]
    fn conjugate_pairs_multiply_to_their_prime() {
        let gens = generators(&choose_params(10_000_000).unwrap()).unwrap();
        for (&(z, w), &p) in gens.pairs.iter().zip(&gens.primes) {
            assert_eq!(z * w, g(p as i64, 0));
            assert!(z.a > 0 && z.a < z.b);
        }
    }

    #[test]
    fn edge_membership_examples() {
        let params65 = ConfigParams {
            n: 260,
            r: 3,
            m: 65,
            primes: vec![5, 13],
            side: 16,
        };
        let gens = generators(&params65).unwrap();
        let sel = verify_edge_in_group(g(-4, 7), &gens).unwrap();
        assert_eq!(sel.factors, vec![g(1, 2), g(2, 3)]);
        assert_eq!(sel.unit, Unit::One);

        let gens5 = generators(&choose_params(100).unwrap()).unwrap();
        let sel = verify_edge_in_group(g(1, 2), &gens5).unwrap();
        assert_eq!((sel.conjugated, sel.unit), (vec![false], Unit::One));
        let sel = verify_edge_in_group(g(2, -1), &gens5).unwrap();
        assert_eq!((sel.factors, sel.unit), (vec![g(1, 2)], Unit::NegI));
        assert!(matches!(
            verify_edge_in_group(g(1, 1), &gens5),
            Err(ConfigError::NormMismatch { .. })
        ));
    }

    #[test]
    fn every_representation_is_in_the_group() {
        for n in [20u64, 260, 4420, 128_180, 4_742_660] {
            let params = choose_params(n).unwrap();
            let gens = generators(&params).unwrap();
            let reps = representations(&params.primes).unwrap();
            assert_eq!(reps.len(), 1 << (params.r + 1));
            for &v in &reps {
                let sel = verify_edge_in_group(v, &gens).unwrap();
                let product = sel.factors.iter().fold(sel.unit.value(), |acc, &f| acc * f);
                assert_eq!(product, v);
            }
        }
    }

    #[test]
    fn rank_window_examples() {
        let w = rank_bounds(1_000_000).unwrap();
        assert!((w.low - 1.754).abs() < 1e-3, "{}", w.low);
        assert!((w.high - 84.18).abs() < 1e-2, "{}", w.high);
        let w = rank_bounds(100).unwrap();
        assert!((w.low - 1.00516).abs() < 1e-4, "{}", w.low);
        assert!((w.high - 48.2476).abs() < 1e-3, "{}", w.high);
        assert_eq!(rank_bounds(15), Err(ConfigError::RankWindowUndefined(15)));
        assert!(rank_bounds(16).is_ok());
    }

    #[test]
    fn theta_budget_respected() {
        for n in [4u64, 19, 20, 100, 10_000, 1_000_000] {
            let (theta, budget) = theta_budget(&choose_params(n).unwrap());
            assert!(theta <= budget + 1e-12, "n = {n}");
        }
        let (theta, _) = theta_budget(&choose_params(10_000).unwrap());
        assert!((theta - 1105f64.ln()).abs() < 1e-12);
    }
}

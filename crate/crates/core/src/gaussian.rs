//! The ring of lattice points under `(a,b)·(c,d) = (ac − bd, ad + bc)`,
//! i.e. the Gaussian integers. Elements double as displacement vectors.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::numtheory::{is_prime, pow_mod};

/// Primes below this bound are split into two squares by direct search;
/// larger ones go through the Euclidean descent.
const EXHAUSTIVE_SPLIT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaussianError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} = 3 (mod 4) has no representation as a sum of two squares")]
    NoRepresentation(u64),
    #[error("prime {0} appears more than once")]
    RepeatedPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct GaussInt {
    pub a: i64,
    pub b: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { a: 0, b: 0 };
    pub const ONE: GaussInt = GaussInt { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    /// `a² + b²`. Overflowing `u64` is a caller defect.
    pub fn norm(self) -> u64 {
        let n = self.a as i128 * self.a as i128 + self.b as i128 * self.b as i128;
        u64::try_from(n).expect("Gaussian norm overflows u64")
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b)
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn as_unit(self) -> Option<Unit> {
        Unit::ALL.into_iter().find(|u| u.value() == self)
    }

    /// `self / divisor` when the quotient lies in the ring.
    pub fn div_exact(self, divisor: GaussInt) -> Option<GaussInt> {
        if divisor.is_zero() {
            return None;
        }
        let n = divisor.norm() as i128;
        let (a, b) = (self.a as i128, self.b as i128);
        let (c, d) = (divisor.a as i128, divisor.b as i128);
        let re = a * c + b * d;
        let im = b * c - a * d;
        if re % n != 0 || im % n != 0 {
            return None;
        }
        Some(GaussInt::new(narrow(re / n), narrow(im / n)))
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("Gaussian integer component overflows i64")
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.a, -self.b)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: GaussInt) -> GaussInt {
        gmul(self, rhs)
    }
}

pub fn gmul(u: GaussInt, v: GaussInt) -> GaussInt {
    let (a, b) = (u.a as i128, u.b as i128);
    let (c, d) = (v.a as i128, v.b as i128);
    GaussInt::new(narrow(a * c - b * d), narrow(a * d + b * c))
}

/// One of the four units `±1, ±i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Unit {
    One,
    I,
    NegOne,
    NegI,
}

impl Unit {
    /// Powers of `i` in order: `ALL[k] = i^k`.
    pub const ALL: [Unit; 4] = [Unit::One, Unit::I, Unit::NegOne, Unit::NegI];

    pub fn value(self) -> GaussInt {
        match self {
            Unit::One => GaussInt::new(1, 0),
            Unit::I => GaussInt::new(0, 1),
            Unit::NegOne => GaussInt::new(-1, 0),
            Unit::NegI => GaussInt::new(0, -1),
        }
    }

    pub fn exponent(self) -> usize {
        Unit::ALL.iter().position(|&u| u == self).unwrap()
    }

    pub fn compose(self, other: Unit) -> Unit {
        Unit::ALL[(self.exponent() + other.exponent()) % 4]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaussFactorization {
    pub unit: Unit,
    pub factors: Vec<GaussInt>,
}

impl GaussFactorization {
    pub fn product(&self) -> GaussInt {
        self.factors.iter().fold(self.unit.value(), |acc, &f| acc * f)
    }
}

/// Writes a prime `p = 2` or `p = 1 (mod 4)` as `x² + y²` with `0 < x <= y`
/// (strict except for `p = 2`).
pub fn two_squares_prime(p: u64) -> Result<(u64, u64), GaussianError> {
    if !is_prime(p) {
        return Err(GaussianError::NotPrime(p));
    }
    if p == 2 {
        return Ok((1, 1));
    }
    if p % 4 == 3 {
        return Err(GaussianError::NoRepresentation(p));
    }
    let (x, y) = if p < EXHAUSTIVE_SPLIT_LIMIT {
        split_by_search(p)
    } else {
        split_by_descent(p)
    };
    Ok((x.min(y), x.max(y)))
}

fn split_by_search(p: u64) -> (u64, u64) {
    (1..)
        .take_while(|x| 2 * x * x < p)
        .find_map(|x| {
            let rest = p - x * x;
            let y = isqrt(rest);
            (y * y == rest).then_some((x, y))
        })
        .expect("prime = 1 mod 4 always splits")
}

/// Hermite-Serret: run the Euclidean algorithm on `(p, t)` with `t² = −1
/// (mod p)`; the first remainder below `√p` is one of the two squares' roots.
fn split_by_descent(p: u64) -> (u64, u64) {
    let t = (2..p)
        .map(|c| pow_mod(c, (p - 1) / 4, p))
        .find(|&t| pow_mod(t, 2, p) == p - 1)
        .expect("a quadratic non-residue exists");
    let root = isqrt(p);
    let (mut a, mut b) = (p, t.min(p - t));
    while b > root {
        (a, b) = (b, a % b);
    }
    let x = b;
    let y = isqrt(p - x * x);
    debug_assert_eq!(x * x + y * y, p);
    (x, y)
}

pub fn isqrt(n: u64) -> u64 {
    num_integer::Roots::sqrt(&n)
}

/// Every `(x, y)` with `x² + y² = p₁⋯p_t`, built by picking `(x_j, y_j)` or
/// its conjugate for each prime, multiplying, and spreading over the units.
pub fn representations(primes: &[u64]) -> Result<BTreeSet<GaussInt>, GaussianError> {
    let mut seen = BTreeSet::new();
    let mut atoms = Vec::with_capacity(primes.len());
    for &p in primes {
        if !seen.insert(p) {
            return Err(GaussianError::RepeatedPrime(p));
        }
        if p == 2 {
            return Err(GaussianError::NoRepresentation(p));
        }
        let (x, y) = two_squares_prime(p)?;
        atoms.push(GaussInt::new(x as i64, y as i64));
    }
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << atoms.len() {
        let base = atoms.iter().enumerate().fold(GaussInt::ONE, |acc, (j, &g)| {
            acc * if mask >> j & 1 == 1 { g.conj() } else { g }
        });
        for u in Unit::ALL {
            out.insert(u.value() * base);
        }
    }
    Ok(out)
}

/// All lattice points on the circle `x² + y² = m`, for any `m`, ascending.
pub fn lattice_points_on_circle(m: u64) -> Vec<GaussInt> {
    let mut out = Vec::new();
    let root = isqrt(m);
    for x in 0..=root {
        let rest = m - x * x;
        let y = isqrt(rest);
        if y * y != rest {
            continue;
        }
        let (x, y) = (x as i64, y as i64);
        for sx in [-1, 1] {
            for sy in [-1, 1] {
                out.push(GaussInt::new(sx * x, sy * y));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn are_associates(u: GaussInt, v: GaussInt) -> bool {
    Unit::ALL.iter().any(|unit| unit.value() * v == u)
}

/// Expresses `g` as `unit · Π atoms` by exact division, atom by atom.
///
/// Each atom must divide exactly once; associates of an atom are absorbed
/// into the unit, but a conjugate is a different prime and is not.
pub fn factor_over(g: GaussInt, atoms: &[GaussInt]) -> Option<GaussFactorization> {
    let mut rest = g;
    for &atom in atoms {
        rest = rest.div_exact(atom)?;
    }
    rest.as_unit().map(|unit| GaussFactorization {
        unit,
        factors: atoms.to_vec(),
    })
}

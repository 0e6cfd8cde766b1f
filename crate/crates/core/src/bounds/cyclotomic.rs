//! Exact arithmetic in the 12th cyclotomic field `Q(ζ)`, `ζ = e^{iπ/6}`.
//!
//! Elements are rational combinations of `1, ζ, ζ², ζ³` reduced by
//! `Φ₁₂(ζ) = ζ⁴ − ζ² + 1 = 0`. The field holds `i = ζ³`, every root of unity
//! of order dividing 12, and all Gaussian rationals, so zero tests are exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo12 {
    coeffs: [BigRational; 4],
}

/// `re + im·i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn int(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`.
    pub fn ratio(re: (i64, i64), im: (i64, i64)) -> Self {
        let q = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
        Self::new(q(re), q(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Cyclo12 {
    pub fn zero() -> Self {
        Self {
            coeffs: Default::default(),
        }
    }

    pub fn one() -> Self {
        let mut z = Self::zero();
        z.coeffs[0] = BigRational::one();
        z
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(12);
        let zeta = {
            let mut z = Self::zero();
            z.coeffs[1] = BigRational::one();
            z
        };
        (0..k).fold(Self::one(), |acc, _| &acc * &zeta)
    }

    /// A primitive root of unity of order `order`; `order` must divide 12.
    pub fn root_of_unity(order: u32) -> Self {
        assert!(order > 0 && 12 % order == 0, "order {order} does not divide 12");
        Self::zeta_pow(12 / order as i64)
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// The element as `re + im·i`, if it lies in `Q(i)`.
    pub fn as_gaussian(&self) -> Option<GaussRational> {
        (self.coeffs[1].is_zero() && self.coeffs[2].is_zero())
            .then(|| GaussRational::new(self.coeffs[0].clone(), self.coeffs[3].clone()))
    }

    /// Solves `self · x = 1` by elimination on the multiplication matrix.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // column j holds self·ζ^j
        let cols: Vec<Cyclo12> = (0..4).map(|j| self * &Cyclo12::zeta_pow(j)).collect();
        let mut rows: Vec<Vec<BigRational>> = (0..4)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !rows[r][col].is_zero())?;
            rows.swap(col, pivot);
            let p = rows[col][col].clone();
            for x in rows[col].iter_mut() {
                *x /= p.clone();
            }
            for r in 0..4 {
                if r != col && !rows[r][col].is_zero() {
                    let factor = rows[r][col].clone();
                    let pivot_row = rows[col].clone();
                    for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                        *x -= factor.clone() * y;
                    }
                }
            }
        }
        let mut out = Self::zero();
        for (i, row) in rows.into_iter().enumerate() {
            out.coeffs[i] = row[4].clone();
        }
        Some(out)
    }

    /// `self^e` for any integer `e`; `None` for a negative power of zero.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Some(acc)
    }
}

impl From<&GaussRational> for Cyclo12 {
    fn from(g: &GaussRational) -> Self {
        let mut z = Cyclo12::zero();
        z.coeffs[0] = g.re.clone();
        z.coeffs[3] = g.im.clone();
        z
    }
}

impl fmt::Display for Cyclo12 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_gaussian() {
            Some(g) => write!(f, "{g}"),
            None => write!(
                f,
                "{}+{}z+{}z^2+{}z^3",
                self.coeffs[0], self.coeffs[1], self.coeffs[2], self.coeffs[3]
            ),
        }
    }
}

impl<'a> Add<&'a Cyclo12> for &'a Cyclo12 {
    type Output = Cyclo12;
    fn add(self, rhs: &Cyclo12) -> Cyclo12 {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *x += y;
        }
        out
    }
}

impl<'a> Sub<&'a Cyclo12> for &'a Cyclo12 {
    type Output = Cyclo12;
    fn sub(self, rhs: &Cyclo12) -> Cyclo12 {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *x -= y;
        }
        out
    }
}

impl Neg for &Cyclo12 {
    type Output = Cyclo12;
    fn neg(self) -> Cyclo12 {
        &Cyclo12::zero() - self
    }
}

impl<'a> Mul<&'a Cyclo12> for &'a Cyclo12 {
    type Output = Cyclo12;
    fn mul(self, rhs: &Cyclo12) -> Cyclo12 {
        let mut p: [BigRational; 7] = Default::default();
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        // ζ⁴ = ζ² − 1, ζ⁵ = ζ³ − ζ, ζ⁶ = −1
        let [p0, p1, p2, p3, p4, p5, p6] = p;
        Cyclo12 {
            coeffs: [p0 - &p4 - p6, p1 - &p5, p2 + p4, p3 + p5],
        }
    }
}

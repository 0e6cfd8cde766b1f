//! Brute-force nondegenerate solutions of `a₁z₁ + ⋯ + a_kz_k = 1` with every
//! `z_i` drawn from an explicit finitely generated group, truncated to a box
//! of exponents.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use super::cyclotomic::{Cyclo12, GaussRational};

pub const MAX_TERMS: usize = 4;
pub const MAX_HEIGHT: u32 = 8;
/// Cap on the number of `(z₁, …, z_{k−1})` tuples tried.
pub const ENUMERATION_BUDGET: u128 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitEquationError {
    #[error("torsion order {0} must divide 12")]
    UnsupportedTorsion(u32),
    #[error("free generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("need between 1 and {MAX_TERMS} terms, got {0}")]
    TermCount(usize),
    #[error("height {0} exceeds {MAX_HEIGHT}")]
    Height(u32),
    #[error("{tuples} candidate tuples exceed the budget of {ENUMERATION_BUDGET}")]
    Budget { tuples: u128 },
}

/// `μ_t × ⟨g₁, …, g_r⟩` with `t | 12` and Gaussian-rational `g_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    torsion_order: u32,
    free_generators: Vec<GaussRational>,
}

impl GroupSpec {
    pub fn new(torsion_order: u32, free_generators: Vec<GaussRational>) -> Result<Self, UnitEquationError> {
        if torsion_order == 0 || 12 % torsion_order != 0 {
            return Err(UnitEquationError::UnsupportedTorsion(torsion_order));
        }
        if let Some(j) = free_generators.iter().position(GaussRational::is_zero) {
            return Err(UnitEquationError::ZeroGenerator(j));
        }
        Ok(Self {
            torsion_order,
            free_generators,
        })
    }

    pub fn torsion_order(&self) -> u32 {
        self.torsion_order
    }

    pub fn free_generators(&self) -> &[GaussRational] {
        &self.free_generators
    }

    /// Declared rank, the number of free generators.
    pub fn rank(&self) -> usize {
        self.free_generators.len()
    }

    /// Same group with every free generator inverted.
    pub fn inverted(&self) -> Self {
        let free_generators = self
            .free_generators
            .iter()
            .map(|g| {
                Cyclo12::from(g)
                    .inverse()
                    .and_then(|x| x.as_gaussian())
                    .expect("nonzero Gaussian rational inverts in Q(i)")
            })
            .collect();
        Self {
            torsion_order: self.torsion_order,
            free_generators,
        }
    }

    /// Distinct elements `τ·g₁^{e₁}⋯g_r^{e_r}` with `|e_j| <= height`, in a
    /// fixed order (torsion outermost, then exponents lexicographically).
    pub fn elements(&self, height: u32) -> Vec<Cyclo12> {
        let h = height as i64;
        let powers: Vec<Vec<Cyclo12>> = self
            .free_generators
            .iter()
            .map(|g| {
                let g = Cyclo12::from(g);
                (-h..=h).map(|e| g.pow(e).expect("generator is nonzero")).collect()
            })
            .collect();
        let root = Cyclo12::root_of_unity(self.torsion_order);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let width = (2 * h + 1) as usize;
        let combos = width.pow(powers.len() as u32);
        let mut tau = Cyclo12::one();
        for _ in 0..self.torsion_order {
            for mut idx in 0..combos {
                let mut z = tau.clone();
                for table in powers.iter().rev() {
                    z = &z * &table[idx % width];
                    idx /= width;
                }
                if seen.insert(z.clone()) {
                    out.push(z);
                }
            }
            tau = &tau * &root;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegenerateSolutions {
    pub count: usize,
    pub solutions: Vec<Vec<Cyclo12>>,
}

/// A solution count next to the log₂ solution bound for its `(k, rank)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionCountCheck {
    pub count: usize,
    pub log2_count: f64,
    pub log2_bound: f64,
}

/// Exhaustive search over the first `k − 1` slots; the last slot is solved
/// for and looked up in the element table.
pub fn enumerate_nondegenerate(
    coeffs: &[GaussRational],
    group: &GroupSpec,
    height: u32,
) -> Result<NondegenerateSolutions, UnitEquationError> {
    let k = coeffs.len();
    if k == 0 || k > MAX_TERMS {
        return Err(UnitEquationError::TermCount(k));
    }
    if height > MAX_HEIGHT {
        return Err(UnitEquationError::Height(height));
    }
    if let Some(j) = coeffs.iter().position(GaussRational::is_zero) {
        return Err(UnitEquationError::ZeroCoefficient(j));
    }
    let elements = group.elements(height);
    let tuples = (elements.len() as u128).pow(k as u32 - 1);
    if tuples > ENUMERATION_BUDGET {
        return Err(UnitEquationError::Budget { tuples });
    }
    let index: HashMap<&Cyclo12, usize> = elements.iter().enumerate().map(|(i, z)| (z, i)).collect();
    let a: Vec<Cyclo12> = coeffs.iter().map(Cyclo12::from).collect();
    // scaled[j][i] = a_j · elements[i]
    let scaled: Vec<Vec<Cyclo12>> = a[..k - 1]
        .iter()
        .map(|aj| elements.iter().map(|z| aj * z).collect())
        .collect();
    let last_inv = a[k - 1].inverse().expect("nonzero coefficient");
    let one = Cyclo12::one();

    let mut solutions = Vec::new();
    let mut slots = vec![0usize; k - 1];
    loop {
        let partial = slots
            .iter()
            .zip(&scaled)
            .fold(Cyclo12::zero(), |acc, (&i, row)| &acc + &row[i]);
        let z_last = &(&one - &partial) * &last_inv;
        if let Some(&last) = index.get(&z_last) {
            let mut terms: Vec<Cyclo12> = slots.iter().zip(&scaled).map(|(&i, row)| row[i].clone()).collect();
            terms.push(&a[k - 1] * &elements[last]);
            if no_vanishing_subsum(&terms) {
                let mut z: Vec<Cyclo12> = slots.iter().map(|&i| elements[i].clone()).collect();
                z.push(elements[last].clone());
                solutions.push(z);
            }
        }
        // odometer over the free slots
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return Ok(NondegenerateSolutions {
                    count: solutions.len(),
                    solutions,
                });
            }
            slots[pos] += 1;
            if slots[pos] < elements.len() {
                break;
            }
            slots[pos] = 0;
            pos += 1;
        }
    }
}

/// Every nonempty subset of `terms` has a nonzero sum.
pub fn no_vanishing_subsum(terms: &[Cyclo12]) -> bool {
    let k = terms.len();
    (1u32..1 << k).all(|mask| {
        let sum = (0..k)
            .filter(|&j| mask >> j & 1 == 1)
            .fold(Cyclo12::zero(), |acc, j| &acc + &terms[j]);
        !sum.is_zero()
    })
}

pub fn solution_count_check(solutions: &NondegenerateSolutions, k: usize, rank: usize) -> SolutionCountCheck {
    let log2_count = if solutions.count == 0 {
        f64::NEG_INFINITY
    } else {
        (solutions.count as f64).log2()
    };
    SolutionCountCheck {
        count: solutions.count,
        log2_count,
        log2_bound: super::log2_a(k as u64, rank as u64),
    }
}

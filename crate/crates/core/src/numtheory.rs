//! Primes in arithmetic progressions and the Chebyshev-type counting
//! functions `pi`, `theta` and `psi` restricted to a residue class.
//!
//! `psi` places the congruence on the prime power `p^l` itself, not on the
//! underlying prime. With `d = 4, a = 1` this means `9 = 3^2` contributes
//! `log 3` even though `3 = 3 (mod 4)`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

/// Sieve limit used by [`kth_prime_in_ap`] before it gives up.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumTheoryError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {a} is not reduced modulo {d}")]
    ResidueOutOfRange { d: u64, a: u64 },
    #[error("residue {a} is not coprime to modulus {d}")]
    NotCoprime { d: u64, a: u64 },
    #[error("k must be at least 1")]
    ZeroIndex,
    #[error("no {k}-th prime in class {a} mod {d} below the sieve cap {cap}")]
    Exhausted { k: u64, d: u64, a: u64, cap: u64 },
}

/// A reduced residue class `a mod d` with `gcd(a, d) = 1`.
///
/// `d = 1` admits only `a = 0`, the class of all integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct APClass {
    d: u64,
    a: u64,
}

impl APClass {
    pub fn new(d: u64, a: u64) -> Result<Self, NumTheoryError> {
        if d == 0 {
            return Err(NumTheoryError::ZeroModulus);
        }
        if a >= d {
            return Err(NumTheoryError::ResidueOutOfRange { d, a });
        }
        if a.gcd(&d) != 1 {
            return Err(NumTheoryError::NotCoprime { d, a });
        }
        Ok(Self { d, a })
    }

    pub fn modulus(&self) -> u64 {
        self.d
    }

    pub fn residue(&self) -> u64 {
        self.a
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.d == self.a
    }

    /// All reduced classes modulo `d`, ascending by residue.
    pub fn all_for(d: u64) -> Vec<APClass> {
        (0..d).filter_map(|a| APClass::new(d, a).ok()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebyshevKind {
    Pi,
    Theta,
    Psi,
}

/// Every prime up to `limit`, backed by a flat bit array where bit `n` is
/// set iff `n` is prime.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let len = limit as usize + 1;
        let mut bits = vec![!0u64; len.div_ceil(64)];
        let clear = |bits: &mut [u64], i: usize| bits[i >> 6] &= !(1u64 << (i & 63));
        for i in 0..len.min(2) {
            clear(&mut bits, i);
        }
        let mut i = 2usize;
        while i * i < len {
            if bits[i >> 6] >> (i & 63) & 1 == 1 {
                let mut j = i * i;
                while j < len {
                    clear(&mut bits, j);
                    j += i;
                }
            }
            i += 1;
        }
        // bits past `limit` in the last word are never read
        let primes = (2..len)
            .filter(|&i| bits[i >> 6] >> (i & 63) & 1 == 1)
            .map(|i| i as u64)
            .collect();
        Self {
            limit,
            bits,
            primes,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primality for `n <= limit`; `None` beyond the table.
    pub fn is_prime(&self, n: u64) -> Option<bool> {
        if n > self.limit {
            return None;
        }
        let i = n as usize;
        Some(self.bits[i >> 6] >> (i & 63) & 1 == 1)
    }

    /// Primes `p <= x` (clamped to the table limit).
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }

    pub fn primes_in_ap(&self, x: u64, cls: APClass) -> Vec<u64> {
        self.primes_up_to(x)
            .iter()
            .copied()
            .filter(|&p| cls.contains(p))
            .collect()
    }

    /// Evaluates one of the counting functions at `x`. Panics if `x` exceeds
    /// the table limit.
    pub fn chebyshev(&self, kind: ChebyshevKind, x: u64, cls: APClass) -> f64 {
        assert!(x <= self.limit, "x = {x} beyond sieve limit {}", self.limit);
        let primes = self.primes_up_to(x);
        match kind {
            ChebyshevKind::Pi => primes.iter().filter(|&&p| cls.contains(p)).count() as f64,
            ChebyshevKind::Theta => primes
                .iter()
                .filter(|&&p| cls.contains(p))
                .map(|&p| (p as f64).ln())
                .sum(),
            ChebyshevKind::Psi => {
                let mut total = 0.0;
                for &p in primes {
                    let log_p = (p as f64).ln();
                    let mut power = p;
                    loop {
                        if cls.contains(power) {
                            total += log_p;
                        }
                        match power.checked_mul(p) {
                            Some(next) if next <= x => power = next,
                            _ => break,
                        }
                    }
                }
                total
            }
        }
    }
}

pub fn euler_phi(d: u64) -> u64 {
    assert!(d >= 1, "euler_phi requires d >= 1");
    let mut n = d;
    let mut phi = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Primes `p <= limit` with `p = a (mod d)`, ascending.
pub fn primes_in_ap(limit: u64, cls: APClass) -> Vec<u64> {
    PrimeTable::new(limit).primes_in_ap(limit, cls)
}

pub fn chebyshev(kind: ChebyshevKind, x: u64, cls: APClass) -> f64 {
    PrimeTable::new(x).chebyshev(kind, x, cls)
}

/// The `k`-th smallest prime in `cls`, sieving with a geometrically growing
/// limit up to [`DEFAULT_SIEVE_CAP`].
pub fn kth_prime_in_ap(k: u64, cls: APClass) -> Result<u64, NumTheoryError> {
    kth_prime_in_ap_capped(k, cls, DEFAULT_SIEVE_CAP)
}

pub fn kth_prime_in_ap_capped(k: u64, cls: APClass, cap: u64) -> Result<u64, NumTheoryError> {
    if k == 0 {
        return Err(NumTheoryError::ZeroIndex);
    }
    let mut limit = 64u64.max(cls.modulus() * 4).min(cap);
    loop {
        let table = PrimeTable::new(limit);
        if let Some(&p) = table
            .primes()
            .iter()
            .filter(|&&p| cls.contains(p))
            .nth(k as usize - 1)
        {
            return Ok(p);
        }
        if limit >= cap {
            return Err(NumTheoryError::Exhausted {
                k,
                d: cls.modulus(),
                a: cls.residue(),
                cap,
            });
        }
        limit = limit.saturating_mul(4).min(cap);
    }
}

/// The first `count` primes `= 1 (mod 4)`, ascending.
pub fn first_primes_one_mod_four(count: usize) -> Vec<u64> {
    let cls = APClass { d: 4, a: 1 };
    let mut limit = 64u64;
    loop {
        let found = PrimeTable::new(limit).primes_in_ap(limit, cls);
        if found.len() >= count {
            return found[..count].to_vec();
        }
        limit *= 4;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|i| i * i <= n).all(|i| n % i != 0)
    }

    fn class(d: u64, a: u64) -> APClass {
        APClass::new(d, a).unwrap()
    }

    #[test]
    fn phi_small_values() {
        assert_eq!(euler_phi(1), 1);
        for d in 1..200u64 {
            let brute = (0..d).filter(|a| a.gcd(&d) == 1).count() as u64;
            assert_eq!(euler_phi(d), brute, "d = {d}");
        }
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn table_matches_trial_division() {
        let table = PrimeTable::new(10_000);
        let expected: Vec<u64> = (0..=10_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(table.primes(), &expected[..]);
        for n in 0..=10_000 {
            assert_eq!(table.is_prime(n), Some(trial_division(n)));
        }
        assert_eq!(table.is_prime(10_001), None);
    }

    #[test]
    fn tiny_tables() {
        assert!(PrimeTable::new(0).primes().is_empty());
        assert!(PrimeTable::new(1).primes().is_empty());
        assert_eq!(PrimeTable::new(2).primes(), &[2]);
        assert_eq!(PrimeTable::new(64).primes().last(), Some(&61));
    }

    #[test]
    fn class_validation() {
        assert_eq!(APClass::new(0, 0), Err(NumTheoryError::ZeroModulus));
        assert_eq!(APClass::new(4, 2), Err(NumTheoryError::NotCoprime { d: 4, a: 2 }));
        assert_eq!(
            APClass::new(4, 5),
            Err(NumTheoryError::ResidueOutOfRange { d: 4, a: 5 })
        );
        assert!(APClass::new(1, 0).is_ok());
        assert_eq!(APClass::all_for(12).len(), 4);
    }

    #[test]
    fn ap_examples() {
        assert_eq!(primes_in_ap(30, class(4, 1)), vec![5, 13, 17, 29]);
        assert_eq!(primes_in_ap(4, class(4, 1)), Vec::<u64>::new());
        assert_eq!(primes_in_ap(10, class(4, 3)), vec![3, 7]);
    }

    #[test]
    fn chebyshev_examples() {
        let c = class(4, 1);
        assert_eq!(chebyshev(ChebyshevKind::Pi, 100, c), 11.0);
        let theta: f64 = [5f64, 13., 17., 29.].iter().map(|p| p.ln()).sum();
        assert!((chebyshev(ChebyshevKind::Theta, 30, c) - theta).abs() < 1e-12);
        assert!((theta - 10.3749).abs() < 1e-4);
        let psi = 5f64.ln() + 3f64.ln();
        assert!((chebyshev(ChebyshevKind::Psi, 10, c) - psi).abs() < 1e-12);
        assert!((psi - 2.708).abs() < 1e-3);
    }

    #[test]
    fn psi_conditions_on_the_power() {
        // 9 = 3^2 lands in 1 mod 4, 27 = 3^3 does not; 25 = 5^2 does
        let c = class(4, 1);
        let at = |x| chebyshev(ChebyshevKind::Psi, x, c);
        assert!((at(9) - at(8) - 3f64.ln()).abs() < 1e-12);
        assert_eq!(at(27), at(26));
        assert!((at(25) - at(24) - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn kth_prime_examples() {
        assert_eq!(kth_prime_in_ap(1, class(4, 1)), Ok(5));
        assert_eq!(kth_prime_in_ap(4, class(4, 1)), Ok(29));
        assert_eq!(kth_prime_in_ap(1, class(2, 1)), Ok(3));
        assert_eq!(kth_prime_in_ap(0, class(2, 1)), Err(NumTheoryError::ZeroIndex));
        assert!(matches!(
            kth_prime_in_ap_capped(1000, class(4, 1), 100),
            Err(NumTheoryError::Exhausted { .. })
        ));
        // forces several growth rounds
        assert_eq!(kth_prime_in_ap(1000, class(4, 1)), Ok(primes_in_ap(20_000, class(4, 1))[999]));
    }

    #[test]
    fn partition_over_residues() {
        let table = PrimeTable::new(100_000);
        for d in 1..=12u64 {
            let classes = APClass::all_for(d);
            for x in [0u64, 1, 2, 3, 10, 97, 1000, 65_537, 100_000] {
                let pi = table.primes_up_to(x).len() as f64;
                let dividing = table.primes_up_to(x).iter().filter(|&&p| d % p == 0).count() as f64;
                let sum: f64 = classes
                    .iter()
                    .map(|&c| table.chebyshev(ChebyshevKind::Pi, x, c))
                    .sum();
                assert_eq!(sum, pi - dividing, "d = {d}, x = {x}");
            }
        }
    }

    #[test]
    fn monotone_and_psi_dominates_theta() {
        let table = PrimeTable::new(5_000);
        for cls in [class(4, 1), class(4, 3), class(3, 2), class(10, 7), class(1, 0)] {
            let mut prev = [0.0f64; 3];
            for x in 0..=5_000 {
                let cur = [
                    table.chebyshev(ChebyshevKind::Pi, x, cls),
                    table.chebyshev(ChebyshevKind::Theta, x, cls),
                    table.chebyshev(ChebyshevKind::Psi, x, cls),
                ];
                for i in 0..3 {
                    assert!(cur[i] >= prev[i]);
                }
                assert!(cur[2] >= cur[1] - 1e-9);
                prev = cur;
            }
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn first_one_mod_four_primes() {
        assert_eq!(first_primes_one_mod_four(5), vec![5, 13, 17, 29, 37]);
        assert!(first_primes_one_mod_four(0).is_empty());
    }
}

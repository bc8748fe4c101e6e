//! Cyclotomic polynomials `Phi_n(q)`, built by dividing the proper-divisor
//! factors out of `q^n - 1` and memoized in a process-wide cache.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;

use spin::RwLock;

use crate::polyring::LaurentPoly;

/// Memo table from `n` to `Phi_n`. Entries are only ever added, so a
/// reader never observes a value change.
pub struct CyclotomicCache {
    table: RwLock<BTreeMap<u64, Arc<LaurentPoly>>>,
}

static GLOBAL: CyclotomicCache = CyclotomicCache::new();

impl CyclotomicCache {
    pub const fn new() -> Self {
        CyclotomicCache { table: RwLock::new(BTreeMap::new()) }
    }

    /// The cache shared by [`cyclotomic`].
    pub fn global() -> &'static CyclotomicCache {
        &GLOBAL
    }

    pub fn len(&self) -> usize {
        self.table.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, n: u64) -> bool {
        self.table.read().contains_key(&n)
    }

    /// `Phi_n`, computing and storing it (and its divisors) on a miss.
    pub fn get(&self, n: u64) -> Arc<LaurentPoly> {
        assert!(n >= 1, "cyclotomic index must be positive");
        if let Some(p) = self.table.read().get(&n) {
            return Arc::clone(p);
        }
        // No lock is held while recursing into the divisors.
        let mut poly = LaurentPoly::q_pow(n as i64) - LaurentPoly::one();
        for d in 1..n {
            if n.is_multiple_of(d) {
                let phi_d = self.get(d);
                let (quot, rem) = poly.divrem(&phi_d).expect("cyclotomic factors are monic polynomials");
                assert!(rem.is_zero(), "Phi_{d} does not divide q^{n} - 1 after earlier factors");
                poly = quot;
            }
        }
        let mut table = self.table.write();
        Arc::clone(table.entry(n).or_insert_with(|| Arc::new(poly)))
    }
}

impl Default for CyclotomicCache {
    fn default() -> Self {
        Self::new()
    }
}

/// The `n`-th cyclotomic polynomial, memoized globally.
pub fn cyclotomic(n: u64) -> Arc<LaurentPoly> {
    CyclotomicCache::global().get(n)
}

/// Number of `1 <= k <= n` coprime to `n`.
pub fn euler_totient(n: u64) -> u64 {
    assert!(n >= 1, "totient of zero is undefined here");
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use num_integer::Integer;

    #[test]
    fn totient_examples() {
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(12), 4);
        for p in [2u64, 3, 5, 7, 97] {
            assert_eq!(euler_totient(p), p - 1);
        }
        let brute = |n: u64| (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
        for n in 1..200 {
            assert_eq!(euler_totient(n), brute(n));
        }
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic(1), LaurentPoly::from_ints(0, &[-1, 1]));
        assert_eq!(*cyclotomic(6), LaurentPoly::from_ints(0, &[1, -1, 1]));
        assert_eq!(*cyclotomic(7), LaurentPoly::from_ints(0, &[1; 7]));
    }

    #[test]
    fn degree_monic_and_palindromic() {
        for n in 2..=120u64 {
            let phi = cyclotomic(n);
            assert_eq!(phi.high_exp(), Some(euler_totient(n) as i64));
            assert_eq!(phi.low_exp(), Some(0));
            assert!(phi.coeff(phi.high_exp().unwrap()).is_one());
            assert!(phi.coeffs().iter().all(Rational::is_integer));
            let c = phi.coeffs();
            assert!(c.iter().eq(c.iter().rev()), "Phi_{n} is not palindromic");
        }
    }

    #[test]
    fn private_cache_agrees_with_global() {
        let cache = CyclotomicCache::new();
        assert!(cache.is_empty());
        assert_eq!(*cache.get(30), *cyclotomic(30));
        for d in divisors(30) {
            assert!(cache.contains(d));
        }
    }
}

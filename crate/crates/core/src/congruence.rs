//! Congruences of rational functions modulo powers of `Phi_n(q)`, and the
//! small number theory needed to state them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cyclotomic::cyclotomic;
use crate::error::Error;
use crate::polyring::LaurentPoly;
use crate::qcombinatorics::{FactoredDen, QRat};
use crate::rational::Rational;

/// Outcome of one congruence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub modulus_power: u32,
    /// The nonzero remainder when the congruence fails.
    pub witness: Option<LaurentPoly>,
}

impl Verdict {
    pub fn pass(modulus_power: u32) -> Self {
        Verdict { holds: true, modulus_power, witness: None }
    }

    pub fn from_remainder(rem: LaurentPoly, modulus_power: u32) -> Self {
        if rem.is_zero() {
            Self::pass(modulus_power)
        } else {
            Verdict { holds: false, modulus_power, witness: Some(rem) }
        }
    }
}

/// `<x>_n`: the unique `0 <= a < n` with `a * den(x) = num(x) (mod n)`.
pub fn residue_index(x: &Rational, n: u64) -> Result<u64, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("residue modulus must be positive".into()));
    }
    let nb = BigInt::from(n);
    let num = x.numer().mod_floor(&nb).to_u64().unwrap();
    let den = x.denom().mod_floor(&nb).to_u64().unwrap();
    let inv = mod_inverse(den, n).ok_or_else(|| Error::NotInvertible(format!("{}", x.denom()), n))?;
    Ok(((num as u128 * inv as u128) % n as u128) as u64)
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(n as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(n as i128) as u64)
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(m | p)` by Euler's criterion.
pub fn legendre(m: i64, p: u64) -> Result<i8, Error> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let r = (m as i128).rem_euclid(p as i128) as u64;
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// `Phi_n` divides `1 - q^m` iff `n | m`, so the denominator is a unit
/// modulo `Phi_n^k` iff no factor exponent is a multiple of `n`.
pub fn den_coprime_to_phi(den: &FactoredDen, n: u64) -> bool {
    den.factors().all(|(m, _)| m % n != 0)
}

/// `Phi_n(q)^k` as an ordinary polynomial.
pub fn phi_power(n: u64, k: u32) -> LaurentPoly {
    cyclotomic(n).pow(k)
}

/// Reduces dense coefficients (from exponent 0) modulo `(q^n - 1)^k`, a
/// multiple of `Phi_n^k` with only `k + 1` terms. The result has length
/// at most `k * n`.
fn fold_mod_qn_minus_one(mut c: Vec<Rational>, n: usize, k: u32) -> Vec<Rational> {
    let top = n * k as usize;
    if c.len() <= top {
        return c;
    }
    // (q^n - 1)^k = q^{kn} + sum_{i<k} binom(k,i) (-1)^{k-i} q^{ni};
    // q^{kn} is replaced by minus the lower part.
    let mut lower: Vec<(usize, Rational)> = Vec::new();
    let mut binom = BigInt::from(1);
    for i in 0..k as usize {
        let sign = if (k as usize - i).is_multiple_of(2) { 1 } else { -1 };
        lower.push((n * i, -Rational::from(&binom * sign)));
        binom = binom * (k as usize - i) / (i + 1);
    }
    for i in (top..c.len()).rev() {
        if c[i].is_zero() {
            continue;
        }
        let lead = core::mem::take(&mut c[i]);
        let base = i - top;
        for (off, coef) in &lower {
            c[base + off] += &(&lead * coef);
        }
    }
    c.truncate(top);
    c
}

fn dense_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// Residue of `q^t * num` modulo `(q^n - 1)^k`.
fn reduced_numerator(num: &LaurentPoly, t: i64, n: usize, k: u32) -> Vec<Rational> {
    if num.is_zero() {
        return Vec::new();
    }
    fold_mod_qn_minus_one(num.shift(t).dense_from_zero(), n, k)
}

/// Residue of the expanded denominator modulo `(q^n - 1)^k`.
fn reduced_denominator(den: &FactoredDen, n: usize, k: u32) -> Vec<Rational> {
    let mut acc = vec![den.scalar().clone()];
    for m in den.exponents() {
        let m = m as usize;
        let mut next = vec![Rational::zero(); acc.len() + m];
        for (i, c) in acc.iter().enumerate() {
            next[i] += c;
            next[i + m] -= c;
        }
        acc = fold_mod_qn_minus_one(next, n, k);
    }
    acc
}

/// Decides `f = g (mod Phi_n(q)^k)` for rational functions whose
/// denominators are units modulo `Phi_n`.
///
/// The cross-multiplied difference `f.num * den(g) - g.num * den(f)` is
/// multiplied by `q^t`, where `t` is the smallest shift making both
/// numerators ordinary polynomials; `q` is a unit modulo `Phi_n^k`, so
/// this does not change the answer. Every factor is reduced modulo
/// `(q^n - 1)^k` before multiplying, and the final residue is taken
/// modulo `Phi_n^k` itself. The witness is that remainder.
pub fn congruent_mod_phi(f: &QRat, g: &QRat, n: u64, k: u32) -> Result<Verdict, Error> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("congruence modulo Phi_{n}^{k}")));
    }
    for den in [f.den(), g.den()] {
        if let Some((m, _)) = den.factors().find(|(m, _)| m % n == 0) {
            return Err(Error::DenominatorMeetsModulus { m, n });
        }
    }
    let t = [f.num(), g.num()].iter().filter_map(|p| p.low_exp()).map(|e| -e).max().unwrap_or(0).max(0);
    let nu = n as usize;
    let fnum = reduced_numerator(f.num(), t, nu, k);
    let gnum = reduced_numerator(g.num(), t, nu, k);
    let fden = reduced_denominator(f.den(), nu, k);
    let gden = reduced_denominator(g.den(), nu, k);
    let lhs = dense_mul(&fnum, &gden);
    let rhs = dense_mul(&gnum, &fden);
    let mut diff = vec![Rational::zero(); lhs.len().max(rhs.len())];
    for (d, x) in diff.iter_mut().zip(&lhs) {
        *d += x;
    }
    for (d, x) in diff.iter_mut().zip(&rhs) {
        *d -= x;
    }
    let diff = LaurentPoly::from_coeffs(0, fold_mod_qn_minus_one(diff, nu, k));
    let (_, rem) = diff.divrem(&phi_power(n, k))?;
    Ok(Verdict::from_remainder(rem, k))
}

/// Dense arithmetic in `Q[q] / ((q^n - 1)^k)`. Every element is stored as
/// `k n` coefficients; since `(q^n - 1)^k` is a multiple of `Phi_n^k`,
/// reducing there first never changes a verdict modulo `Phi_n^k`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    n: usize,
    k: u32,
    /// `(q^n - 1)^l` for `l < k`
    t_powers: Vec<LaurentPoly>,
}

impl ResidueRing {
    pub fn new(n: u64, k: u32) -> Result<Self, Error> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!("residue ring modulo (q^{n} - 1)^{k}")));
        }
        let t = LaurentPoly::q_pow(n as i64) - LaurentPoly::one();
        let t_powers = (0..k).map(|l| t.pow(l)).collect();
        Ok(ResidueRing { n: n as usize, k, t_powers })
    }

    pub fn len(&self) -> usize {
        self.n * self.k as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.len()]
    }

    pub fn one(&self) -> Vec<Rational> {
        let mut v = self.zero();
        v[0] = Rational::one();
        v
    }

    /// `q^e` for any integer `e`: with `e = jn + i`, `q^e = q^i (1 + t)^j`
    /// and `t^k = 0`, so the generalized binomial series stops at `t^{k-1}`.
    pub fn monomial(&self, e: i64) -> Vec<(usize, Rational)> {
        let n = self.n as i64;
        let (j, i) = (e.div_euclid(n), e.rem_euclid(n) as usize);
        let mut out: Vec<(usize, Rational)> = Vec::new();
        let mut binom = Rational::one();
        for (l, tp) in self.t_powers.iter().enumerate() {
            if binom.is_zero() {
                break;
            }
            for (x, c) in tp.terms() {
                let idx = i + x as usize;
                let v = &binom * c;
                match out.iter_mut().find(|(y, _)| *y == idx) {
                    Some((_, acc)) => *acc += &v,
                    None => out.push((idx, v)),
                }
            }
            binom = binom * Rational::from_int(j - l as i64) / Rational::from_int(l as i64 + 1);
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    /// Residue of a Laurent polynomial.
    pub fn reduce(&self, p: &LaurentPoly) -> Vec<Rational> {
        let mut out = self.zero();
        for (e, c) in p.terms() {
            for (idx, m) in self.monomial(e) {
                out[idx] += &(c * &m);
            }
        }
        out
    }

    /// `x * sum_i c_i q^{e_i}`
    pub fn mul_sparse(&self, x: &[Rational], terms: &[(i64, Rational)]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); 2 * self.len()];
        for (e, c) in terms {
            for (off, m) in self.monomial(*e) {
                let cm = c * &m;
                for (i, xi) in x.iter().enumerate() {
                    if !xi.is_zero() {
                        out[i + off] += &(xi * &cm);
                    }
                }
            }
        }
        fold_mod_qn_minus_one(out, self.n, self.k)
    }

    pub fn add(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn sub(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    /// Remainder of a residue modulo `Phi_n^k`, as a verdict on `x = 0`.
    pub fn verdict(&self, x: Vec<Rational>) -> Result<Verdict, Error> {
        let (_, rem) = LaurentPoly::from_coeffs(0, x).divrem(&phi_power(self.n as u64, self.k))?;
        Ok(Verdict::from_remainder(rem, self.k))
    }
}

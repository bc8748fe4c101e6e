//! Laurent polynomials in one variable `q` over exact rationals.
//!
//! Storage is dense from the lowest nonzero exponent upward. The supports
//! that occur here are contiguous, so a sparse map would only add overhead.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;
use crate::rational::Rational;

/// A finitely supported map from exponents of `q` to rational coefficients.
///
/// Invariant: either `coeffs` is empty (the zero polynomial, `low == 0`)
/// or both its first and last entries are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: Rational, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: e, coeffs: vec![c] }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// `1 - q^m`.
    pub fn one_minus_q_pow(m: i64) -> Self {
        Self::from_sparse(&[(0, Rational::one()), (m, -Rational::one())])
    }

    /// Builds `sum c * q^(low + i)` and normalizes.
    pub fn from_coeffs(low: i64, coeffs: Vec<Rational>) -> Self {
        LaurentPoly { low, coeffs }.normalized()
    }

    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(low, coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    /// Sums the given `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_sparse(terms: &[(i64, Rational)]) -> Self {
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            return Self::zero();
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn low_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient; `None` for zero.
    pub fn high_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// True when there are no negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Dense coefficients starting at [`low_exp`](Self::low_exp).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> Rational {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Multiplication by `q^t`.
    pub fn shift(&self, t: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + t, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Product with a polynomial given by a handful of terms. Linear in the
    /// length of `self`, which is what every Pochhammer-style product needs.
    pub fn mul_sparse(&self, terms: &[(i64, Rational)]) -> Self {
        if self.is_zero() || terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut out = vec![Rational::zero(); self.coeffs.len() + (hi - lo) as usize];
        let minus_one = -Rational::one();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let off = (e - lo) as usize;
            let slot = &mut out[off..off + self.coeffs.len()];
            if c.is_one() {
                for (o, x) in slot.iter_mut().zip(&self.coeffs) {
                    *o += x;
                }
            } else if *c == minus_one {
                for (o, x) in slot.iter_mut().zip(&self.coeffs) {
                    *o -= x;
                }
            } else {
                for (o, x) in slot.iter_mut().zip(&self.coeffs) {
                    *o += &(x * c);
                }
            }
        }
        Self::from_coeffs(self.low + lo, out)
    }

    /// Multiplication by `1 - q^m`.
    pub fn mul_one_minus_q_pow(&self, m: i64) -> Self {
        self.mul_sparse(&[(0, Rational::one()), (m, -Rational::one())])
    }

    /// Exact division by `1 - q^m` (`m != 0`); `None` if it does not divide.
    pub fn div_one_minus_q_pow(&self, m: i64) -> Option<Self> {
        assert!(m != 0, "division by 1 - q^0 = 0");
        if m < 0 {
            // 1 - q^m = -q^m (1 - q^(-m))
            return self.div_one_minus_q_pow(-m).map(|p| -p.shift(-m));
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let m = m as usize;
        let len = self.coeffs.len();
        if len <= m {
            return None;
        }
        let mut quot: Vec<Rational> = Vec::with_capacity(len);
        for i in 0..len {
            let mut c = self.coeffs[i].clone();
            if i >= m {
                c += &quot[i - m];
            }
            quot.push(c);
        }
        if quot[len - m..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        quot.truncate(len - m);
        Some(Self::from_coeffs(self.low, quot))
    }

    /// Euclidean division of ordinary polynomials: `self = q * g + r` with
    /// `deg r < deg g`.
    pub fn divrem(&self, g: &Self) -> Result<(Self, Self), Error> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        for p in [self, g] {
            if !p.is_polynomial() {
                return Err(Error::NotAPolynomial(p.low));
            }
        }
        let gdeg = g.high_exp().unwrap() as usize;
        let Some(fdeg) = self.high_exp() else {
            return Ok((Self::zero(), Self::zero()));
        };
        let fdeg = fdeg as usize;
        if fdeg < gdeg {
            return Ok((Self::zero(), self.clone()));
        }
        let gd = g.dense_from_zero();
        let mut rem = self.dense_from_zero();
        let lead_inv = gd[gdeg].recip().unwrap();
        let mut quot = vec![Rational::zero(); fdeg - gdeg + 1];
        for i in (gdeg..=fdeg).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] * &lead_inv;
            let base = i - gdeg;
            for (j, gj) in gd.iter().enumerate().take(gdeg) {
                if !gj.is_zero() {
                    rem[base + j] -= &(&c * gj);
                }
            }
            rem[i] = Rational::zero();
            quot[base] = c;
        }
        rem.truncate(gdeg);
        Ok((Self::from_coeffs(0, quot), Self::from_coeffs(0, rem)))
    }

    /// Coefficients of an ordinary polynomial indexed from exponent 0.
    pub(crate) fn dense_from_zero(&self) -> Vec<Rational> {
        debug_assert!(self.is_polynomial());
        let mut out = vec![Rational::zero(); self.low.max(0) as usize];
        out.extend(self.coeffs.iter().cloned());
        out
    }

    /// Exact value at `x`.
    pub fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        if x.is_zero() {
            return Ok(if self.low < 0 {
                return Err(Error::ZeroEvaluationPoint);
            } else if self.low == 0 {
                self.coeffs[0].clone()
            } else {
                Rational::zero()
            });
        }
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc * x.pow(self.low))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high_exp().unwrap().max(rhs.high_exp().unwrap());
        let mut out = vec![Rational::zero(); (hi - lo + 1) as usize];
        for p in [self, rhs] {
            let off = (p.low - lo) as usize;
            for (o, c) in out[off..].iter_mut().zip(&p.coeffs) {
                *o += c;
            }
        }
        LaurentPoly::from_coeffs(lo, out)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, out)
    }
}

macro_rules! owned_ops {
    ($($Trait:ident $method:ident),*) => {$(
        impl $Trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $Trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

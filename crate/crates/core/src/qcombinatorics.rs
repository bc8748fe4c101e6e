//! q-integers, q-Pochhammer symbols with monomial arguments, Gaussian
//! binomials, and rational functions whose denominators are kept as
//! explicit products of `(1 - q^m)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;
use crate::polyring::LaurentPoly;
use crate::rational::Rational;

/// `scalar * prod (1 - q^m)` over a multiset of positive `m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactoredDen {
    scalar: Rational,
    // m -> multiplicity
    factors: BTreeMap<u64, u32>,
}

impl FactoredDen {
    pub fn one() -> Self {
        FactoredDen { scalar: Rational::one(), factors: BTreeMap::new() }
    }

    pub fn new(scalar: Rational, factors: impl IntoIterator<Item = u64>) -> Result<Self, Error> {
        if scalar.is_zero() {
            return Err(Error::InvalidArgument("denominator scalar must be nonzero".into()));
        }
        let mut den = FactoredDen { scalar, factors: BTreeMap::new() };
        for m in factors {
            if m == 0 {
                return Err(Error::VanishingDenominator(0));
            }
            den.push(m);
        }
        Ok(den)
    }

    fn push(&mut self, m: u64) {
        *self.factors.entry(m).or_insert(0) += 1;
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    /// `(m, multiplicity)` pairs in increasing `m`.
    pub fn factors(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&m, &k)| (m, k))
    }

    /// Every factor exponent, repeated by multiplicity.
    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors().flat_map(|(m, k)| core::iter::repeat_n(m, k as usize))
    }

    pub fn factor_count(&self) -> usize {
        self.factors.values().map(|&k| k as usize).sum()
    }

    /// Degree of the expanded denominator.
    pub fn degree(&self) -> u64 {
        self.factors().map(|(m, k)| m * k as u64).sum()
    }

    /// The denominator as an explicit polynomial.
    pub fn expand(&self) -> LaurentPoly {
        self.exponents().fold(LaurentPoly::constant(self.scalar.clone()), |acc, m| acc.mul_one_minus_q_pow(m as i64))
    }

    /// Multiset union (largest multiplicity of each factor), scalar 1.
    pub fn union(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (&m, &k) in &other.factors {
            let e = factors.entry(m).or_insert(0);
            *e = (*e).max(k);
        }
        FactoredDen { scalar: Rational::one(), factors }
    }

    /// Multiset sum of factors, product of scalars.
    pub fn product(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (&m, &k) in &other.factors {
            *factors.entry(m).or_insert(0) += k;
        }
        FactoredDen { scalar: &self.scalar * &other.scalar, factors }
    }

    /// Factors of `self` left after removing those of `sub` (which must be
    /// a sub-multiset).
    fn cofactor_exponents(&self, sub: &Self) -> Vec<u64> {
        let mut out = Vec::new();
        for (&m, &k) in &self.factors {
            let have = sub.factors.get(&m).copied().unwrap_or(0);
            debug_assert!(have <= k);
            out.extend(core::iter::repeat_n(m, (k - have) as usize));
        }
        out
    }
}

impl fmt::Debug for FactoredDen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        for (m, k) in self.factors() {
            write!(f, "*(1 - q^{m})")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// `num / den` with a structurally factored denominator. Never reduced to
/// lowest terms; equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct QRat {
    num: LaurentPoly,
    den: FactoredDen,
}

impl QRat {
    pub fn new(num: LaurentPoly, den: FactoredDen) -> Self {
        QRat { num, den }
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        QRat { num, den: FactoredDen::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `c * q^e`.
    pub fn monomial(c: Rational, e: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(c, e))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &FactoredDen {
        &self.den
    }

    pub fn into_parts(self) -> (LaurentPoly, FactoredDen) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Division by `1 - q^m` for any nonzero integer `m`. A negative `m` is
    /// rewritten as `-q^m (1 - q^|m|)` so the stored factor stays positive.
    pub fn div_one_minus_q_pow(mut self, m: i64) -> Result<Self, Error> {
        if m == 0 {
            return Err(Error::VanishingDenominator(0));
        }
        if m < 0 {
            self.num = -self.num.shift(-m);
        }
        self.den.push(m.unsigned_abs());
        Ok(self)
    }

    /// Product with a polynomial; the denominator is untouched.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        QRat { num: &self.num * p, den: self.den.clone() }
    }

    /// Multiplication by `c * q^e`.
    pub fn mul_monomial(&self, c: &Rational, e: i64) -> Self {
        QRat { num: self.num.scale(c).shift(e), den: self.den.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QRat { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Numerator over the given common denominator `target`, which must
    /// contain every factor of `self.den`; the result has scalar 1.
    fn lift_to(&self, target: &FactoredDen) -> LaurentPoly {
        let mut num = self.num.scale(&self.den.scalar.recip().unwrap());
        for m in target.cofactor_exponents(&self.den) {
            num = num.mul_one_minus_q_pow(m as i64);
        }
        num
    }

    /// True iff both represent the same rational function.
    pub fn eq_exact(&self, other: &Self) -> bool {
        (self - other).num.is_zero()
    }

    /// Exact value at `x`; errors if the denominator vanishes there.
    pub fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        let den = self.den.expand().eval(x)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(x)? / den)
    }
}

impl PartialEq for QRat {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

/// `f.num * poly(g.den) - g.num * poly(f.den)`, scalars included. Zero iff
/// `f` and `g` are the same rational function.
pub fn cross_difference(f: &QRat, g: &QRat) -> LaurentPoly {
    &(&f.num * &g.den.expand()) - &(&g.num * &f.den.expand())
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let den = self.den.union(&rhs.den);
        let num = &self.lift_to(&den) + &rhs.lift_to(&den);
        QRat { num, den }
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        QRat { num: &self.num * &rhs.num, den: self.den.product(&rhs.den) }
    }
}

macro_rules! owned_ops {
    ($($Trait:ident $method:ident),*) => {$(
        impl $Trait for QRat {
            type Output = QRat;
            fn $method(self, rhs: QRat) -> QRat {
                (&self).$method(&rhs)
            }
        }
        impl $Trait<&QRat> for QRat {
            type Output = QRat;
            fn $method(self, rhs: &QRat) -> QRat {
                (&self).$method(rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

impl core::iter::Sum for QRat {
    fn sum<I: Iterator<Item = QRat>>(iter: I) -> Self {
        iter.fold(QRat::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({:?})", self.num, self.den)
    }
}

/// `[m]_{q^b} = (1 - q^{mb}) / (1 - q^b)`.
pub fn q_integer(m: i64, b: u64) -> Result<QRat, Error> {
    if m == 0 {
        return Err(Error::InvalidArgument("q-integer [0] requested".into()));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("q-integer base exponent must be positive".into()));
    }
    QRat::from_poly(LaurentPoly::one_minus_q_pow(m * b as i64)).div_one_minus_q_pow(b as i64)
}

/// `1 / [j]_{q^b} = (1 - q^b) / (1 - q^{jb})`.
pub fn recip_q_integer(j: i64, b: u64) -> Result<QRat, Error> {
    if j == 0 || b == 0 {
        return Err(Error::InvalidArgument(format!("reciprocal of [{j}]_(q^{b})")));
    }
    QRat::from_poly(LaurentPoly::one_minus_q_pow(b as i64)).div_one_minus_q_pow(j * b as i64)
}

/// `(q^u; q^b)_k = prod_{j<k} (1 - q^{u + jb})`.
pub fn q_pochhammer(u: i64, b: u64, k: u64) -> LaurentPoly {
    (0..k as i64).fold(LaurentPoly::one(), |acc, j| acc.mul_one_minus_q_pow(u + j * b as i64))
}

/// `(q^b; q^b)_k` as a factored denominator.
pub fn q_factorial_den(b: u64, k: u64) -> FactoredDen {
    FactoredDen::new(Rational::one(), (1..=k).map(|j| j * b)).unwrap()
}

/// Gaussian binomial `[n choose k]` in base `q^b`, for any integer `n`.
/// For negative `n` the result is a Laurent polynomial.
pub fn gauss_binomial(n: i64, k: u64, b: u64) -> LaurentPoly {
    assert!(b >= 1, "Gaussian binomial base exponent must be positive");
    let b_i = b as i64;
    let mut num = q_pochhammer(b_i * (n - k as i64 + 1), b, k);
    for j in 1..=k as i64 {
        num = num
            .div_one_minus_q_pow(j * b_i)
            .unwrap_or_else(|| panic!("inexact Gaussian binomial division for [{n} choose {k}]_(q^{b})"));
    }
    num
}

/// `[-r/d choose k]_{q^d}` obtained from the Pochhammer quotient:
/// `(-1)^k q^{-rk - d*C(k,2)} (q^r;q^d)_k / (q^d;q^d)_k`.
pub fn rational_binomial(r: i64, d: u64, k: u64) -> QRat {
    let ki = k as i64;
    let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let e = -r * ki - d as i64 * ki * (ki - 1) / 2;
    QRat::new(LaurentPoly::monomial(sign, e) * q_pochhammer(r, d, k), q_factorial_den(d, k))
}

/// Checks `(q^r;q^d)_k / (q^d;q^d)_k = (-1)^k q^{rk + d C(k,2)} [-r/d choose k]_{q^d}`,
/// with the right-hand binomial expanded by its product definition
/// `prod_{j<k} (1 - q^{-r-dj}) / prod_{j<=k} (1 - q^{dj})`.
pub fn poch_to_binom_check(r: i64, d: u64, k: u64) -> bool {
    let ki = k as i64;
    let di = d as i64;
    let lhs = QRat::new(q_pochhammer(r, d, k), q_factorial_den(d, k));
    let binom_num = (0..ki).fold(LaurentPoly::one(), |acc, j| acc.mul_one_minus_q_pow(-r - di * j));
    let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let rhs = QRat::new(binom_num, q_factorial_den(d, k)).mul_monomial(&sign, r * ki + di * ki * (ki - 1) / 2);
    lhs.eq_exact(&rhs)
}

/// The two q-Chu-Vandermonde convolutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChuForm {
    /// weight `q^{(n-j)(k-j)}`
    First,
    /// weight `q^{j(m-k+j)}`
    Second,
}

impl TryFrom<u8> for ChuForm {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self, Error> {
        match v {
            1 => Ok(ChuForm::First),
            2 => Ok(ChuForm::Second),
            _ => Err(Error::InvalidArgument(format!("q-Chu-Vandermonde form must be 1 or 2, got {v}"))),
        }
    }
}

/// Checks `[n+m choose k]_q` against the chosen convolution sum exactly.
pub fn qchu_check(form: ChuForm, n: u64, m: u64, k: u64) -> bool {
    let lhs = gauss_binomial((n + m) as i64, k, 1);
    let (ni, mi, ki) = (n as i64, m as i64, k as i64);
    let rhs = (0..=ki).fold(LaurentPoly::zero(), |acc, j| {
        let w = match form {
            ChuForm::First => (ni - j) * (ki - j),
            ChuForm::Second => j * (mi - ki + j),
        };
        let term = (gauss_binomial(ni, j as u64, 1) * gauss_binomial(mi, (ki - j) as u64, 1)).shift(w);
        acc + term
    });
    lhs == rhs
}

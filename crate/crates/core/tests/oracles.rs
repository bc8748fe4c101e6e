//! Checks against constructions that share no code path with the engine:
//! term-by-term sums with expanded denominators, plain long division, and
//! derivatives at `q = -1`.

use num_bigint::BigInt;
use qrv_core::theorems::{
    derive_instance, f21_truncated_classical, step_binom_shift, verify_classical, verify_theorem,
    verify_theorem_adjusted, verify_theorem_exact,
};
use qrv_core::{cyclotomic, euler_totient, q_pochhammer, LaurentPoly, Rational};

/// Truncated sum as a single fraction `(num, den)` of ordinary Laurent
/// polynomials, one term at a time.
fn naive_lhs(n: i64, d: i64, r: i64) -> (LaurentPoly, LaurentPoly) {
    let mut num = LaurentPoly::zero();
    let mut den = LaurentPoly::one();
    for k in 0..n as u64 {
        let t_num = &q_pochhammer(r, d as u64, k) * &q_pochhammer(d - r, d as u64, k);
        let fact = q_pochhammer(d, d as u64, k);
        let t_den = &fact * &fact;
        num = &(&num * &t_den) + &(&t_num * &den);
        den = &den * &t_den;
    }
    (num, den)
}

/// `num/den == sign q^e (mod Phi_n^2)` by clearing denominators and long
/// division by the squared cyclotomic polynomial.
fn naive_verdict(n: i64, d: i64, r: i64) -> bool {
    let inst = derive_instance(n, d, r).unwrap();
    let (num, den) = naive_lhs(n, d, r);
    let rhs = LaurentPoly::monomial(Rational::from_int(inst.sign as i64), inst.e);
    let diff = &num - &(&rhs * &den);
    if diff.is_zero() {
        return true;
    }
    let poly = diff.shift(-diff.low_exp().unwrap());
    let phi = cyclotomic(n as u64);
    let modulus = &*phi * &*phi;
    poly.divrem(&modulus).unwrap().1.is_zero()
}

fn derivative(p: &LaurentPoly) -> LaurentPoly {
    let terms: Vec<(i64, Rational)> = p.terms().map(|(e, c)| (e - 1, c * &Rational::from_int(e))).collect();
    LaurentPoly::from_sparse(&terms)
}

#[test]
fn engine_matches_long_division() {
    for n in 2..=8i64 {
        for d in 2..=5i64 {
            if (2..=d).any(|g| n % g == 0 && d % g == 0) {
                continue;
            }
            for r in -2..=d + 2 {
                let expected = naive_verdict(n, d, r);
                assert_eq!(verify_theorem(n, d, r).unwrap().holds, expected, "({n}, {d}, {r})");
                assert_eq!(verify_theorem_exact(n, d, r).unwrap().holds, expected, "({n}, {d}, {r})");
            }
        }
    }
}

#[test]
fn n_two_by_derivative_at_minus_one() {
    // (1+q)^2 | f  iff  f(-1) = f'(-1) = 0
    let minus_one = Rational::from_int(-1);
    for (d, r) in [(3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (5, 5), (7, 3)] {
        let inst = derive_instance(2, d, r).unwrap();
        let (num, den) = naive_lhs(2, d, r);
        let diff = &num - &(&LaurentPoly::monomial(Rational::from_int(inst.sign as i64), inst.e) * &den);
        let holds = diff.eval(&minus_one).unwrap().is_zero() && derivative(&diff).eval(&minus_one).unwrap().is_zero();
        assert_eq!(verify_theorem(2, d, r).unwrap().holds, holds, "(2, {d}, {r})");
    }
}

#[test]
fn degenerate_two_three_three() {
    let inst = derive_instance(2, 3, 3).unwrap();
    assert!(inst.degenerate);
    assert_eq!((inst.a, inst.e, inst.sign), (1, 0, -1));
    let (num, den) = naive_lhs(2, 3, 3);
    assert_eq!(num, den);
    // 1 - (-1) = 2 is a unit modulo (1+q)^2
    assert!(!naive_verdict(2, 3, 3));
    assert!(!verify_theorem(2, 3, 3).unwrap().holds);
    assert!(verify_theorem_adjusted(2, 3, 3).unwrap().holds);
}

#[test]
fn shift_counterexample_by_hand() {
    // k = 1: [alpha]_{q^3} - [3]_{q^3} - [sn]_{q^3} at (5, 3, 1) has numerator
    // q^-10 (q^10 - 1)(q^9 - 1), which holds Phi_5 exactly once.
    let num = &LaurentPoly::from_sparse(&[(10, Rational::one()), (0, Rational::from_int(-1))])
        * &LaurentPoly::from_sparse(&[(9, Rational::one()), (0, Rational::from_int(-1))]);
    let phi = cyclotomic(5);
    assert!(num.divrem(&phi).unwrap().1.is_zero());
    assert!(!num.divrem(&(&*phi * &*phi)).unwrap().1.is_zero());
    assert!(!step_binom_shift(5, 3, 1, 1).unwrap().holds);
}

#[test]
fn classical_spot_value() {
    // (1/2)_k^2 / (k!)^2 summed directly over big integers
    let mut num = BigInt::from(0);
    let mut den = BigInt::from(1);
    for k in 0..5u32 {
        let mut t_num = BigInt::from(1);
        let mut t_den = BigInt::from(1);
        for i in 0..k {
            t_num *= BigInt::from(2 * i + 1) * BigInt::from(2 * i + 1);
            t_den *= BigInt::from(2 * (i + 1)) * BigInt::from(2 * (i + 1));
        }
        num = num * &t_den + &t_num * &den;
        den *= t_den;
    }
    let direct = Rational::from_bigints(num, den).unwrap();
    assert_eq!(direct, Rational::new(230481, 147456));
    let diff = &direct - &Rational::one();
    assert_eq!(diff, Rational::new(83025, 147456));
    assert_eq!(83025, 25 * 3321);
    assert_eq!(diff.valuation(5), Some(2));
    assert_eq!(f21_truncated_classical(&Rational::new(1, 2), 5), direct);
    assert!(verify_classical(&Rational::new(1, 2), 5).unwrap().holds);
}

#[test]
fn classical_alpha_half_at_three() {
    // 1 + 1/4 + 9/64 = 89/64; 89/64 + 1 = 153/64 and 153 = 9 * 17
    assert_eq!(f21_truncated_classical(&Rational::new(1, 2), 3), Rational::new(89, 64));
    assert!(verify_classical(&Rational::new(1, 2), 3).unwrap().holds);
}

#[test]
fn cyclotomic_product_is_q_n_minus_one() {
    for n in 1..=120u64 {
        let prod = (1..=n).filter(|d| n % d == 0).fold(LaurentPoly::one(), |acc, d| &acc * &*cyclotomic(d));
        assert_eq!(prod, &LaurentPoly::q_pow(n as i64) - &LaurentPoly::one(), "n = {n}");
    }
}

fn prime_power_base(n: u64) -> Option<u64> {
    let p = (2..=n).find(|p| n.is_multiple_of(*p))?;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

#[test]
fn cyclotomic_value_at_one() {
    let one = Rational::one();
    assert!(cyclotomic(1).eval(&one).unwrap().is_zero());
    for n in 2..=200u64 {
        let expected = prime_power_base(n).unwrap_or(1);
        assert_eq!(cyclotomic(n).eval(&one).unwrap(), Rational::from_int(expected as i64), "n = {n}");
        assert_eq!(cyclotomic(n).high_exp(), Some(euler_totient(n) as i64));
    }
}

#[test]
fn cyclotomic_105_has_minus_two() {
    let small = |n: u64| cyclotomic(n).coeffs().iter().all(|c| c.abs() <= Rational::one());
    assert!((1..105).all(small));
    let phi = cyclotomic(105);
    assert!(phi.coeffs().contains(&Rational::from_int(-2)));
    assert_eq!(phi.coeff(7), Rational::from_int(-2));
    assert_eq!(phi.coeff(41), Rational::from_int(-2));
}

use proptest::prelude::*;
use qrv_core::congruence::{is_prime, phi_power};
use qrv_core::theorems::{derive_instance, verify_theorem, verify_theorem_adjusted};
use qrv_core::{
    congruent_mod_phi, cyclotomic, gauss_binomial, legendre, residue_index, FactoredDen, LaurentPoly, QRat, Rational,
    ResidueRing,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n, d))
}

fn big_rational() -> impl Strategy<Value = Rational> {
    (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (-6i64..6, prop::collection::vec(-9i64..10, 0..8)).prop_map(|(low, c)| LaurentPoly::from_ints(low, &c))
}

fn polynomial() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(-9i64..10, 0..12).prop_map(|c| LaurentPoly::from_ints(0, &c))
}

fn qrat() -> impl Strategy<Value = QRat> {
    (laurent(), prop::collection::vec(1u64..7, 0..4))
        .prop_map(|(num, f)| QRat::new(num, FactoredDen::new(Rational::one(), f).unwrap()))
}

fn coprime_pair(max_n: i64, max_d: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_n, 2..=max_d).prop_filter("coprime", |(n, d)| (2..=*d).all(|g| n % g != 0 || d % g != 0))
}

proptest! {
    #[test]
    fn rational_field_axioms(a in big_rational(), b in big_rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        }
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn laurent_ring_axioms(f in laurent(), g in laurent(), h in laurent()) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &LaurentPoly::one(), f.clone());
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn divrem_round_trip(f in polynomial(), g in polynomial()) {
        prop_assume!(!g.is_zero());
        let (q, r) = f.divrem(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        if let Some(rd) = r.high_exp() {
            prop_assert!(rd < g.high_exp().unwrap());
        }
    }

    #[test]
    fn shift_is_multiplication_by_a_monomial(f in laurent(), t in -20i64..20) {
        prop_assert_eq!(f.shift(t).shift(-t), f.clone());
        prop_assert_eq!(f.shift(t), &f * &LaurentPoly::q_pow(t));
    }

    #[test]
    fn one_minus_q_pow_division_inverts(f in laurent(), m in -9i64..10) {
        prop_assume!(m != 0);
        prop_assert_eq!(f.mul_one_minus_q_pow(m).div_one_minus_q_pow(m), Some(f));
    }

    #[test]
    fn eval_is_a_ring_homomorphism(f in laurent(), g in laurent(), x in rational()) {
        prop_assume!(!x.is_zero());
        let fx = f.eval(&x).unwrap();
        let gx = g.eval(&x).unwrap();
        prop_assert_eq!((&f + &g).eval(&x).unwrap(), &fx + &gx);
        prop_assert_eq!((&f * &g).eval(&x).unwrap(), &fx * &gx);
    }

    #[test]
    fn qrat_arithmetic_agrees_with_evaluation(f in qrat(), g in qrat()) {
        // no root of unity is a rational other than +-1
        for x in [Rational::from_int(2), Rational::new(-1, 3)] {
            let fx = f.eval(&x).unwrap();
            let gx = g.eval(&x).unwrap();
            prop_assert_eq!((&f + &g).eval(&x).unwrap(), &fx + &gx);
            prop_assert_eq!((&f - &g).eval(&x).unwrap(), &fx - &gx);
            prop_assert_eq!((&f * &g).eval(&x).unwrap(), &fx * &gx);
        }
        prop_assert!((&(&f + &g) - &g).eq_exact(&f));
    }

    #[test]
    fn congruence_is_an_equivalence(f in qrat(), g in qrat(), n in 7u64..12, k in 1u32..3) {
        prop_assert!(congruent_mod_phi(&f, &f, n, k).unwrap().holds);
        let fg = congruent_mod_phi(&f, &g, n, k).unwrap().holds;
        prop_assert_eq!(fg, congruent_mod_phi(&g, &f, n, k).unwrap().holds);
        if fg && k == 2 {
            prop_assert!(congruent_mod_phi(&f, &g, n, 1).unwrap().holds);
        }
    }

    #[test]
    fn adding_a_multiple_of_the_modulus(f in qrat(), h in laurent(), n in 2u64..12, k in 1u32..3) {
        prop_assume!(f.den().factors().all(|(m, _)| m % n != 0));
        let g = &f + &QRat::from_poly(&h * &phi_power(n, k));
        prop_assert!(congruent_mod_phi(&f, &g, n, k).unwrap().holds);
        if !h.is_zero() && k == 1 {
            let g2 = &f + &QRat::from_poly(&h * &phi_power(n, 1));
            let strict = congruent_mod_phi(&f, &g2, n, 2).unwrap().holds;
            let h_div = h.shift(-h.low_exp().unwrap()).divrem(&cyclotomic(n)).unwrap().1.is_zero();
            prop_assert_eq!(strict, h_div);
        }
    }

    #[test]
    fn residue_ring_reduces_like_division(f in polynomial(), n in 1u64..7, k in 1u32..4) {
        let ring = ResidueRing::new(n, k).unwrap();
        let modulus = (&LaurentPoly::q_pow(n as i64) - &LaurentPoly::one()).pow(k);
        let reduced = LaurentPoly::from_coeffs(0, ring.reduce(&f));
        prop_assert_eq!(reduced, f.divrem(&modulus).unwrap().1);
    }

    #[test]
    fn prime_cyclotomic_is_a_q_integer(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23])) {
        let bracket = LaurentPoly::from_ints(0, &vec![1; p as usize]);
        prop_assert_eq!(&*cyclotomic(p), &bracket);
        prop_assert_eq!(phi_power(p, 2), &bracket * &bracket);
    }

    #[test]
    fn legendre_is_multiplicative(a in -200i64..200, b in -200i64..200, p in 3u64..100) {
        prop_assume!(is_prime(p));
        let lhs = legendre(a * b, p).unwrap();
        prop_assert_eq!(lhs, legendre(a, p).unwrap() * legendre(b, p).unwrap());
    }

    #[test]
    fn residue_index_solves_the_congruence(num in -500i64..500, den in 1i64..50, n in 1u64..60) {
        let x = Rational::new(num, den);
        match residue_index(&x, n) {
            Ok(a) => {
                prop_assert!(a < n);
                let lhs = (a as i128 * x.denom().try_into().unwrap_or(0i128) - i128::try_from(x.numer()).unwrap()).rem_euclid(n as i128);
                prop_assert_eq!(lhs, 0);
            }
            Err(_) => prop_assert!((2..=n).any(|g| n % g == 0 && (x.denom() % g) == 0.into())),
        }
    }

    #[test]
    fn gauss_binomial_pascal(n in -8i64..10, k in 1u64..6, b in 1u64..4) {
        // [n, k] = [n-1, k-1] + q^{bk} [n-1, k]
        let lhs = gauss_binomial(n, k, b);
        let rhs = &gauss_binomial(n - 1, k - 1, b) + &gauss_binomial(n - 1, k, b).shift((b * k) as i64);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn instance_exponent_is_integral((n, d) in coprime_pair(60, 12), r in -40i64..40) {
        let inst = derive_instance(n, d, r).unwrap();
        prop_assert!((0..n).contains(&inst.a));
        prop_assert_eq!((inst.a * d + r) % n, 0);
        prop_assert_eq!(inst.sd * n, -(inst.a * d + r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theorem_fails_exactly_on_the_sign_boundary((n, d) in coprime_pair(14, 8), r in -10i64..20) {
        let inst = derive_instance(n, d, r).unwrap();
        prop_assert_eq!(verify_theorem(n, d, r).unwrap().holds, !inst.sign_anomaly());
        prop_assert!(verify_theorem_adjusted(n, d, r).unwrap().holds);
    }
}

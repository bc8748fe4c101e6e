use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("expected an ordinary polynomial, found negative exponent {0}")]
    NotAPolynomial(i64),
    #[error("cannot evaluate a polynomial with negative exponents at zero")]
    ZeroEvaluationPoint,
    #[error("rational with zero denominator")]
    ZeroDenominator,
    #[error("could not parse rational {0:?}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("denominator {0} is not invertible modulo {1}")]
    NotInvertible(String, u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("denominator factor (1 - q^{m}) is divisible by Phi_{n}(q)")]
    DenominatorMeetsModulus { m: u64, n: u64 },
    #[error("vanishing denominator factor (1 - q^0) at index {0}")]
    VanishingDenominator(u64),
    #[error("gcd({n}, {d}) = {g}, expected coprime parameters")]
    NotCoprime { n: i64, d: i64, g: i64 },
    #[error("exponent {0} is not an integer")]
    NonIntegralExponent(String),
}

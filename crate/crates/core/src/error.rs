use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    JacobiModulus(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("integer overflow")]
    Overflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient fields differ")]
    FieldMismatch,
    #[error("constant term is zero")]
    ZeroConstantTerm,
    #[error("constant term must be {expected}")]
    ConstantTerm { expected: &'static str },
    #[error("fractional powers are undefined over a prime field")]
    FractionalPowerOverPrimeField,
    #[error("series is not divisible by x")]
    NotDivisibleByX,
    #[error("{0} is not invertible in the coefficient field")]
    NotInvertible(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DarbouxError {
    #[error("denominator vanishes at z = 1")]
    SingularAtOne,
    #[error("unsupported Puiseux base exponent {0}")]
    UnsupportedExponent(String),
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("precision {0} bits is below the 64-bit minimum")]
    PrecisionTooLow(u32),
    #[error("n must be positive")]
    ZeroN,
    #[error("results at {low} and {high} bits disagree")]
    PrecisionDisagreement { low: u32, high: u32 },
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModpError {
    #[error("p = 2 has no closed form here; use the characteristic-two checks")]
    EvenCharacteristic,
    #[error("q = {0} is not a power of 2")]
    NotPowerOfTwo(u64),
    #[error("closed form is not divisible by 2x")]
    NotDivisible,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

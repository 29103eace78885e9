//! Small exact-arithmetic helpers: factorials, binomials, rational
//! constructors.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// binomial(n, k) with the convention 0 outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// 1 / n! as an exact rational.
pub fn inv_factorial(n: u32) -> BigRational {
    BigRational::new(BigInt::one(), factorial(n))
}

/// Extract an integer from a rational that must be integral.
pub fn expect_integer(r: &BigRational, context: &str) -> BigInt {
    assert!(
        r.is_integer(),
        "{context}: expected an integer, got {r}"
    );
    r.to_integer()
}

/// Extract a nonnegative integer from a rational.
pub fn expect_nonneg_integer(r: &BigRational, context: &str) -> BigInt {
    let n = expect_integer(r, context);
    assert!(!n.is_negative(), "{context}: expected nonnegative, got {n}");
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(6), BigInt::from(720));
    }
}

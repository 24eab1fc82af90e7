//! Arbitrary-precision rational scalars.
//!
//! `Rat` is always stored in lowest terms with a positive denominator;
//! `num::BigRational` maintains both invariants on construction.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

pub type Rat = BigRational;

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

/// n! as a rational (small n).
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Binomial coefficient C(n, k) as a rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return rat_zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as u64 {
        num *= BigInt::from(n as u64 - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

/// Integer power with negative exponents allowed.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num::traits::Pow::pow(base.clone(), exp as u64)
    } else {
        assert!(!base.is_zero(), "zero to a negative power");
        num::traits::Pow::pow(base.clone().recip(), (-exp) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_form() {
        let r = rat(6, -4);
        assert_eq!(r, rat(-3, 2));
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), rat_int(1));
        assert_eq!(factorial(5), rat_int(120));
    }

    #[test]
    fn binomial_row() {
        let row: Vec<Rat> = (0..=4).map(|k| binomial(4, k)).collect();
        assert_eq!(row, vec![rat_int(1), rat_int(4), rat_int(6), rat_int(4), rat_int(1)]);
    }
}

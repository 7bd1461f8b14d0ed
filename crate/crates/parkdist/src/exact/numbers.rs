//! Exact integer and rational building blocks shared by the closed forms.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;

/// n! as an exact integer.
pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Binomial coefficient C(n, k), exact.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `base^exp` as an exact rational, with negative exponents inverting.
/// `0^0 = 1`; zero to a negative power is a domain error.
pub fn rational_pow(base: &BigInt, exp: i64) -> Result<Rational> {
    if exp == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        if exp > 0 {
            return Ok(Rational::zero());
        }
        return Err(Error::ZeroToNegativePower { exp });
    }
    let mag = base.pow(exp.unsigned_abs() as u32);
    Ok(if exp > 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    })
}

/// Rational base raised to a (possibly negative) integer power; same
/// conventions as [`rational_pow`].
pub fn rational_pow_rat(base: &Rational, exp: i64) -> Result<Rational> {
    if exp == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        if exp > 0 {
            return Ok(Rational::zero());
        }
        return Err(Error::ZeroToNegativePower { exp });
    }
    let e = exp.unsigned_abs() as u32;
    let num = base.numer().pow(e);
    let den = base.denom().pow(e);
    Ok(if exp > 0 {
        Rational::new(num, den)
    } else {
        Rational::new(den, num)
    })
}

/// Nearest f64 to an arbitrary-size rational.
///
/// Values whose numerator or denominator overflow f64 range are rescaled by
/// powers of two first (keeping well over 64 significant bits), so
/// quantities like `k^k / (n+1)^(n-1)` convert accurately instead of
/// degenerating to `inf/inf`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let numer = r.numer();
    if numer.is_zero() {
        return 0.0;
    }
    let negative = numer.sign() == Sign::Minus;
    let num = numer.magnitude();
    let den = r.denom().magnitude();
    let keep = 96i64;
    let ns = (num.bits() as i64 - keep).max(0);
    let ds = (den.bits() as i64 - keep).max(0);
    let nt = (num >> ns as usize).to_f64().unwrap_or(f64::INFINITY);
    let dt = (den >> ds as usize).to_f64().unwrap_or(f64::INFINITY);
    let mut v = nt / dt;
    let shift = ns - ds;
    if shift != 0 {
        v *= 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    }
    if negative {
        -v
    } else {
        v
    }
}

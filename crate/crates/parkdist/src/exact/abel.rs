//! Abel-type binomial sums with rational offsets and shifted exponents.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::numbers::{binomial, rational_pow_rat};
use super::Rational;

/// The binomial sum
/// `sum_{k=0}^{n} C(n,k) (x+k)^(k+p) (y+n-k)^(n-k+q)`
/// evaluated exactly over the rationals.
///
/// `0^0` counts as 1. A zero base raised to a negative exponent makes the
/// instance inadmissible and is reported as a domain error carrying the
/// offending summation index.
pub fn abel_sum(n: usize, x: &Rational, y: &Rational, p: i64, q: i64) -> Result<Rational> {
    let mut acc = Rational::zero();
    for k in 0..=n {
        let bx = x + Rational::from_integer(BigInt::from(k));
        let by = y + Rational::from_integer(BigInt::from(n - k));
        let ex = k as i64 + p;
        let ey = (n - k) as i64 + q;
        let tx = rational_pow_rat(&bx, ex).map_err(|e| lift_domain(e, k))?;
        let ty = rational_pow_rat(&by, ey).map_err(|e| lift_domain(e, k))?;
        acc += Rational::from_integer(BigInt::from(binomial(n, k))) * tx * ty;
    }
    Ok(acc)
}

fn lift_domain(e: Error, k: usize) -> Error {
    match e {
        Error::ZeroToNegativePower { exp } => Error::AbelDomain { k, exp },
        other => other,
    }
}

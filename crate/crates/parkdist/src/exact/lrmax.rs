//! Exact formulas for left-to-right maxima of the induced permutation and
//! for the count of preference vectors with a fixed trailing pattern.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};

use super::numbers::{binomial, rational_pow};
use super::Rational;

/// Joint probability that space `i` holds a left-to-right maximum and that
/// the car parked there is `j`. Requires `1 <= i <= j <= n`.
pub fn lrmax_joint(n: usize, i: usize, j: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    if i < 1 || j < i || j > n {
        return Err(Error::IndexOutOfRange { index: if i < 1 { i } else { j }, n });
    }
    let np1 = BigInt::from(n + 1);
    let mut acc = Rational::from_integer(BigInt::from(binomial(j - 1, i - 1)));
    acc *= rational_pow(&BigInt::from(i), i as i64 - 1)?;
    acc *= rational_pow(&BigInt::from(n - i + 1), j as i64 - i as i64 - 1)?;
    let tail = Rational::from_integer(BigInt::from(i * (n - j))) * rational_pow(&np1, -(j as i64))?
        + rational_pow(&np1, 1 - j as i64)?;
    Ok(acc * tail)
}

/// Expected number of left-to-right maxima, evaluated by summing
/// [`lrmax_joint`] over all admissible `(i, j)` pairs.
///
/// The whole sum is carried as one integer over the common denominator
/// `(n+1)^n`. For fixed `i` the inner sum over `j = i+t` is a polynomial in
/// the two bases `n-i+1` and `n+1`, evaluated by a Horner-style recurrence
/// whose steps only ever multiply a big integer by a machine word, so the
/// quadratic number of terms does not pay a big-times-big product each.
pub fn lrmax_expect_double(n: usize, caps: &Caps) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    caps.check("left-to-right maxima double sum", n, caps.lrmax_double_n)?;
    let np1 = BigInt::from(n + 1);
    let mut np1_pows = Vec::with_capacity(n + 1);
    np1_pows.push(BigInt::one());
    for t in 1..=n {
        let next = &np1_pows[t - 1] * &np1;
        np1_pows.push(next);
    }

    let mut total = BigInt::zero();
    for i in 1..=n {
        let m = n - i;
        let b = BigInt::from(n - i + 1);
        // Diagonal term j = i: the factor i(n-i) + n + 1 = (i+1)(n-i+1)
        // cancels the (n-i+1)^(-1) power, leaving (i+1)(n+1)^(n-i).
        let mut acc_i = BigInt::from(i + 1) * &np1_pows[m];
        if m >= 1 {
            // Off-diagonal part: sum over s = j-i-1 of
            //   C(i+s, i-1) * (i(n-j) + n + 1) * b^s * (n+1)^(m-1-s).
            let top = m - 1;
            let mut binom = BigInt::from(binomial(n - 1, i - 1));
            let mut g = &binom * BigInt::from(n + 1);
            for s in (0..top).rev() {
                // C(i+s+1, i-1) -> C(i+s, i-1)
                binom = binom * BigInt::from(s + 2) / BigInt::from(i + s + 1);
                let w = BigInt::from(i * (m - 1 - s) + n + 1);
                g = g * &b + &binom * w * &np1_pows[top - s];
            }
            acc_i += g;
        }
        total += BigInt::from(i).pow((i - 1) as u32) * acc_i;
    }
    Ok(Rational::new(total, np1_pows[n].clone()))
}

/// Expected number of left-to-right maxima via the telescoped single sum
/// `n - sum_l C(n, l+1) (l-1)! / (n+1)^l`.
///
/// The coefficients `C(n, l+1) (l-1)!` satisfy an exact one-step integer
/// recurrence and the powers of `n+1` are folded in by Horner evaluation,
/// so the whole computation is big-times-word work plus one final reduction.
pub fn lrmax_expect_closed(n: usize, caps: &Caps) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    caps.check("left-to-right maxima closed form", n, caps.lrmax_closed_n)?;
    let np1 = BigInt::from(n + 1);
    let mut sum = BigInt::zero();
    let mut c = BigInt::from(n) * BigInt::from(n - 1) / BigInt::from(2);
    for l in 1..n {
        if l > 1 {
            // C(n, l+1) (l-1)! from C(n, l) (l-2)!
            c = c * BigInt::from(n - l) * BigInt::from(l - 1) / BigInt::from(l + 1);
        }
        sum = sum * &np1 + &c;
    }
    let denom = np1.pow((n - 1) as u32);
    let num = BigInt::from(n) * &denom - sum;
    Ok(Rational::new(num, denom))
}

/// Number of preference vectors of length `n` that park and whose last `m`
/// cars all prefer space 1: `(m+1) * (n+1)^(n-m-1)`.
pub fn trailer_count(n: usize, m: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    if m >= n {
        return Err(Error::InvalidTrailer { m, n });
    }
    Ok(BigUint::from(m + 1) * BigUint::from(n + 1).pow((n - m - 1) as u32))
}

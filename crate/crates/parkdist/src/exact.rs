//! Exact rational evaluation of the permutation distribution, its marginals,
//! and the brute-force enumeration oracles that certify the closed forms.

mod abel;
mod lrmax;
mod numbers;

pub use abel::abel_sum;
pub use lrmax::{lrmax_expect_closed, lrmax_expect_double, lrmax_joint, trailer_count};
pub use numbers::{binomial, factorial, rational_pow, rational_pow_rat, rational_to_f64};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::park::{self, count_parking_functions, Permutation, Simulator};
use crate::stats;

/// Arbitrary-precision rational number used throughout the exact layer.
pub type Rational = num_rational::BigRational;

/// An exact probability table over permutations of `1..=n`, keyed by
/// space-delimited one-line notation such as `"3 1 2 4"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistTable {
    n: usize,
    entries: BTreeMap<String, Rational>,
}

impl DistTable {
    /// Wraps a finished table, checking that the probabilities sum to 1.
    pub(crate) fn new(n: usize, entries: BTreeMap<String, Rational>) -> Self {
        let mut total = Rational::zero();
        for v in entries.values() {
            total += v.clone();
        }
        assert!(total.is_one(), "probability table for n = {n} sums to {total}");
        DistTable { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probability of the permutation with the given one-line key, if present.
    pub fn get(&self, key: &str) -> Option<&Rational> {
        self.entries.get(key)
    }

    /// Probability of a permutation; zero when it never arises.
    pub fn prob_of(&self, perm: &Permutation) -> Rational {
        self.entries.get(&perm.one_line_key()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Probability that the parking process produces this permutation:
/// the product of ascending-run lengths over `(n+1)^(n-1)`.
pub fn pmf_permutation(perm: &Permutation) -> Rational {
    let n = perm.len();
    Rational::new(
        BigInt::from(stats::big_l(perm)),
        BigInt::from(count_parking_functions(n)),
    )
}

/// Expected value of the run-length product `L` under a uniform random
/// permutation: `(n+1)^(n-1) / n!`.
pub fn expected_big_l(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    Ok(Rational::new(
        BigInt::from(count_parking_functions(n)),
        BigInt::from(factorial(n)),
    ))
}

/// Probability that the car parked in space `m` arrived `j`-th from last,
/// i.e. that cars `n-j+1, ..., n` parked in the given spaces (in car order).
///
/// Exact for any admissible position tuple; positions must be distinct and
/// in `1..=n`.
pub fn pmf_last_j(n: usize, positions: &[usize]) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    let j = positions.len();
    if j < 1 || j > n {
        return Err(Error::InvalidJ { j, n });
    }
    for &pos in positions {
        if pos < 1 || pos > n {
            return Err(Error::IndexOutOfRange { index: pos, n });
        }
    }
    let mut ks = positions.to_vec();
    ks.sort_unstable();
    for w in ks.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicatePosition { position: w[0] });
        }
    }

    let mut acc = Rational::new(
        BigInt::from(factorial(n - j)),
        BigInt::from(factorial(n - ks[j - 1])),
    );
    let mut prev = 0usize;
    for &k in &ks {
        let gap = k - prev;
        acc *= rational_pow(&BigInt::from(gap), gap as i64 - 2)?;
        acc /= Rational::from_integer(BigInt::from(factorial(gap - 1)));
        prev = k;
    }
    let top = n - ks[j - 1];
    acc *= rational_pow(&BigInt::from(top + 1), top as i64 - 1)?;
    // Run-length factor for each late car: car n-j+l+1 sits at positions[l],
    // and its ascending run is cut off only by the still-larger cars that
    // come after it in the list, so the run reaches back to the nearest such
    // position on its left (or to the start of the row).
    for (l, &il) in positions.iter().enumerate() {
        let block = positions[l + 1..].iter().copied().filter(|&r| r < il).max().unwrap_or(0);
        acc *= Rational::from_integer(BigInt::from(il - block));
    }
    acc /= Rational::from_integer(BigInt::from(count_parking_functions(n)));
    Ok(acc)
}

/// Probability that the last car parks in space `k`:
/// `(1/n) k^k C(n,k) (n-k+1)^(n-k-1) / (n+1)^(n-1)`.
pub fn pmf_last_car(n: usize, k: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let mut acc = Rational::new(BigInt::one(), BigInt::from(n));
    acc *= rational_pow(&BigInt::from(k), k as i64)?;
    acc *= Rational::from_integer(BigInt::from(binomial(n, k)));
    acc *= rational_pow(&BigInt::from(n - k + 1), n as i64 - k as i64 - 1)?;
    acc /= Rational::from_integer(BigInt::from(count_parking_functions(n)));
    Ok(acc)
}

/// Probability that the next-to-last car parks in space `l` and the last car
/// in space `m`.
pub fn pmf_last_two(n: usize, l: usize, m: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    if n < 2 {
        return Err(Error::InvalidJ { j: 2, n });
    }
    for pos in [l, m] {
        if pos < 1 || pos > n {
            return Err(Error::IndexOutOfRange { index: pos, n });
        }
    }
    if l == m {
        return Err(Error::DuplicatePosition { position: l });
    }
    let base = |a: usize, b: usize| -> Result<Rational> {
        let mut acc = Rational::new(
            BigInt::from(factorial(n - 2)),
            BigInt::from(factorial(a - 1)) * BigInt::from(factorial(b - a - 1)),
        );
        acc *= rational_pow(&BigInt::from(a), a as i64 - 2)?;
        acc *= rational_pow(&BigInt::from(b - a), (b - a) as i64 - 2)?;
        acc *= rational_pow(&BigInt::from(n - b + 1), n as i64 - b as i64 - 1)?;
        acc /= Rational::from_integer(BigInt::from(factorial(n - b)));
        acc /= Rational::from_integer(BigInt::from(count_parking_functions(n)));
        Ok(acc)
    };
    if l < m {
        Ok(Rational::from_integer(BigInt::from(l * m)) * base(l, m)?)
    } else {
        Ok(Rational::from_integer(BigInt::from((l - m) * m)) * base(m, l)?)
    }
}

/// Probability that the first car parks in space 1.
///
/// The first car always takes its preferred space, and the parking property
/// is invariant under permuting the preference coordinates, so the count of
/// parking functions with first coordinate 1 equals the trailing-pattern
/// count `2 (n+1)^(n-2)`, giving exactly `2/(n+1)`.
pub fn pmf_first_car_space_one(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    Ok(Rational::new(BigInt::from(2), BigInt::from(n + 1)))
}

/// Probability that the first car parks in space `n`.
///
/// A preference vector with first coordinate `n` parks iff the remaining
/// `n-1` cars fill spaces `1..n-1` on their own, i.e. form a parking
/// function of size `n-1`; that gives `n^(n-2) / (n+1)^(n-1)`.
pub fn pmf_first_car_space_last(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    let mut acc = rational_pow(&BigInt::from(n), n as i64 - 2)?;
    acc /= Rational::from_integer(BigInt::from(count_parking_functions(n)));
    Ok(acc)
}

/// Borel distribution mass `e^(-j) j^(j-1) / j!`, evaluated in log space so
/// large `j` stays finite.
pub fn borel_pmf(j: usize) -> f64 {
    assert!(j >= 1, "Borel support starts at 1");
    let jf = j as f64;
    ((jf - 1.0) * jf.ln() - jf - ln_gamma(jf + 1.0)).exp()
}

const ENUMERATION_HARD_LIMIT: usize = 12;

fn small_factorials(n: usize) -> Vec<u64> {
    let mut f = vec![1u64; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as u64;
    }
    f
}

/// Rank of a permutation (one-line, values `1..=n`) in lexicographic order.
fn lehmer_rank(forward: &[u32], fact: &[u64]) -> usize {
    let n = forward.len();
    let mut rank = 0u64;
    for i in 0..n {
        let mut smaller = 0u64;
        for j in (i + 1)..n {
            if forward[j] < forward[i] {
                smaller += 1;
            }
        }
        rank += smaller * fact[n - 1 - i];
    }
    rank as usize
}

fn lehmer_unrank(n: usize, mut rank: u64, fact: &[u64]) -> Vec<u32> {
    let mut avail: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let f = fact[n - 1 - i];
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(avail.remove(idx));
    }
    out
}

/// Ground-truth distribution on permutations obtained by enumerating every
/// preference vector in `[n]^n`, simulating the parking process, and
/// tallying the outcomes. Independent of every closed form in this module.
pub fn induced_distribution_oracle(n: usize, caps: &Caps) -> Result<DistTable> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    caps.check_oracle("induced distribution oracle", n)?;
    assert!(n <= ENUMERATION_HARD_LIMIT, "enumeration beyond n = {ENUMERATION_HARD_LIMIT} is not feasible");
    let fact = small_factorials(n);
    let nfact = fact[n] as usize;
    let counts = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut tally = vec![0u64; nfact];
            let mut sim = Simulator::new(n);
            park::visit_preferences_with_first(n, first, &mut |prefs| {
                if sim.run(prefs) {
                    tally[lehmer_rank(sim.forward(), &fact)] += 1;
                }
            });
            tally
        })
        .reduce(
            || vec![0u64; nfact],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let parked: u64 = counts.iter().sum();
    let pf_count = count_parking_functions(n);
    assert_eq!(BigUint::from(parked), pf_count, "parked-vector count mismatch at n = {n}");
    let denom = BigInt::from(pf_count);
    let mut entries = BTreeMap::new();
    for (rank, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let forward = lehmer_unrank(n, rank as u64, &fact);
        let key = Permutation::from_forward(forward)?.one_line_key();
        entries.insert(key, Rational::new(BigInt::from(c), denom.clone()));
    }
    Ok(DistTable::new(n, entries))
}

/// Ground-truth law of the spaces taken by the last `j` cars, by enumeration.
/// Keys are `[space of car n-j+1, ..., space of car n]`.
pub fn oracle_last_j_distribution(
    n: usize,
    j: usize,
    caps: &Caps,
) -> Result<BTreeMap<Vec<usize>, Rational>> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    if j < 1 || j > n {
        return Err(Error::InvalidJ { j, n });
    }
    caps.check_oracle("last-car space oracle", n)?;
    let maps = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut tally: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            let mut sim = Simulator::new(n);
            park::visit_preferences_with_first(n, first, &mut |prefs| {
                if sim.run(prefs) {
                    let key: Vec<usize> =
                        sim.inverse()[n - j..].iter().map(|&s| s as usize).collect();
                    *tally.entry(key).or_insert(0) += 1;
                }
            });
            tally
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let denom = BigInt::from(count_parking_functions(n));
    Ok(maps
        .into_iter()
        .map(|(k, c)| (k, Rational::new(BigInt::from(c), denom.clone())))
        .collect())
}

/// Ground-truth law of the space taken by the first car, by enumeration.
/// Entry `k-1` is the probability of space `k`.
pub fn oracle_first_car_distribution(n: usize, caps: &Caps) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    caps.check_oracle("first-car space oracle", n)?;
    let counts: Vec<u64> = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut sim = Simulator::new(n);
            let mut count = 0u64;
            park::visit_preferences_with_first(n, first, &mut |prefs| {
                if sim.run(prefs) {
                    count += 1;
                }
            });
            count
        })
        .collect();
    let denom = BigInt::from(count_parking_functions(n));
    Ok(counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), denom.clone()))
        .collect())
}

/// Ground-truth expected number of left-to-right maxima, by enumeration.
pub fn oracle_lrmax_expectation(n: usize, caps: &Caps) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    caps.check_oracle("left-to-right maxima oracle", n)?;
    let total: u64 = (1..=n as u32)
        .into_par_iter()
        .map(|first| {
            let mut sim = Simulator::new(n);
            let mut acc = 0u64;
            park::visit_preferences_with_first(n, first, &mut |prefs| {
                if sim.run(prefs) {
                    let mut max = 0u32;
                    for &c in sim.forward() {
                        if c > max {
                            max = c;
                            acc += 1;
                        }
                    }
                }
            });
            acc
        })
        .sum();
    Ok(Rational::new(
        BigInt::from(total),
        BigInt::from(count_parking_functions(n)),
    ))
}

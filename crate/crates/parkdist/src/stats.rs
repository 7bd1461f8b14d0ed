//! Statistics of the induced permutation: ascending-run lengths, their
//! product `L`, left-to-right maxima, and the spaces of the last cars.
//!
//! The run length at space `i` is the largest `l ≤ i` such that the car in
//! space `i` beats every car in the `l - 1` spaces before it; equivalently,
//! `i` minus the nearest space to the left holding a larger car. The product
//! of all run lengths equals the number of preference lists inducing the
//! permutation, which is why it drives the exact pmf.

use crate::error::{Error, Result};
use crate::park::Permutation;
use num_bigint::BigUint;
use num_traits::One;

/// Run length at `space` (1-based), by direct backward scan. O(run length).
pub fn run_length(perm: &Permutation, space: usize) -> Result<usize> {
    let n = perm.len();
    if space < 1 || space > n {
        return Err(Error::IndexOutOfRange { index: space, n });
    }
    Ok(run_length_scan(perm.forward(), space))
}

fn run_length_scan(forward: &[u32], space: usize) -> usize {
    let v = forward[space - 1];
    let mut l = 1;
    while l < space && forward[space - l - 1] < v {
        l += 1;
    }
    l
}

/// All run lengths in one left-to-right pass over a one-line notation slice
/// (monotonic stack of undominated spaces). O(n).
pub fn run_lengths_of(forward: &[u32]) -> Vec<u32> {
    let n = forward.len();
    let mut stack: Vec<u32> = Vec::with_capacity(16);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let v = forward[i - 1];
        while let Some(&top) = stack.last() {
            if forward[top as usize - 1] < v {
                stack.pop();
            } else {
                break;
            }
        }
        let prev = stack.last().copied().unwrap_or(0) as usize;
        out.push((i - prev) as u32);
        stack.push(i as u32);
    }
    out
}

/// All run lengths of the permutation, indexed by space - 1. O(n).
pub fn run_lengths(perm: &Permutation) -> Vec<u32> {
    run_lengths_of(perm.forward())
}

/// Run length at the space where `car` parked.
pub fn run_length_tilde(perm: &Permutation, car: usize) -> Result<usize> {
    let n = perm.len();
    if car < 1 || car > n {
        return Err(Error::IndexOutOfRange { index: car, n });
    }
    Ok(run_length_scan(perm.forward(), perm.space_of_car(car)))
}

/// Exact product of all run lengths. Uses the backward scan per space, so
/// the cost is O(n²) worst case; fine for exact work at moderate n.
pub fn big_l(perm: &Permutation) -> BigUint {
    let forward = perm.forward();
    let mut acc = BigUint::one();
    for space in 1..=forward.len() {
        acc *= BigUint::from(run_length_scan(forward, space));
    }
    acc
}

/// Natural log of the run-length product, via the O(n) stack pass. The two
/// routes (scan product, stack sum) are cross-checked in tests.
pub fn log_big_l(perm: &Permutation) -> f64 {
    log_big_l_of(perm.forward())
}

/// Same as [`log_big_l`] on a raw one-line slice, for allocation-free loops.
pub fn log_big_l_of(forward: &[u32]) -> f64 {
    run_lengths_of(forward).iter().map(|&l| (l as f64).ln()).sum()
}

/// Number of spaces holding a car larger than every car before them.
pub fn lr_max_count(perm: &Permutation) -> usize {
    let mut best = 0u32;
    let mut count = 0;
    for &v in perm.forward() {
        if v > best {
            best = v;
            count += 1;
        }
    }
    count
}

/// Spaces of the last `j` cars, in car order `(n-j+1, ..., n)`.
pub fn last_j_positions(perm: &Permutation, j: usize) -> Result<Vec<usize>> {
    let n = perm.len();
    if j < 1 || j > n {
        return Err(Error::InvalidJ { j, n });
    }
    Ok((n - j + 1..=n).map(|car| perm.space_of_car(car)).collect())
}

/// True when the sequence strictly increases (vacuously for length ≤ 1).
pub fn is_increasing(seq: &[usize]) -> bool {
    seq.windows(2).all(|w| w[0] < w[1])
}

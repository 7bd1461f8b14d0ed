//! The parking process: preference lists, the induced permutation, exact
//! enumeration, counting, and uniform sampling of parking functions.
//!
//! All public data is 1-based: spaces and cars are numbered `1..=n`. A
//! preference list `p` sends car `i` to space `p[i]` first; the car then
//! rolls forward to the first free space and leaves the lot if it passes
//! space `n`. When every car parks, the outcome is the permutation recording
//! the car in each space.

use crate::config::Caps;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use std::fmt;

/// A preference list: car `i` wants space `prefs[i-1]`, every value in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Preferences {
    prefs: Vec<u32>,
}

impl Preferences {
    /// Validates that the list is nonempty and every entry lies in `1..=n`
    /// where `n` is the length.
    pub fn new(prefs: Vec<u32>) -> Result<Self> {
        if prefs.is_empty() {
            return Err(Error::EmptyPreferences);
        }
        let n = prefs.len();
        for (idx, &p) in prefs.iter().enumerate() {
            if p < 1 || p as usize > n {
                return Err(Error::PreferenceOutOfRange { car: idx + 1, value: p as usize, n });
            }
        }
        Ok(Preferences { prefs })
    }

    /// Number of cars.
    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    /// Always false: the constructor rejects empty lists.
    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }

    /// Wanted space of car `car` (1-based).
    pub fn get(&self, car: usize) -> usize {
        self.prefs[car - 1] as usize
    }

    /// Raw 1-based values, indexed by car - 1.
    pub fn as_slice(&self) -> &[u32] {
        &self.prefs
    }
}

impl fmt::Display for Preferences {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spaced(f, &self.prefs)
    }
}

fn write_spaced(f: &mut fmt::Formatter<'_>, values: &[u32]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// The permutation induced by a parking outcome, stored with its inverse.
///
/// `car_in_space(j)` is the one-line notation σ_j; `space_of_car(k)` is
/// σ⁻¹_k. Both directions are kept so lookups stay O(1) either way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl Permutation {
    /// Builds from one-line notation (`forward[j-1]` = car in space `j`),
    /// validating that the values are a permutation of `1..=n`.
    pub fn from_forward(forward: Vec<u32>) -> Result<Self> {
        let n = forward.len();
        if n == 0 {
            return Err(Error::ZeroN);
        }
        let mut inverse = vec![0u32; n];
        for (j, &car) in forward.iter().enumerate() {
            if car < 1 || car as usize > n || inverse[car as usize - 1] != 0 {
                return Err(Error::NotAPermutation { n });
            }
            inverse[car as usize - 1] = (j + 1) as u32;
        }
        Ok(Permutation { forward, inverse })
    }

    /// Parses space-delimited one-line notation, e.g. `"3 1 2 4"`.
    pub fn parse_one_line(s: &str) -> Result<Self> {
        let vals: Vec<u32> = s
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| Error::NotAPermutation { n: 0 }))
            .collect::<Result<_>>()?;
        Permutation::from_forward(vals)
    }

    /// The identity permutation on `1..=n`.
    pub fn identity(n: usize) -> Self {
        let forward: Vec<u32> = (1..=n as u32).collect();
        Permutation { inverse: forward.clone(), forward }
    }

    /// The order-reversing permutation `n, n-1, ..., 1`.
    pub fn decreasing(n: usize) -> Self {
        let forward: Vec<u32> = (1..=n as u32).rev().collect();
        Permutation { inverse: forward.clone(), forward }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Car parked in `space` (both 1-based).
    pub fn car_in_space(&self, space: usize) -> usize {
        self.forward[space - 1] as usize
    }

    /// Space where `car` parked (both 1-based).
    pub fn space_of_car(&self, car: usize) -> usize {
        self.inverse[car - 1] as usize
    }

    /// One-line notation, indexed by space - 1; values are cars.
    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    /// Inverse one-line notation, indexed by car - 1; values are spaces.
    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }

    /// Space-delimited one-line notation, e.g. `"3 1 2 4"`; used as the
    /// outcome key in distribution tables.
    pub fn one_line_key(&self) -> String {
        let mut s = String::with_capacity(self.forward.len() * 3);
        for (i, v) in self.forward.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&v.to_string());
        }
        s
    }

    /// All permutations of `1..=n` in lexicographic one-line order.
    pub fn all(n: usize) -> PermutationIter {
        PermutationIter { cur: (1..=n as u32).collect(), done: n == 0 }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spaced(f, &self.forward)
    }
}

/// Lexicographic iterator over all of S_n.
pub struct PermutationIter {
    cur: Vec<u32>,
    done: bool,
}

impl Iterator for PermutationIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let item = Permutation::from_forward(self.cur.clone()).expect("iterator state is a permutation");
        // Standard next-permutation step.
        let v = &mut self.cur;
        let n = v.len();
        let mut i = n.wrapping_sub(1);
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
        } else {
            let mut k = n - 1;
            while v[k] <= v[i - 1] {
                k -= 1;
            }
            v.swap(i - 1, k);
            v[i..].reverse();
        }
        Some(item)
    }
}

/// Outcome of running the parking process on a preference list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParkOutcome {
    /// Every car parked; the induced permutation records who sits where.
    Parked(Permutation),
    /// Some car drove past space n and left.
    Exited,
}

impl ParkOutcome {
    pub fn parked(&self) -> bool {
        matches!(self, ParkOutcome::Parked(_))
    }

    pub fn permutation(&self) -> Option<&Permutation> {
        match self {
            ParkOutcome::Parked(p) => Some(p),
            ParkOutcome::Exited => None,
        }
    }
}

/// Whether every car parks under `prefs`, by the counting criterion:
/// at least `j` of the wanted spaces must be ≤ `j` for every `j`.
pub fn is_parking_function(prefs: &Preferences) -> bool {
    let n = prefs.len();
    let mut counts = vec![0u32; n + 1];
    for &p in prefs.as_slice() {
        counts[p as usize] += 1;
    }
    let mut seen = 0u32;
    for j in 1..=n {
        seen += counts[j];
        if (seen as usize) < j {
            return false;
        }
    }
    true
}

/// Runs the parking process once, allocating fresh buffers.
pub fn simulate_parking(prefs: &Preferences) -> ParkOutcome {
    let mut sim = Simulator::new(prefs.len());
    if sim.run(prefs.as_slice()) {
        let forward = sim.forward().to_vec();
        let inverse = sim.inverse().to_vec();
        ParkOutcome::Parked(Permutation { forward, inverse })
    } else {
        ParkOutcome::Exited
    }
}

/// Reusable buffers for the parking simulation.
///
/// `run` costs O(n α(n)) via path-halved next-free-space pointers, so hot
/// loops can park millions of cars without reallocating.
pub struct Simulator {
    n: usize,
    next: Vec<u32>,
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl Simulator {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "n must be at least 1");
        Simulator {
            n,
            next: vec![0; n + 2],
            forward: vec![0; n],
            inverse: vec![0; n],
        }
    }

    /// Parks cars `1..=n` with the given 1-based preferences. Returns true
    /// iff every car parks; `forward()`/`inverse()` are only meaningful then.
    pub fn run(&mut self, prefs: &[u32]) -> bool {
        let n = self.n;
        debug_assert_eq!(prefs.len(), n);
        // next[s] = candidate first free space >= s; n+1 is the exit sentinel.
        for (s, slot) in self.next.iter_mut().enumerate() {
            *slot = s as u32;
        }
        for (car0, &p) in prefs.iter().enumerate() {
            let mut s = p as usize;
            // Find the root (a free space), halving the path as we go.
            loop {
                let parent = self.next[s] as usize;
                if parent == s {
                    break;
                }
                let grand = self.next[parent];
                self.next[s] = grand;
                s = grand as usize;
            }
            if s > n {
                return false;
            }
            self.forward[s - 1] = (car0 + 1) as u32;
            self.inverse[car0] = s as u32;
            self.next[s] = (s + 1) as u32;
        }
        true
    }

    /// One-line notation of the last successful run (car in each space).
    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    /// Inverse of the last successful run (space of each car).
    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }
}

/// Reusable state for uniform sampling over parking functions.
///
/// Cars park on a cycle of `n + 1` spaces with independent uniform starting
/// points; exactly one space stays empty, and rotating it to the top maps
/// the starts to a parking function. Each of the `(n+1)^(n-1)` parking
/// functions has exactly `n + 1` preimages among the `(n+1)^n` equally
/// likely start vectors, so the output is exactly uniform.
pub struct UniformSampler {
    n: usize,
    starts: Vec<u32>,
    next: Vec<u32>,
    prefs: Vec<u32>,
}

impl UniformSampler {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "n must be at least 1");
        UniformSampler {
            n,
            starts: vec![0; n],
            next: vec![0; n + 1],
            prefs: vec![0; n],
        }
    }

    /// Draws one uniform parking function into the internal buffer.
    ///
    /// Uses exactly `n` uniform draws on `0..=n` from `rng`. O(n α(n)).
    pub fn sample_into<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[u32] {
        let n = self.n;
        let m = (n + 1) as u32;
        for (s, slot) in self.next.iter_mut().enumerate() {
            *slot = s as u32;
        }
        for i in 0..n {
            let u = rng.random_range(0..m);
            self.starts[i] = u;
            // First free space clockwise from u; path halving as above. The
            // chain always ends at a free space because at most n of the
            // n + 1 spaces are ever taken.
            let mut s = u as usize;
            loop {
                let parent = self.next[s] as usize;
                if parent == s {
                    break;
                }
                let grand = self.next[parent];
                self.next[s] = grand;
                s = grand as usize;
            }
            self.next[s] = (s as u32 + 1) % m;
        }
        let empty = self
            .next
            .iter()
            .enumerate()
            .find(|&(s, &t)| t as usize == s)
            .map(|(s, _)| s)
            .expect("one space of the cycle stays free");
        for i in 0..n {
            // Rotate so the empty space becomes the top of the cycle.
            self.prefs[i] = ((self.starts[i] as usize + n - empty) % (n + 1)) as u32 + 1;
        }
        &self.prefs
    }
}

/// Draws one uniform parking function of length `n`.
pub fn sample_uniform_parking_function<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Preferences {
    let mut sampler = UniformSampler::new(n);
    let prefs = sampler.sample_into(rng).to_vec();
    Preferences { prefs }
}

/// Number of parking functions of length `n`: `(n+1)^(n-1)`.
pub fn count_parking_functions(n: usize) -> BigUint {
    assert!(n >= 1, "n must be at least 1");
    if n == 1 {
        return BigUint::one();
    }
    BigUint::from(n + 1).pow((n - 1) as u32)
}

/// Iterator over all `n^n` preference vectors in lexicographic order.
///
/// Refused above the enumeration cap (default 8, overridable through
/// [`Caps`] / the `PARKDIST_ORACLE_CAP` environment variable).
pub fn enumerate_preferences(n: usize, caps: &Caps) -> Result<PreferenceIter> {
    if n == 0 {
        return Err(Error::ZeroN);
    }
    caps.check_oracle("preference enumeration", n)?;
    Ok(PreferenceIter { n: n as u32, cur: vec![1; n], done: false })
}

pub struct PreferenceIter {
    n: u32,
    cur: Vec<u32>,
    done: bool,
}

impl Iterator for PreferenceIter {
    type Item = Preferences;

    fn next(&mut self) -> Option<Preferences> {
        if self.done {
            return None;
        }
        let item = Preferences { prefs: self.cur.clone() };
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            if self.cur[i - 1] < self.n {
                self.cur[i - 1] += 1;
                break;
            }
            self.cur[i - 1] = 1;
            i -= 1;
        }
        Some(item)
    }
}

/// Visits every preference vector with the given first entry, reusing one
/// buffer. Backbone of the partitioned enumeration oracles.
pub(crate) fn visit_preferences_with_first(n: usize, first: u32, f: &mut impl FnMut(&[u32])) {
    let mut buf = vec![1u32; n];
    buf[0] = first;
    loop {
        f(&buf);
        // Odometer over positions 2..=n only; position 1 stays fixed.
        let mut i = n;
        loop {
            if i == 1 {
                return;
            }
            if buf[i - 1] < n as u32 {
                buf[i - 1] += 1;
                break;
            }
            buf[i - 1] = 1;
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn prefs(v: &[u32]) -> Preferences {
        Preferences::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simulate_matches_worked_example() {
        let out = simulate_parking(&prefs(&[2, 2, 1, 3]));
        let perm = out.permutation().unwrap();
        assert_eq!(perm.one_line_key(), "3 1 2 4");
        assert_eq!(perm.space_of_car(4), 4);
        assert_eq!(perm.car_in_space(1), 3);
    }

    #[test]
    fn simulate_detects_exit() {
        let out = simulate_parking(&prefs(&[2, 2]));
        assert!(!out.parked());
        assert!(out.permutation().is_none());
    }

    #[test]
    fn preference_validation() {
        assert_eq!(Preferences::new(vec![]), Err(Error::EmptyPreferences));
        assert_eq!(
            Preferences::new(vec![1, 4, 2]),
            Err(Error::PreferenceOutOfRange { car: 2, value: 4, n: 3 })
        );
        assert_eq!(
            Preferences::new(vec![0, 1]),
            Err(Error::PreferenceOutOfRange { car: 1, value: 0, n: 2 })
        );
    }

    #[test]
    fn criterion_matches_simulation_up_to_n6() {
        let caps = Caps::default();
        for n in 1..=6 {
            for p in enumerate_preferences(n, &caps).unwrap() {
                assert_eq!(is_parking_function(&p), simulate_parking(&p).parked(), "prefs {p}");
            }
        }
    }

    #[test]
    fn parking_function_counts_match_enumeration() {
        let caps = Caps::default();
        for n in 1..=7 {
            let found = enumerate_preferences(n, &caps)
                .unwrap()
                .filter(is_parking_function)
                .count();
            assert_eq!(BigUint::from(found), count_parking_functions(n));
        }
    }

    #[test]
    fn count_small_values() {
        let expect = [1u64, 3, 16, 125, 1296, 16807, 262144];
        for (i, &c) in expect.iter().enumerate() {
            assert_eq!(count_parking_functions(i + 1), BigUint::from(c));
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let caps = Caps::default();
        let all: Vec<Preferences> = enumerate_preferences(3, &caps).unwrap().collect();
        assert_eq!(all.len(), 27);
        assert_eq!(all[0].as_slice(), &[1, 1, 1]);
        assert_eq!(all[1].as_slice(), &[1, 1, 2]);
        assert_eq!(all[26].as_slice(), &[3, 3, 3]);
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        assert_eq!(all, sorted);
    }

    #[test]
    fn enumeration_respects_cap() {
        let caps = Caps::default();
        assert!(matches!(
            enumerate_preferences(9, &caps),
            Err(Error::CapExceeded { n: 9, cap: 8, .. })
        ));
        let wide = Caps { oracle_n: 9, ..Caps::default() };
        assert!(enumerate_preferences(9, &wide).is_ok());
    }

    #[test]
    fn partitioned_enumeration_covers_everything() {
        let n = 4;
        let caps = Caps::default();
        let mut seen = Vec::new();
        for first in 1..=n as u32 {
            visit_preferences_with_first(n, first, &mut |p| seen.push(p.to_vec()));
        }
        seen.sort();
        let all: Vec<Vec<u32>> = enumerate_preferences(n, &caps)
            .unwrap()
            .map(|p| p.as_slice().to_vec())
            .collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn permutation_inverse_consistency() {
        let p = Permutation::from_forward(vec![3, 1, 2, 4]).unwrap();
        for space in 1..=4 {
            assert_eq!(p.space_of_car(p.car_in_space(space)), space);
        }
        assert_eq!(p.inverse(), &[2, 3, 1, 4]);
        assert!(Permutation::from_forward(vec![1, 1, 3]).is_err());
        assert!(Permutation::from_forward(vec![1, 2, 4]).is_err());
        assert_eq!(Permutation::parse_one_line("3 1 2 4").unwrap(), p);
    }

    #[test]
    fn permutation_iterator_is_exhaustive() {
        let all: Vec<Permutation> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], Permutation::identity(4));
        assert_eq!(all[23], Permutation::decreasing(4));
    }

    #[test]
    fn sampler_outputs_are_parking_functions() {
        let mut rng = stream_rng(42, 0);
        for n in [1usize, 2, 3, 7, 40] {
            let mut sampler = UniformSampler::new(n);
            for _ in 0..200 {
                let raw = sampler.sample_into(&mut rng).to_vec();
                let p = Preferences::new(raw).unwrap();
                assert!(is_parking_function(&p), "sampled {p} is not a parking function");
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_per_stream() {
        let mut a = UniformSampler::new(12);
        let mut b = UniformSampler::new(12);
        for stream in 0..5u64 {
            let x = a.sample_into(&mut stream_rng(9, stream)).to_vec();
            let y = b.sample_into(&mut stream_rng(9, stream)).to_vec();
            assert_eq!(x, y);
        }
    }
}

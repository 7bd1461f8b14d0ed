//! Distributions induced on permutations by uniform random parking functions.
//!
//! A preference list assigns each of `n` cars a wanted space in `1..=n`; cars
//! arrive in order and each drives to its wanted space, then forward to the
//! first free space, leaving if none remains. Lists under which every car
//! parks are parking functions, and each one induces the permutation that
//! records which car ended up in which space. Drawing the preference list
//! uniformly at random from all `(n+1)^(n-1)` parking functions puts a
//! non-uniform distribution on the permutations; this crate computes that
//! distribution and its marginals exactly in rational arithmetic, checks the
//! closed forms against brute-force enumeration, and estimates the regimes
//! beyond exact reach with seeded, reproducible Monte Carlo.
//!
//! Modules:
//! - [`park`]: the parking process itself — validation, simulation, exact
//!   enumeration, counting, and uniform sampling of parking functions.
//! - [`stats`]: statistics of the induced permutation — ascending-run
//!   lengths, their product `L`, left-to-right maxima, last-car spaces.
//! - [`exact`]: exact rational distributions — the permutation pmf
//!   `L(σ)/(n+1)^(n-1)`, last-`j` space laws, left-to-right-maxima laws and
//!   expectations, Borel probabilities, Abel-type binomial sums.
//! - [`asymptotic`]: floating-point evaluators for large `n` and seeded
//!   Monte Carlo experiments with machine-readable pass/fail reports.

pub mod asymptotic;
mod config;
mod error;
pub mod exact;
pub mod park;
mod rng;
pub mod stats;

pub use config::{Caps, DEFAULT_LRMAX_CLOSED_CAP, DEFAULT_LRMAX_DOUBLE_CAP, DEFAULT_ORACLE_CAP, ORACLE_CAP_ENV};
pub use error::{Error, Result};
pub use exact::{DistTable, Rational};
pub use park::{ParkOutcome, Permutation, Preferences};
pub use rng::stream_rng;

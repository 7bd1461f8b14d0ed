use thiserror::Error;

/// Errors reported by validation, domain checks, and resource caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("preference list must not be empty")]
    EmptyPreferences,

    #[error("preference {value} for car {car} is outside 1..={n}")]
    PreferenceOutOfRange { car: usize, value: usize, n: usize },

    #[error("forward list is not a permutation of 1..={n}")]
    NotAPermutation { n: usize },

    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("n must be at least 1")]
    ZeroN,

    #[error("j = {j} is outside 1..={n}")]
    InvalidJ { j: usize, n: usize },

    #[error("space {position} appears twice in the position list")]
    DuplicatePosition { position: usize },

    #[error("{what}: n = {n} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("zero raised to the negative power {exp}")]
    ZeroToNegativePower { exp: i64 },

    #[error("term k = {k} raises zero to the negative power {exp}")]
    AbelDomain { k: usize, exp: i64 },

    #[error("trailer count needs 0 <= m < n, got m = {m}, n = {n}")]
    InvalidTrailer { m: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

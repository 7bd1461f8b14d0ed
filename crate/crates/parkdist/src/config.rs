use crate::error::{Error, Result};

/// Largest `n` for which full enumeration of the `n^n` preference vectors is
/// allowed (16.8M candidates at the default).
pub const DEFAULT_ORACLE_CAP: usize = 8;
/// Largest `n` for the exact double-sum expectation of left-to-right maxima.
pub const DEFAULT_LRMAX_DOUBLE_CAP: usize = 300;
/// Largest `n` for the exact closed-form expectation of left-to-right maxima.
pub const DEFAULT_LRMAX_CLOSED_CAP: usize = 2000;
/// Environment variable overriding the enumeration cap.
pub const ORACLE_CAP_ENV: &str = "PARKDIST_ORACLE_CAP";

/// Resource caps for enumeration-backed and large exact computations.
///
/// Exact work beyond these sizes is refused with [`Error::CapExceeded`]
/// instead of silently running for hours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Cap on full preference-vector enumeration (`n^n` candidates).
    pub oracle_n: usize,
    /// Cap on the exact double-sum left-to-right-maxima expectation.
    pub lrmax_double_n: usize,
    /// Cap on the exact closed-form left-to-right-maxima expectation.
    pub lrmax_closed_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle_n: DEFAULT_ORACLE_CAP,
            lrmax_double_n: DEFAULT_LRMAX_DOUBLE_CAP,
            lrmax_closed_n: DEFAULT_LRMAX_CLOSED_CAP,
        }
    }
}

impl Caps {
    /// Default caps, with the enumeration cap overridden by the
    /// `PARKDIST_ORACLE_CAP` environment variable when set to a positive
    /// integer.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(raw) = std::env::var(ORACLE_CAP_ENV) {
            if let Ok(v) = raw.trim().parse::<usize>() {
                if v >= 1 {
                    caps.oracle_n = v;
                }
            }
        }
        caps
    }

    pub(crate) fn check_oracle(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.oracle_n {
            return Err(Error::CapExceeded { what, n, cap: self.oracle_n });
        }
        Ok(())
    }

    pub(crate) fn check(&self, what: &'static str, n: usize, cap: usize) -> Result<()> {
        if n > cap {
            return Err(Error::CapExceeded { what, n, cap });
        }
        Ok(())
    }
}

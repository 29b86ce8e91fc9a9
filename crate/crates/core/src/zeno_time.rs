//! Observer-frame clock for a machine whose k-th step takes half as long as step k−1.
//!
//! All durations are exact rationals. `wall_time(n)` is `μ0·(2 − 2^(1−n))`
//! and the supremum over all finite `n` is `2·μ0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TimeError {
    #[error("initial step duration must be positive, got {0}")]
    NonPositiveDuration(Seconds),
    #[error("step indices start at 1")]
    ZeroStep,
    #[error("malformed duration `{0}` (expected `p` or `p/q`)")]
    Malformed(String),
}

/// An exact duration in seconds. Renders as `p/q`, or `p` when integral.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seconds(pub BigRational);

impl Seconds {
    pub fn zero() -> Self {
        Seconds(BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Seconds(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Seconds(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Seconds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Seconds {
    type Err = TimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse::<BigRational>()
            .map(Seconds)
            .map_err(|_| TimeError::Malformed(s.to_string()))
    }
}

impl Serialize for Seconds {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `2^-e` as an exact rational.
pub(crate) fn inverse_power_of_two(e: u64) -> BigRational {
    let denom = BigInt::one() << usize::try_from(e).expect("exponent fits in usize");
    BigRational::new(BigInt::one(), denom)
}

/// Step schedule with initial duration `μ0` and a fixed halving ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZenoSchedule {
    initial_duration: Seconds,
}

impl ZenoSchedule {
    pub fn new(initial_duration: Seconds) -> Result<Self, TimeError> {
        if !initial_duration.0.is_positive() {
            return Err(TimeError::NonPositiveDuration(initial_duration));
        }
        Ok(ZenoSchedule { initial_duration })
    }

    pub fn initial_duration(&self) -> &Seconds {
        &self.initial_duration
    }

    /// Duration of step `k` (1-based): `μ0 · 2^(1−k)`.
    pub fn step_duration(&self, k: u64) -> Result<Seconds, TimeError> {
        if k == 0 {
            return Err(TimeError::ZeroStep);
        }
        Ok(Seconds(&self.initial_duration.0 * inverse_power_of_two(k - 1)))
    }

    /// Observer time elapsed once `n` steps have completed.
    pub fn wall_time(&self, n: u64) -> Seconds {
        if n == 0 {
            return Seconds::zero();
        }
        let two = BigRational::from_integer(BigInt::from(2));
        Seconds(&self.initial_duration.0 * (two - inverse_power_of_two(n - 1)))
    }

    /// Observer time at which all finitely-indexed steps have completed: `2·μ0`.
    pub fn wall_time_limit(&self) -> Seconds {
        Seconds(&self.initial_duration.0 * BigRational::from_integer(BigInt::from(2)))
    }
}

impl Default for ZenoSchedule {
    /// One second for the first step.
    fn default() -> Self {
        ZenoSchedule {
            initial_duration: Seconds::from_integer(1),
        }
    }
}

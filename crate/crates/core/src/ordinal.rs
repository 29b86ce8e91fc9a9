//! Ordinal step counts of the form `ω·a + n` and the `O(·)` bounds built on them.
//!
//! Only the fragment below `ω²` is modelled. Every value has exactly one
//! representation, so derived equality is ordinal equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OrdinalTime {
    omega_coeff: u64,
    finite_part: u64,
}

impl OrdinalTime {
    pub const ZERO: OrdinalTime = OrdinalTime::new(0, 0);
    pub const OMEGA: OrdinalTime = OrdinalTime::new(1, 0);

    /// `ω·omega_coeff + finite_part`.
    pub const fn new(omega_coeff: u64, finite_part: u64) -> Self {
        OrdinalTime {
            omega_coeff,
            finite_part,
        }
    }

    pub const fn finite(n: u64) -> Self {
        OrdinalTime::new(0, n)
    }

    /// `ω·a`.
    pub const fn omega_times(a: u64) -> Self {
        OrdinalTime::new(a, 0)
    }

    pub fn omega_coeff(self) -> u64 {
        self.omega_coeff
    }

    pub fn finite_part(self) -> u64 {
        self.finite_part
    }

    pub fn is_finite(self) -> bool {
        self.omega_coeff == 0
    }

    /// `self + 1`.
    pub fn succ(self) -> Self {
        OrdinalTime::new(self.omega_coeff, self.finite_part + 1)
    }
}

/// Ordinal addition. A right operand with a nonzero `ω` part absorbs the
/// finite tail of the left operand: `(ω·a+j) + (ω·b+k) = ω·(a+b)+k` for `b ≥ 1`.
pub fn ord_add(x: OrdinalTime, y: OrdinalTime) -> OrdinalTime {
    if y.omega_coeff >= 1 {
        OrdinalTime::new(x.omega_coeff + y.omega_coeff, y.finite_part)
    } else {
        OrdinalTime::new(x.omega_coeff, x.finite_part + y.finite_part)
    }
}

pub fn ord_compare(x: OrdinalTime, y: OrdinalTime) -> Ordering {
    (x.omega_coeff, x.finite_part).cmp(&(y.omega_coeff, y.finite_part))
}

impl Add for OrdinalTime {
    type Output = OrdinalTime;

    fn add(self, rhs: OrdinalTime) -> OrdinalTime {
        ord_add(self, rhs)
    }
}

impl Ord for OrdinalTime {
    fn cmp(&self, other: &Self) -> Ordering {
        ord_compare(*self, *other)
    }
}

impl PartialOrd for OrdinalTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite ordinals render as plain numbers, everything else as `w*a+n`.
impl fmt::Display for OrdinalTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.omega_coeff == 0 {
            write!(f, "{}", self.finite_part)
        } else {
            write!(f, "w*{}+{}", self.omega_coeff, self.finite_part)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed ordinal `{0}` (expected `n` or `w*a+n`)")]
pub struct ParseOrdinalError(String);

impl FromStr for OrdinalTime {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseOrdinalError(s.to_string());
        match s.strip_prefix("w*") {
            None => s.parse().map(OrdinalTime::finite).map_err(|_| err()),
            Some(rest) => {
                let (a, n) = rest.split_once('+').ok_or_else(err)?;
                let a: u64 = a.parse().map_err(|_| err())?;
                let n: u64 = n.parse().map_err(|_| err())?;
                Ok(OrdinalTime::new(a, n))
            }
        }
    }
}

impl Serialize for OrdinalTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A running-time class: at least `necessary` steps, and, when `slack` is set,
/// possibly some finite number of further steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrdinalBound {
    pub necessary: OrdinalTime,
    pub slack: bool,
}

impl OrdinalBound {
    /// `O(t)`: `t` plus possibly finitely many more steps.
    pub const fn big_o(necessary: OrdinalTime) -> Self {
        OrdinalBound {
            necessary,
            slack: true,
        }
    }

    pub const fn exact(necessary: OrdinalTime) -> Self {
        OrdinalBound {
            necessary,
            slack: false,
        }
    }

    /// Some finite extra time and nothing else.
    pub const fn finite_slack() -> Self {
        OrdinalBound::big_o(OrdinalTime::ZERO)
    }

    /// Whether a concrete running time falls in this class.
    pub fn admits(&self, t: OrdinalTime) -> bool {
        if self.slack {
            t.omega_coeff == self.necessary.omega_coeff && t.finite_part >= self.necessary.finite_part
        } else {
            t == self.necessary
        }
    }
}

pub fn bound_add(p: OrdinalBound, q: OrdinalBound) -> OrdinalBound {
    OrdinalBound {
        necessary: ord_add(p.necessary, q.necessary),
        slack: p.slack || q.slack,
    }
}

impl Add for OrdinalBound {
    type Output = OrdinalBound;

    fn add(self, rhs: OrdinalBound) -> OrdinalBound {
        bound_add(self, rhs)
    }
}

impl fmt::Display for OrdinalBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slack {
            write!(f, "O({})", self.necessary)
        } else {
            write!(f, "{}", self.necessary)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const W: OrdinalTime = OrdinalTime::OMEGA;

    #[test]
    fn omega_plus_omega_absorbs_the_middle_tail() {
        for j in 0..=5 {
            for k in 0..=5 {
                let lhs = ord_add(ord_add(W, OrdinalTime::finite(j)), ord_add(W, OrdinalTime::finite(k)));
                assert_eq!(lhs, OrdinalTime::new(2, k));
            }
        }
    }

    #[test]
    fn finite_is_absorbed_from_the_left() {
        assert_eq!(OrdinalTime::finite(7) + W, W);
        assert_eq!(W + OrdinalTime::ZERO, W);
        assert_eq!(OrdinalTime::finite(1) + W, W);
        assert_ne!(W + OrdinalTime::finite(1), W);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ord_compare(W + OrdinalTime::finite(3), OrdinalTime::omega_times(2)), Ordering::Less);
        assert_eq!(ord_compare(W, W), Ordering::Equal);
        assert_eq!(ord_compare(OrdinalTime::finite(5), W), Ordering::Less);
    }

    #[test]
    fn bound_examples() {
        let o_omega = OrdinalBound::big_o(W);
        assert_eq!(o_omega + o_omega, OrdinalBound::big_o(OrdinalTime::omega_times(2)));
        assert_eq!(o_omega + OrdinalBound::finite_slack(), o_omega);
        assert!(o_omega.admits(W + OrdinalTime::finite(12)));
        assert!(!o_omega.admits(OrdinalTime::omega_times(2)));
        assert_eq!(o_omega.to_string(), "O(w*1+0)");
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(OrdinalTime::new(2, 3).to_string(), "w*2+3");
        assert_eq!(OrdinalTime::finite(2).to_string(), "2");
        assert_eq!("w*1+0".parse::<OrdinalTime>().unwrap(), W);
        assert_eq!("17".parse::<OrdinalTime>().unwrap(), OrdinalTime::finite(17));
        assert!("w+1".parse::<OrdinalTime>().is_err());
        assert!("w*x+1".parse::<OrdinalTime>().is_err());
    }

    fn ordinal() -> impl Strategy<Value = OrdinalTime> {
        (0u64..4, 0u64..1000).prop_map(|(a, n)| OrdinalTime::new(a, n))
    }

    proptest! {
        #[test]
        fn addition_is_associative(x in ordinal(), y in ordinal(), z in ordinal()) {
            prop_assert_eq!((x + y) + z, x + (y + z));
        }

        #[test]
        fn addition_is_monotone_on_the_right(x in ordinal(), y in ordinal(), z in ordinal()) {
            if y <= z {
                prop_assert!(x + y <= x + z);
            }
            if y < z {
                prop_assert!(x + y < x + z);
            }
        }

        #[test]
        fn display_round_trips(x in ordinal()) {
            prop_assert_eq!(x.to_string().parse::<OrdinalTime>().unwrap(), x);
        }
    }
}

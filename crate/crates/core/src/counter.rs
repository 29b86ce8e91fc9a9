//! Tape-backed base-2 register that repeatedly halves 1.
//!
//! Digits are written most-significant first: the leftmost digit is the
//! `2^0` place, the next `2^-1`, and so on, so `0.5` is `01` and `0.25` is
//! `001`. Halving shifts the digits one place to the right. Every new value
//! is appended to a history tape after a blank separator instead of
//! overwriting the previous one.
//!
//! The ω-th value cannot be reached by stepping. [`HalvingCounter::take_limit`]
//! installs it explicitly: a single `0`, the infinite run of zeros truncated to
//! one digit. Halving past the limit leaves the digits unchanged, which is why
//! the ω-th and (ω+1)-th values compare equal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::ordinal::OrdinalTime;
use crate::zeno_time::inverse_power_of_two;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Digit {
    Zero,
    One,
}

impl Digit {
    pub fn as_char(self) -> char {
        match self {
            Digit::Zero => '0',
            Digit::One => '1',
        }
    }
}

/// Run-length encoded digit string. Runs are non-empty and adjacent runs differ,
/// so structural equality is digit-string equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    runs: Vec<(Digit, u64)>,
}

impl DigitString {
    pub fn one() -> Self {
        DigitString {
            runs: vec![(Digit::One, 1)],
        }
    }

    pub fn zero() -> Self {
        DigitString {
            runs: vec![(Digit::Zero, 1)],
        }
    }

    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn count(&self, d: Digit) -> u64 {
        self.runs.iter().filter(|&&(x, _)| x == d).map(|&(_, n)| n).sum()
    }

    pub fn last(&self) -> Option<Digit> {
        self.runs.last().map(|&(d, _)| d)
    }

    /// Digits from the leftmost place.
    pub fn digits(&self) -> impl Iterator<Item = Digit> + '_ {
        self.runs
            .iter()
            .flat_map(|&(d, n)| std::iter::repeat_n(d, n as usize))
    }

    pub fn runs(&self) -> &[(Digit, u64)] {
        &self.runs
    }

    /// One place to the right: a new leading zero.
    pub fn shifted_right(&self) -> Self {
        let mut runs = self.runs.clone();
        match runs.first_mut() {
            Some((Digit::Zero, n)) => *n += 1,
            _ => runs.insert(0, (Digit::Zero, 1)),
        }
        DigitString { runs }
    }

    /// The number these digits denote.
    pub fn value(&self) -> BigRational {
        let mut total = BigRational::zero();
        let mut place = 0u64;
        for &(d, n) in &self.runs {
            if d == Digit::One {
                // 2^-place + ... + 2^-(place+n-1) = (2^n - 1) / 2^(place+n-1)
                let numer = (BigInt::from(1) << n as usize) - 1;
                total += BigRational::from_integer(numer) * inverse_power_of_two(place + n - 1);
            }
            place += n;
        }
        total
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{}", d.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
pub enum CounterError {
    #[error("the counter is already at its limit stage")]
    LimitReached,
    #[error("the counter has not reached its limit stage")]
    NotAtLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Unequal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalvingCounter {
    // segment k holds the value after k finite halvings
    history: Vec<DigitString>,
    // segments written at ω, ω+1, ...
    transfinite: Vec<DigitString>,
    divisions: OrdinalTime,
}

impl HalvingCounter {
    pub fn new() -> Self {
        HalvingCounter {
            history: vec![DigitString::one()],
            transfinite: Vec::new(),
            divisions: OrdinalTime::ZERO,
        }
    }

    pub fn at_limit(&self) -> bool {
        self.divisions.omega_coeff() >= 1
    }

    pub fn divisions(&self) -> OrdinalTime {
        self.divisions
    }

    pub fn current(&self) -> &DigitString {
        self.transfinite
            .last()
            .or_else(|| self.history.last())
            .expect("history is never empty")
    }

    /// Divide by two: append the shifted value after a separator.
    pub fn halve(mut self) -> Result<Self, CounterError> {
        if self.at_limit() {
            return Err(CounterError::LimitReached);
        }
        let next = self.current().shifted_right();
        self.history.push(next);
        self.divisions = self.divisions.succ();
        Ok(self)
    }

    /// Jump to the ω-th value.
    pub fn take_limit(mut self) -> Result<Self, CounterError> {
        if self.at_limit() {
            return Err(CounterError::LimitReached);
        }
        self.transfinite.push(DigitString::zero());
        self.divisions = OrdinalTime::OMEGA;
        Ok(self)
    }

    /// ω+1, ω+2, ...: the division count advances, the digits do not change.
    pub fn halve_past_limit(mut self) -> Result<Self, CounterError> {
        if !self.at_limit() {
            return Err(CounterError::NotAtLimit);
        }
        let same = self.current().clone();
        self.transfinite.push(same);
        self.divisions = self.divisions.succ();
        Ok(self)
    }

    pub fn last_digit(&self) -> Digit {
        self.current().last().expect("segments are never empty")
    }

    pub fn value(&self) -> BigRational {
        if self.at_limit() {
            BigRational::zero()
        } else {
            self.current().value()
        }
    }

    /// Blank separators between finite segments on the history tape; equals the number of finite halvings.
    pub fn history_separators(&self) -> usize {
        self.history.len() - 1
    }

    pub fn finite_segments(&self) -> &[DigitString] {
        &self.history
    }

    pub fn transfinite_segments(&self) -> &[DigitString] {
        &self.transfinite
    }

    /// The finite part of the history tape, segments separated by `blank`.
    pub fn history_tape(&self, blank: char) -> String {
        let mut out = String::new();
        for (i, seg) in self.history.iter().enumerate() {
            if i > 0 {
                out.push(blank);
            }
            out.push_str(&seg.to_string());
        }
        out
    }
}

impl Default for HalvingCounter {
    fn default() -> Self {
        HalvingCounter::new()
    }
}

/// Digit-by-digit comparison of the current values, from the leftmost digit.
pub fn compare_counters(a: &HalvingCounter, b: &HalvingCounter) -> Comparison {
    if a.current() == b.current() {
        Comparison::Equal
    } else {
        Comparison::Unequal
    }
}

/// Renders as `<digits>@<ordinal>`, e.g. `001@2` or `0@w*1+0`.
impl fmt::Display for HalvingCounter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.current(), self.divisions)
    }
}

impl serde::Serialize for HalvingCounter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn halved(n: u64) -> HalvingCounter {
        (0..n).fold(HalvingCounter::new(), |c, _| c.halve().unwrap())
    }

    #[test]
    fn init() {
        let c = HalvingCounter::new();
        assert_eq!(c.current().to_string(), "1");
        assert_eq!(c.value(), BigRational::from_integer(1.into()));
        assert_eq!(c.last_digit(), Digit::One);
        assert!(!c.at_limit());
    }

    #[test]
    fn halving_examples() {
        assert_eq!(halved(1).current().to_string(), "01");
        assert_eq!(halved(2).current().to_string(), "001");
        let c = halved(5);
        assert_eq!(c.current().to_string(), "000001");
        assert_eq!(c.value(), BigRational::new(1.into(), 32.into()));
        assert_eq!(halved(10).value(), BigRational::new(1.into(), 1024.into()));
        assert_eq!(halved(3).last_digit(), Digit::One);
        assert_eq!(halved(1).to_string(), "01@1");
        assert_eq!(halved(2).to_string(), "001@2");
    }

    #[test]
    fn history_keeps_every_segment() {
        let c = halved(3);
        assert_eq!(c.history_tape('_'), "1_01_001_0001");
        assert_eq!(c.history_separators(), 3);
    }

    #[test]
    fn limit_semantics() {
        let c = halved(7).take_limit().unwrap();
        assert_eq!(c.current().to_string(), "0");
        assert!(c.value().is_zero());
        assert_eq!(c.last_digit(), Digit::Zero);
        assert_eq!(c.divisions(), OrdinalTime::OMEGA);
        assert_eq!(c.to_string(), "0@w*1+0");
        assert_eq!(c.clone().halve(), Err(CounterError::LimitReached));
        assert_eq!(c.clone().take_limit(), Err(CounterError::LimitReached));
        // finite history is untouched by the limit
        assert_eq!(c.history_separators(), 7);
    }

    #[test]
    fn past_the_limit() {
        let w = HalvingCounter::new().take_limit().unwrap();
        let w1 = w.clone().halve_past_limit().unwrap();
        assert_eq!(w1.divisions(), OrdinalTime::new(1, 1));
        assert_eq!(w1.current().to_string(), "0");
        assert_eq!(compare_counters(&w, &w1), Comparison::Equal);
        let wk = (0..9).fold(w1, |c, _| c.halve_past_limit().unwrap());
        assert_eq!(wk.to_string(), "0@w*1+10");
        assert_eq!(
            HalvingCounter::new().halve_past_limit(),
            Err(CounterError::NotAtLimit)
        );
    }

    #[test]
    fn finite_neighbours_differ() {
        let mut c = HalvingCounter::new();
        for _ in 0..200 {
            let next = c.clone().halve().unwrap();
            assert_eq!(compare_counters(&c, &next), Comparison::Unequal);
            assert_eq!(compare_counters(&c, &c), Comparison::Equal);
            c = next;
        }
        assert_eq!(
            compare_counters(&halved(1), &halved(2)),
            Comparison::Unequal
        );
    }

    #[test]
    fn doubling_never_recovers_a_finite_value() {
        let limit = HalvingCounter::new().take_limit().unwrap().value();
        for k in 0..64 {
            let doubled = &limit * BigRational::from_integer(BigInt::from(1) << k);
            for n in 0..64 {
                assert_ne!(doubled, halved(n).value());
            }
        }
    }

    #[test]
    fn digit_string_value_handles_runs_of_ones() {
        let s = DigitString {
            runs: vec![(Digit::One, 2), (Digit::Zero, 1), (Digit::One, 1)],
        };
        // 1 + 1/2 + 1/8
        assert_eq!(s.value(), BigRational::new(13.into(), 8.into()));
        assert_eq!(s.to_string(), "1101");
        assert_eq!(s.len(), 4);
    }
}

//! Exact time arithmetic on an integer nanosecond grid.
//!
//! Every duration in the crate (gaps, run durations, base steps, horizons)
//! is a non-negative whole number of nanoseconds. All the grids that show
//! up in practice (1 s counter steps, 0.04 s event quanta, 1e-3 s
//! integrator steps) are exact in this representation, so alignment checks
//! and set comparisons are integer arithmetic with no floating tolerance,
//! and decimal text fields round-trip exactly.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

const NANOS_PER_SEC: u64 = 1_000_000_000;

/// A non-negative instant or duration in seconds, stored as nanoseconds.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Time(u64);

impl Time {
    pub const ZERO: Time = Time(0);

    pub const fn from_nanos(nanos: u64) -> Time {
        Time(nanos)
    }

    pub const fn from_secs(secs: u64) -> Time {
        Time(secs * NANOS_PER_SEC)
    }

    /// Parse a decimal seconds literal. Accepts plain decimals (`0.04`,
    /// `13`) and scientific notation (`1e-3`, `2.5e-2`). Values must be
    /// non-negative and representable on the nanosecond grid.
    pub fn parse_secs(text: &str) -> Result<Time, Error> {
        let bad = |why: &str| Error::Domain(format!("bad time literal {text:?}: {why}"));
        let text = text.trim();
        if text.is_empty() {
            return Err(bad("empty"));
        }
        if text.starts_with('-') {
            return Err(bad("negative"));
        }
        let (mantissa, exp10) = match text.split_once(['e', 'E']) {
            Some((m, e)) => {
                let exp: i32 = e.parse().map_err(|_| bad("bad exponent"))?;
                (m, exp)
            }
            None => (text, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad("no digits"));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad("non-digit character"));
        }
        // digits * 10^(9 + exp10 - frac_len) nanoseconds
        let digits = format!("{int_part}{frac_part}");
        let digits = digits.trim_start_matches('0');
        let shift = 9 + exp10 - frac_part.len() as i32;
        if digits.is_empty() {
            return Ok(Time(0));
        }
        let mut value: u128 = digits.parse().map_err(|_| bad("too many digits"))?;
        if shift < 0 {
            // only trailing zeros may be cut; anything else is sub-nanosecond
            for _ in 0..(-shift) {
                if !value.is_multiple_of(10) {
                    return Err(bad("finer than 1 ns"));
                }
                value /= 10;
            }
        } else {
            for _ in 0..shift {
                value = value.checked_mul(10).ok_or_else(|| bad("out of range"))?;
            }
        }
        u64::try_from(value).map(Time).map_err(|_| bad("out of range"))
    }

    pub fn nanos(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / NANOS_PER_SEC as f64
    }

    pub fn checked_add(self, other: Time) -> Option<Time> {
        self.0.checked_add(other.0).map(Time)
    }

    pub fn checked_sub(self, other: Time) -> Option<Time> {
        self.0.checked_sub(other.0).map(Time)
    }

    pub fn checked_mul(self, k: u64) -> Option<Time> {
        self.0.checked_mul(k).map(Time)
    }

    /// Number of `base`-sized steps in this duration, if it lies exactly on
    /// the grid.
    pub fn steps_on(self, base: Time) -> Option<u64> {
        if base.0 == 0 || !self.0.is_multiple_of(base.0) {
            None
        } else {
            Some(self.0 / base.0)
        }
    }
}

impl fmt::Display for Time {
    /// Canonical decimal seconds: integer part, then up to nine fractional
    /// digits with trailing zeros removed. Round-trips through
    /// [`Time::parse_secs`] exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let secs = self.0 / NANOS_PER_SEC;
        let frac = self.0 % NANOS_PER_SEC;
        if frac == 0 {
            write!(f, "{secs}")
        } else {
            let digits = format!("{frac:09}");
            write!(f, "{secs}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl fmt::Debug for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}s")
    }
}

impl FromStr for Time {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Time::parse_secs(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_decimals() {
        assert_eq!(Time::parse_secs("0.04").unwrap().nanos(), 40_000_000);
        assert_eq!(Time::parse_secs("13").unwrap().nanos(), 13 * NANOS_PER_SEC);
        assert_eq!(Time::parse_secs("0").unwrap(), Time::ZERO);
        assert_eq!(Time::parse_secs("0.000000001").unwrap().nanos(), 1);
        assert_eq!(Time::parse_secs(".5").unwrap().nanos(), 500_000_000);
    }

    #[test]
    fn parses_scientific() {
        assert_eq!(Time::parse_secs("1e-3").unwrap().nanos(), 1_000_000);
        assert_eq!(Time::parse_secs("2.5e-2").unwrap().nanos(), 25_000_000);
        assert_eq!(Time::parse_secs("1e-6").unwrap().nanos(), 1_000);
        assert_eq!(Time::parse_secs("1E1").unwrap().nanos(), 10 * NANOS_PER_SEC);
    }

    #[test]
    fn rejects_bad_literals() {
        for bad in ["", "-1", "0.0000000001", "1e-10", "abc", "1.2.3", "1e999"] {
            assert!(Time::parse_secs(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn display_round_trips() {
        for text in ["0", "0.04", "1", "13", "0.12", "0.000000001", "2.5"] {
            let t = Time::parse_secs(text).unwrap();
            assert_eq!(Time::parse_secs(&t.to_string()).unwrap(), t);
        }
        assert_eq!(Time::parse_secs("0.040").unwrap().to_string(), "0.04");
        assert_eq!(Time::parse_secs("1e-3").unwrap().to_string(), "0.001");
    }

    #[test]
    fn grid_division_is_exact() {
        let tau = Time::parse_secs("0.04").unwrap();
        assert_eq!(Time::parse_secs("0.12").unwrap().steps_on(tau), Some(3));
        assert_eq!(Time::parse_secs("0.1").unwrap().steps_on(tau), None);
        assert_eq!(Time::ZERO.steps_on(tau), Some(0));
    }
}

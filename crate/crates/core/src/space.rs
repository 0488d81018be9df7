//! Domain scalars: the size of the sampled space and the number of draws.

use std::fmt;

use crate::error::{Error, Result};

/// Largest space size accepted anywhere in the crate.
pub const MAX_SPACE: f64 = 1e30;

/// Number of equally likely distinct items, `t`.
///
/// Real-valued so that solvers can return non-integer roots. When the value is
/// an integer no larger than `i64::MAX` the exact integer is kept alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSize {
    value: f64,
    exact: Option<u64>,
}

impl SpaceSize {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(1.0..=MAX_SPACE).contains(&value) {
            return Err(Error::InvalidSpace(value));
        }
        let exact = if value.fract() == 0.0 && value <= i64::MAX as f64 {
            // i64::MAX as f64 rounds up to 2^63, which is out of range.
            let n = value as u64;
            (n <= i64::MAX as u64 && n as f64 == value).then_some(n)
        } else {
            None
        };
        Ok(Self { value, exact })
    }

    pub fn from_int(n: u128) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace(0.0));
        }
        let value = n as f64;
        if value > MAX_SPACE {
            return Err(Error::SpaceOverflow(n.to_string()));
        }
        let exact = u64::try_from(n)
            .ok()
            .filter(|&k| k <= i64::MAX as u64 && value as u128 == n);
        Ok(Self { value, exact })
    }

    /// `base^exp` evaluated in 128-bit integer arithmetic.
    pub fn pow(base: u64, exp: u32) -> Result<Self> {
        let n = (base as u128)
            .checked_pow(exp)
            .ok_or_else(|| Error::SpaceOverflow(format!("{base}^{exp}")))?;
        Self::from_int(n)
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn exact(self) -> Option<u64> {
        self.exact
    }
}

impl fmt::Display for SpaceSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{:e}", self.value),
        }
    }
}

/// Number of independent draws, `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Population(pub u64);

impl Population {
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// Accepts integral, non-negative reals such as `8.2e9`.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() || v < 0.0 || v.fract() != 0.0 || v >= u64::MAX as f64 {
            return Err(Error::InvalidPopulation(v.to_string()));
        }
        Ok(Self(v as u64))
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        u64::try_from(v)
            .map(Self)
            .map_err(|_| Error::InvalidPopulation(v.to_string()))
    }
}

impl From<u64> for Population {
    fn from(n: u64) -> Self {
        Self(n)
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

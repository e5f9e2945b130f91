//! Closed intervals with rational endpoints and exact interval arithmetic.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{min_max, Rational};

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    /// Fails with `InvalidInterval` at position (0, 0) when `lo > hi`; matrix
    /// constructors report the real position.
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval { row: 0, col: 0 });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(value: Rational) -> Self {
        Self {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `lo < 0 < hi`.
    pub fn straddles_zero(&self) -> bool {
        self.lo.is_negative() && self.hi.is_positive()
    }

    /// Subset of the nonnegative reals.
    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    /// Subset of the nonpositive reals.
    pub fn is_nonpositive(&self) -> bool {
        !self.hi.is_positive()
    }

    /// Subset of the strictly negative reals.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn radius(&self) -> Rational {
        (&self.hi - &self.lo) / Rational::from_integer(2.into())
    }

    /// `max(|lo|, |hi|)`.
    pub fn magnitude(&self) -> Rational {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let (lo, hi) = min_max(products.iter()).expect("four products");
        Interval { lo, hi }
    }

    pub fn scale(&self, factor: &Rational) -> Interval {
        self.mul(&Interval::point(factor.clone()))
    }

    /// `{x / y : x in self, y in divisor}`, defined only when the divisor is
    /// sign-definite.
    pub fn div(&self, divisor: &Interval) -> Result<Interval> {
        if divisor.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let reciprocal = Interval {
            lo: divisor.hi.recip(),
            hi: divisor.lo.recip(),
        };
        Ok(self.mul(&reciprocal))
    }

    /// `[max(0, lo), hi]`; callers guarantee `hi >= 0`.
    pub(crate) fn clamp_nonnegative(&self) -> Interval {
        let lo = if self.lo.is_negative() {
            Rational::zero()
        } else {
            self.lo.clone()
        };
        Interval {
            lo,
            hi: self.hi.clone(),
        }
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

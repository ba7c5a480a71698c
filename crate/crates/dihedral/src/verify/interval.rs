//! Outward-rounded interval arithmetic on `f64` endpoints.
//!
//! Every arithmetic result is widened by one ulp per endpoint.  IEEE 754
//! round-to-nearest lands within half an ulp of the exact value, so the
//! widened interval always contains the true real result — including for
//! operations that happened to round exactly, where the extra ulp is pure
//! slack.  That slack is relative `2^-52` per operation, invisible next to
//! the quantities these intervals are used to bound.

use crate::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Largest `f64` strictly below `x` (identity on NaN and `-inf`).
fn step_down(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return x;
    }
    if x == 0.0 {
        return -f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits - 1 } else { bits + 1 })
}

/// Smallest `f64` strictly above `x` (identity on NaN and `+inf`).
fn step_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

/// Closed interval `[lo, hi]`, `lo <= hi`, finite endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Interval with the given endpoints.  Panics if `lo > hi` or either
    /// endpoint is not finite; those are programming errors, not data.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(
            lo.is_finite() && hi.is_finite() && lo <= hi,
            "invalid interval endpoints [{lo}, {hi}]"
        );
        Interval { lo, hi }
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Smallest interval containing both operands.
    pub fn hull(a: Interval, b: Interval) -> Interval {
        Interval {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
        }
    }

    pub fn inf(self) -> f64 {
        self.lo
    }

    pub fn sup(self) -> f64 {
        self.hi
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Exact: no rounding is involved in negating or mirroring endpoints.
    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            Interval {
                lo: -self.hi,
                hi: -self.lo,
            }
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    /// Endpoint-wise maximum; exact.
    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// `0` iff the interval contains zero, otherwise the smallest magnitude
    /// attained.  Used for pivot admissibility.
    pub fn mignitude(self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains(0.0) {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval {
            lo: step_down(lo),
            hi: step_up(hi),
        })
    }

    /// Enclosure of the square root over the non-negative part of the
    /// interval; errors only if the whole interval lies below zero.
    pub fn sqrt(self) -> Result<Interval> {
        if self.hi < 0.0 {
            return Err(Error::NegativeSqrt);
        }
        let lo = self.lo.max(0.0).sqrt();
        Ok(Interval {
            lo: step_down(lo).max(0.0),
            hi: step_up(self.hi.sqrt()),
        })
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: step_down(self.lo + rhs.lo),
            hi: step_up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: step_down(self.lo - rhs.hi),
            hi: step_up(self.hi - rhs.lo),
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: step_down(lo),
            hi: step_up(hi),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_step_outward() {
        let two = Interval::point(1.0) + Interval::point(1.0);
        assert!(two.inf() < 2.0 && 2.0 < two.sup());
        assert!(two.width() < 1e-15);
    }

    #[test]
    fn addition_contains_float_sum() {
        let s = Interval::point(0.1) + Interval::point(0.2);
        assert!(s.contains(0.1 + 0.2));
        assert!(s.width() > 0.0);
    }

    #[test]
    fn multiplication_covers_sign_cases() {
        let a = Interval::new(-2.0, 3.0);
        let b = Interval::new(-5.0, 7.0);
        let p = a * b;
        assert!(p.contains(-15.0) && p.contains(21.0));
        assert!(p.contains(10.0) && p.contains(-14.0));
        assert!(p.inf() <= -15.0 && p.sup() >= 21.0);

        let neg = Interval::new(-3.0, -1.0) * Interval::new(-4.0, -2.0);
        assert!(neg.contains(2.0) && neg.contains(12.0));
        assert!(neg.inf() > 0.0);
    }

    #[test]
    fn division_excludes_zero_divisors() {
        let a = Interval::new(1.0, 2.0);
        assert!(matches!(
            a.div(Interval::new(-1.0, 1.0)),
            Err(Error::DivisionByIntervalContainingZero)
        ));
        assert!(matches!(
            a.div(Interval::ZERO),
            Err(Error::DivisionByIntervalContainingZero)
        ));
        let q = a.div(Interval::new(2.0, 4.0)).unwrap();
        assert!(q.contains(0.25) && q.contains(1.0));
    }

    #[test]
    fn sqrt_clamps_and_rejects() {
        assert!(matches!(
            Interval::new(-2.0, -0.5).sqrt(),
            Err(Error::NegativeSqrt)
        ));
        let r = Interval::new(-1.0, 4.0).sqrt().unwrap();
        assert!(r.inf() >= 0.0 && r.contains(0.0) && r.contains(2.0));
        let s = Interval::new(4.0, 9.0).sqrt().unwrap();
        assert!(s.contains(2.0) && s.contains(3.0));
        assert!(s.width() < 1.0 + 1e-12);
    }

    #[test]
    fn abs_branches() {
        assert_eq!(Interval::new(1.0, 2.0).abs(), Interval::new(1.0, 2.0));
        assert_eq!(Interval::new(-2.0, -1.0).abs(), Interval::new(1.0, 2.0));
        assert_eq!(Interval::new(-3.0, 2.0).abs(), Interval::new(0.0, 3.0));
    }

    #[test]
    fn negation_is_exact() {
        let a = Interval::new(-1.5, 2.5);
        assert_eq!(-a, Interval::new(-2.5, 1.5));
        assert_eq!(-(-a), a);
    }

    #[test]
    fn mignitude_and_max() {
        assert_eq!(Interval::new(-1.0, 2.0).mignitude(), 0.0);
        assert_eq!(Interval::new(1.0, 2.0).mignitude(), 1.0);
        assert_eq!(Interval::new(-2.0, -0.5).mignitude(), 0.5);
        let m = Interval::new(0.0, 1.0).max(Interval::new(-1.0, 2.0));
        assert_eq!(m, Interval::new(0.0, 2.0));
    }

    #[test]
    fn hull_spans_both() {
        let h = Interval::hull(Interval::new(0.0, 1.0), Interval::new(3.0, 4.0));
        assert_eq!(h, Interval::new(0.0, 4.0));
    }

    #[test]
    fn subtraction_flips_operand() {
        let d = Interval::new(1.0, 2.0) - Interval::new(0.5, 3.0);
        assert!(d.contains(-2.0) && d.contains(1.5));
        assert!(d.inf() <= -2.0 && d.sup() >= 1.5);
    }
}

//! Exact cosine coefficients on the sixth-root lattice.
//!
//! Every interaction coefficient of the matching system is of the form
//! `cos(mπk/3)` for integers `m ≥ 1` and `k`, hence takes one of the four
//! exact rational values `{−1, −1/2, 1/2, 1}` (the arguments are multiples
//! of `π/3` and the zero-cosine cases never occur). Carrying these as exact
//! rationals rather than floats keeps the sign structure of the quadratic
//! map free of coefficient rounding.
//!
//! The structure of the system depends on `m` only through its residue
//! class modulo 6, summarised by [`MClass`] and the constant
//! `C_m = 2cos(mπ/3)`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Symmetry order `m` and angular truncation `N` of a mode lattice.
///
/// `N = 0` (the radially symmetric case) is rejected: the mode vector then
/// has no angular content and the matching system degenerates to the scalar
/// spot equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeConfig {
    m: u32,
    truncation: usize,
}

impl LatticeConfig {
    pub fn new(m: u32, truncation: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidConfig("symmetry order m must be >= 1".into()));
        }
        if truncation < 1 {
            return Err(Error::InvalidConfig(
                "truncation N must be >= 1 (N = 0 is the radially symmetric case)".into(),
            ));
        }
        Ok(Self { m, truncation })
    }

    /// Symmetry order `m`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Angular truncation `N`; mode vectors have `N + 1` entries.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Number of mode amplitudes, `N + 1`.
    pub fn modes(&self) -> usize {
        self.truncation + 1
    }

    /// Exact value of `cos(mπk/3)`.
    ///
    /// Periodic in `k` with period dividing 6 and even in `k`.
    pub fn cos_coeff(&self, k: i64) -> CosCoeff {
        // cos(πj/3) over j = 0..5, doubled: 2, 1, -1, -2, -1, 1.
        const DOUBLED: [i8; 6] = [2, 1, -1, -2, -1, 1];
        let j = (self.m as i64 * k).rem_euclid(6) as usize;
        CosCoeff { doubled: DOUBLED[j] }
    }

    /// The constant `C_m = 2cos(mπ/3)` as an exact integer:
    /// 2 if `6|m`; −2 if `3|m` and `m` odd; −1 if `2|m` and `3∤m`; +1 otherwise.
    pub fn c_m(&self) -> i8 {
        self.cos_coeff(1).doubled
    }

    /// Residue class of `m` modulo 6 that selects the closed-form solution
    /// family.
    pub fn m_class(&self) -> MClass {
        match (self.m % 2 == 0, self.m % 3 == 0) {
            (true, true) => MClass::Six,
            (false, true) => MClass::OddThree,
            (true, false) => MClass::EvenNotThree,
            (false, false) => MClass::Coprime,
        }
    }

    /// Same symmetry order with a different truncation.
    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(self.m, truncation)
    }
}

/// Residue class of `m` mod 6; names abbreviate the divisibility pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MClass {
    /// `6 | m` (`C_m = 2`): the fully resonant case.
    Six,
    /// `3 | m`, `m` odd (`C_m = −2`).
    OddThree,
    /// `2 | m`, `3 ∤ m` (`C_m = −1`).
    EvenNotThree,
    /// `m` coprime to 6 (`C_m = 1`).
    Coprime,
}

/// An exact interaction coefficient: one of `{−1, −1/2, 1/2, 1}`,
/// stored as its numerator over 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosCoeff {
    doubled: i8,
}

impl CosCoeff {
    /// Twice the coefficient value, an exact integer in `{−2, −1, 1, 2}`.
    pub fn doubled(&self) -> i8 {
        self.doubled
    }

    /// The coefficient as a float (exact: halves are representable).
    pub fn value(&self) -> f64 {
        f64::from(self.doubled) * 0.5
    }
}

impl std::ops::Mul<f64> for CosCoeff {
    type Output = f64;

    fn mul(self, rhs: f64) -> f64 {
        self.value() * rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: u32) -> LatticeConfig {
        LatticeConfig::new(m, 1).unwrap()
    }

    #[test]
    fn rejects_degenerate_configs() {
        assert!(LatticeConfig::new(0, 1).is_err());
        assert!(LatticeConfig::new(6, 0).is_err());
        assert!(LatticeConfig::new(1, 1).is_ok());
    }

    #[test]
    fn cos_coeff_matches_analytic_values() {
        // cos(2πk) = 1 whenever 6 | m
        assert_eq!(cfg(6).cos_coeff(5).value(), 1.0);
        // cos(2π/3) = −1/2
        assert_eq!(cfg(2).cos_coeff(1).value(), -0.5);
        // cos(π) = −1
        assert_eq!(cfg(3).cos_coeff(1).value(), -1.0);
        for m in 1..=24 {
            for k in -12..=12_i64 {
                let exact = cfg(m).cos_coeff(k).value();
                let float = (f64::from(m) * std::f64::consts::PI * k as f64 / 3.0).cos();
                assert!(
                    (exact - float).abs() < 1e-12,
                    "m={m} k={k}: {exact} vs {float}"
                );
            }
        }
    }

    #[test]
    fn cos_coeff_symmetry_and_periodicity() {
        for m in 1..=13 {
            let c = cfg(m);
            for k in -20..=20_i64 {
                assert_eq!(c.cos_coeff(k), c.cos_coeff(-k));
                assert_eq!(c.cos_coeff(k), c.cos_coeff(k + 6));
            }
        }
    }

    #[test]
    fn c_m_case_table() {
        assert_eq!(cfg(6).c_m(), 2);
        assert_eq!(cfg(12).c_m(), 2);
        assert_eq!(cfg(3).c_m(), -2);
        assert_eq!(cfg(9).c_m(), -2);
        assert_eq!(cfg(2).c_m(), -1);
        assert_eq!(cfg(4).c_m(), -1);
        assert_eq!(cfg(1).c_m(), 1);
        assert_eq!(cfg(5).c_m(), 1);
        assert_eq!(cfg(7).c_m(), 1);
    }

    #[test]
    fn c_m_is_twice_first_coefficient() {
        for m in 1..=24 {
            assert_eq!(cfg(m).c_m(), cfg(m).cos_coeff(1).doubled());
        }
    }

    #[test]
    fn doubling_identity() {
        // C_{2m} = (−1)^m C_m
        for m in 1..=24 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(cfg(2 * m).c_m(), sign * cfg(m).c_m());
        }
    }

    #[test]
    fn m_class_dispatch() {
        assert_eq!(cfg(12).m_class(), MClass::Six);
        assert_eq!(cfg(9).m_class(), MClass::OddThree);
        assert_eq!(cfg(10).m_class(), MClass::EvenNotThree);
        assert_eq!(cfg(7).m_class(), MClass::Coprime);
    }
}

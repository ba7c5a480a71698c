//! Closed-form solution families of the matching system for `N ≤ 4`.
//!
//! For small truncations the fixed-point system `a = Q(a)` reduces, after
//! eliminating all but one unknown, to a single polynomial in a parameter
//! `λ` together with back-substitution formulas. The polynomial and the
//! back-substitution coefficients depend on `m` only through its residue
//! class mod 6. This module encodes those coefficient tables, isolates the
//! real roots of the eliminating polynomial, reconstructs the solution
//! vectors, and polishes each with a few Newton steps (back-substitution
//! through the larger tables loses a few digits when a root is large).
//!
//! Candidates are filtered on two grounds: a negative radicand means the
//! root corresponds to no real solution, and a candidate supported on a
//! proper sublattice (all nonzero entries at indices sharing a common
//! factor, or no nonzero entry beyond `a_0`) is a harmonic embedding of a
//! lower-truncation solution rather than a solution unique to this `N`.
//!
//! Solution counts by truncation and class: `N = 1` gives 1 solution
//! (none when `m` is coprime to 6), `N = 2` gives 2 (none when coprime),
//! `N = 3` gives 5 (1 when coprime), and `N = 4` — covered only for
//! `6 | m` — gives 5, one per root of a quintic.

use super::{polish_solution, MatchSolution};
use crate::lattice::{LatticeConfig, MClass};
use crate::matching::isolate_real_roots;
use crate::{Error, Result};

/// Entries smaller than this are treated as structural zeros when deciding
/// whether a candidate lives on a proper sublattice. Genuine nonzero
/// entries of every tabulated family are above 1e-2.
const SUPPORT_EPS: f64 = 1e-6;

/// Root isolation accuracy; Newton polish inside the isolator then takes
/// each simple root to machine precision.
const ROOT_TOL: f64 = 1e-12;

/// All solutions unique to truncation `N`, one representative per
/// rotation-equivalence class, for `N ≤ 3` (any `m`) and `N = 4`
/// (`6 | m` only).
pub fn closed_form_solutions(cfg: &LatticeConfig) -> Result<Vec<MatchSolution>> {
    let class = cfg.m_class();
    match (cfg.truncation(), class) {
        (1, _) => Ok(truncation_one(cfg)),
        (2, _) => Ok(truncation_two(cfg)),
        (3, _) => Ok(truncation_three(cfg)),
        (4, MClass::Six) => Ok(truncation_four_six(cfg)),
        (4, _) => Err(Error::UnsupportedCase(format!(
            "closed forms at N = 4 require 6 | m (got m = {})",
            cfg.m()
        ))),
        (n, _) => Err(Error::UnsupportedCase(format!(
            "no closed-form family for N = {n}; use the multi-start enumerator"
        ))),
    }
}

/// Sign of `(−1)^m`.
fn parity(cfg: &LatticeConfig) -> f64 {
    if cfg.m() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Discard vectors supported on a proper sublattice (harmonic embeddings)
/// or with no angular content at all.
fn unique_to_truncation(a: &[f64]) -> bool {
    let support: Vec<usize> = (1..a.len()).filter(|&n| a[n].abs() > SUPPORT_EPS).collect();
    let Some(&first) = support.first() else { return false };
    let g = support.iter().fold(first, |g, &n| gcd(g, n));
    g == 1
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn keep(cfg: &LatticeConfig, candidate: Vec<f64>, out: &mut Vec<MatchSolution>) {
    if unique_to_truncation(&candidate) {
        out.push(polish_solution(cfg, candidate));
    }
}

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// Cauchy bound on the modulus of any root.
fn root_bound(c: &[f64]) -> f64 {
    let lead = c.last().unwrap().abs();
    1.0 + c[..c.len() - 1].iter().fold(0.0_f64, |m, v| m.max(v.abs())) / lead
}

fn real_roots(c: &[f64]) -> Vec<f64> {
    let b = root_bound(c);
    isolate_real_roots(c, -b, b, ROOT_TOL)
}

/// `N = 1`: the single vector `(1/C_m, √((C_m − 1)/C_m³))`.
fn truncation_one(cfg: &LatticeConfig) -> Vec<MatchSolution> {
    let c = f64::from(cfg.c_m());
    let radicand = (c - 1.0) / (c * c * c);
    let mut out = Vec::new();
    if radicand >= 0.0 {
        keep(cfg, vec![1.0 / c, radicand.sqrt()], &mut out);
    }
    out
}

/// `N = 2`: `((1 − 2λ)/C_m, √([(1 − σ) + 2σλ]λ), λ)` over the real roots λ
/// of a class-dependent quadratic, where `σ = (−1)^m`.
fn truncation_two(cfg: &LatticeConfig) -> Vec<MatchSolution> {
    let c = f64::from(cfg.c_m());
    let sigma = parity(cfg);
    let c3 = c * c * c;
    let p = [
        -(c - 1.0),
        2.0 * c + (1.0 - sigma) * c3 - 4.0,
        4.0 + 3.0 * sigma * c3,
    ];
    let mut out = Vec::new();
    for lambda in real_roots(&p) {
        let radicand = ((1.0 - sigma) + 2.0 * sigma * lambda) * lambda;
        if radicand < 0.0 {
            continue;
        }
        keep(
            cfg,
            vec![(1.0 - 2.0 * lambda) / c, radicand.sqrt(), lambda],
            &mut out,
        );
    }
    out
}

/// Eliminating polynomial and back-substitution tables for `N = 3`,
/// ascending coefficients with a common denominator per table.
struct CubicTables {
    p: &'static [f64],
    q1: (&'static [f64], f64),
    q2: (&'static [f64], f64),
}

fn n3_tables(class: MClass) -> CubicTables {
    match class {
        // 220(x−1)²x² + 90(x−1)x + 9, expanded
        MClass::Six => CubicTables {
            p: &[9.0, -90.0, 310.0, -440.0, 220.0],
            q1: (&[3.0, -10.0, 10.0], 30.0),
            q2: (&[21.0, -110.0, 110.0], 6.0),
        },
        MClass::OddThree => CubicTables {
            p: &[1.0, -2.0, -34.0, 40.0, 220.0],
            q1: (&[17.0, 38.0, -170.0, -440.0], 50.0),
            q2: (&[-23.0, -142.0, 430.0, 1760.0], 30.0),
        },
        MClass::EvenNotThree => CubicTables {
            p: &[9.0, 24.0, -113.0, -217.0, 116.0, 1.0],
            q1: (&[-204.0, -185.0, 3851.0, -559.0, -5.0], 369.0),
            q2: (&[17931.0, 25249.0, -137638.0, 53387.0, 463.0], 12546.0),
        },
        MClass::Coprime => CubicTables {
            p: &[1.0, 3.0, 1.0],
            q1: (&[2.0, 5.0], 1.0),
            q2: (&[2.0, 1.0], 1.0),
        },
    }
}

/// `N = 3`: when `3 | m` one special solution with `a_2 = 0`, plus for all
/// classes the family `(λ, √q₁(λ), (1 − 2σλ)q₂(λ), C_m q₂(λ)√q₁(λ))` over
/// the real roots of the class polynomial.
fn truncation_three(cfg: &LatticeConfig) -> Vec<MatchSolution> {
    let c = f64::from(cfg.c_m());
    let sigma = parity(cfg);
    let mut out = Vec::new();
    if cfg.m() % 3 == 0 {
        let amp = ((2.0 - sigma) / 10.0).sqrt();
        keep(
            cfg,
            vec![sigma / 2.0, amp, 0.0, -(sigma / 2.0) * amp],
            &mut out,
        );
    }
    let tables = n3_tables(cfg.m_class());
    for lambda in real_roots(tables.p) {
        let q1 = eval_poly(tables.q1.0, lambda) / tables.q1.1;
        if q1 < 0.0 {
            continue;
        }
        let q2 = eval_poly(tables.q2.0, lambda) / tables.q2.1;
        let s = q1.sqrt();
        keep(
            cfg,
            vec![lambda, s, (1.0 - sigma * 2.0 * lambda) * q2, c * q2 * s],
            &mut out,
        );
    }
    out
}

/// `N = 4`, `6 | m`: five solutions parameterised by the roots of
/// `6λ⁵ + 5λ⁴ − 20λ³ − 12λ² + 12λ + 3`, with
/// `q₀ = 6λ⁶ + 4λ⁵ − 10λ⁴ − 12λ² − 12λ + 19` under the denominators and
/// `q₁ = 3λ⁴ + 2λ³ − 10λ² − 4λ + 7` inside the ratio:
///
/// ```text
/// a = (1/2 − 1/(2√q₀), (1/2)√(q₁/q₀), (1 − λ²)/(2√q₀),
///      (λ/2)√(q₁/q₀), (λ² + λ − 1)/(2√q₀)).
/// ```
fn truncation_four_six(cfg: &LatticeConfig) -> Vec<MatchSolution> {
    const P: [f64; 6] = [3.0, 12.0, -12.0, -20.0, 5.0, 6.0];
    const Q0: [f64; 7] = [19.0, -12.0, -12.0, 0.0, -10.0, 4.0, 6.0];
    const Q1: [f64; 5] = [7.0, -4.0, -10.0, 2.0, 3.0];
    let mut out = Vec::new();
    for lambda in real_roots(&P) {
        let q0 = eval_poly(&Q0, lambda);
        let q1 = eval_poly(&Q1, lambda);
        if q0 <= 0.0 || q1 / q0 < 0.0 {
            continue;
        }
        let inv = 1.0 / (2.0 * q0.sqrt());
        let ratio = 0.5 * (q1 / q0).sqrt();
        keep(
            cfg,
            vec![
                0.5 - inv,
                ratio,
                (1.0 - lambda * lambda) * inv,
                lambda * ratio,
                (lambda * lambda + lambda - 1.0) * inv,
            ],
            &mut out,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{q_apply, residual_norm};
    use approx::assert_abs_diff_eq;

    fn cfg(m: u32, n: usize) -> LatticeConfig {
        LatticeConfig::new(m, n).unwrap()
    }

    fn counts(m: u32, n: usize) -> usize {
        closed_form_solutions(&cfg(m, n)).unwrap().len()
    }

    #[test]
    fn solution_counts_by_class() {
        for &m in &[2u32, 3, 4, 5, 6, 7, 12] {
            let coprime = m % 2 != 0 && m % 3 != 0;
            assert_eq!(counts(m, 1), if coprime { 0 } else { 1 }, "N=1 m={m}");
            assert_eq!(counts(m, 2), if coprime { 0 } else { 2 }, "N=2 m={m}");
            assert_eq!(counts(m, 3), if coprime { 1 } else { 5 }, "N=3 m={m}");
        }
        assert_eq!(counts(6, 4), 5);
        assert_eq!(counts(12, 4), 5);
    }

    #[test]
    fn unsupported_cases_error() {
        assert!(matches!(
            closed_form_solutions(&cfg(5, 4)),
            Err(Error::UnsupportedCase(_))
        ));
        assert!(matches!(
            closed_form_solutions(&cfg(6, 5)),
            Err(Error::UnsupportedCase(_))
        ));
    }

    #[test]
    fn every_solution_is_accurate_and_isolated() {
        let mut cases: Vec<LatticeConfig> = Vec::new();
        for &m in &[2u32, 3, 4, 5, 6, 7, 12] {
            for n in 1..=3 {
                cases.push(cfg(m, n));
            }
        }
        cases.push(cfg(6, 4));
        for c in cases {
            for sol in closed_form_solutions(&c).unwrap() {
                assert!(
                    sol.residual_norm < 1e-10,
                    "m={} N={} residual {:e}",
                    c.m(),
                    c.truncation(),
                    sol.residual_norm
                );
                assert!(
                    sol.nondegeneracy_det.abs() > 1e-8,
                    "m={} N={} det {:e}",
                    c.m(),
                    c.truncation(),
                    sol.nondegeneracy_det
                );
            }
        }
    }

    #[test]
    fn hexagon_n1_value() {
        let sols = closed_form_solutions(&cfg(6, 1)).unwrap();
        assert_eq!(sols.len(), 1);
        assert_abs_diff_eq!(sols[0].a[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(sols[0].a[1], 0.5 / 2.0_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn even_not_three_n1_value() {
        let sols = closed_form_solutions(&cfg(2, 1)).unwrap();
        assert_abs_diff_eq!(sols[0].a[0], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(sols[0].a[1], std::f64::consts::SQRT_2, epsilon = 1e-13);
    }

    #[test]
    fn hexagon_n2_values() {
        // λ = ±1/(2√7)
        let lambda = 0.5 / 7.0_f64.sqrt();
        let sols = closed_form_solutions(&cfg(6, 2)).unwrap();
        assert_eq!(sols.len(), 2);
        let expect = [
            vec![(1.0 + 2.0 * lambda) / 2.0, lambda * 2.0_f64.sqrt(), -lambda],
            vec![(1.0 - 2.0 * lambda) / 2.0, lambda * 2.0_f64.sqrt(), lambda],
        ];
        for (s, e) in sols.iter().zip(&expect) {
            for (x, y) in s.a.iter().zip(e) {
                assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn n3_quartic_roots_satisfy_product_relation() {
        // For 6|m the general-family roots obey x(x−1) = (−90 ± √180)/440.
        let tables = n3_tables(MClass::Six);
        let roots = real_roots(tables.p);
        assert_eq!(roots.len(), 4);
        let y1 = (-90.0 + 180.0_f64.sqrt()) / 440.0;
        let y2 = (-90.0 - 180.0_f64.sqrt()) / 440.0;
        for x in roots {
            let y = x * (x - 1.0);
            assert!(
                (y - y1).abs() < 1e-12 || (y - y2).abs() < 1e-12,
                "x(x−1) = {y}"
            );
        }
    }

    #[test]
    fn hexagon_n3_contains_positive_branch() {
        let sols = closed_form_solutions(&cfg(6, 3)).unwrap();
        let positive = sols
            .iter()
            .find(|s| s.a.iter().all(|&v| v > 0.0))
            .expect("positive solution");
        let frozen = [0.22441629, 0.20489541, 0.1703201, 0.12663232];
        for (x, y) in positive.a.iter().zip(frozen) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-6);
        }
    }

    #[test]
    fn n3_special_solution_has_zero_second_mode() {
        for m in [3u32, 6, 9, 12] {
            let sols = closed_form_solutions(&cfg(m, 3)).unwrap();
            let special = sols
                .iter()
                .filter(|s| s.a[2].abs() < 1e-9)
                .collect::<Vec<_>>();
            assert_eq!(special.len(), 1, "m={m}");
            assert_abs_diff_eq!(special[0].a[0].abs(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn stress_case_large_root_back_substitution() {
        // m even, 3∤m: the eliminating quintic has a root near −118 and the
        // q-tables have five-digit coefficients; polish must still deliver
        // full accuracy on all five solutions.
        let c = cfg(2, 3);
        let sols = closed_form_solutions(&c).unwrap();
        assert_eq!(sols.len(), 5);
        let big = sols
            .iter()
            .map(|s| s.a.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .fold(0.0_f64, f64::max);
        assert!(big > 50.0, "expected a large-amplitude solution, max {big}");
        for s in &sols {
            assert!(s.residual_norm < 1e-10, "residual {:e}", s.residual_norm);
        }
    }

    #[test]
    fn n4_sign_patterns_are_distinct() {
        let sols = closed_form_solutions(&cfg(6, 4)).unwrap();
        let mut patterns: Vec<Vec<i8>> = sols
            .iter()
            .map(|s| s.a.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect())
            .collect();
        patterns.sort();
        patterns.dedup();
        assert_eq!(patterns.len(), 5);
        // Exactly one solution is strictly positive.
        assert_eq!(
            sols.iter().filter(|s| s.a.iter().all(|&v| v > 0.0)).count(),
            1
        );
    }

    #[test]
    fn solutions_are_fixed_points_not_just_small_residual() {
        let c = cfg(7, 3);
        let sols = closed_form_solutions(&c).unwrap();
        assert_eq!(sols.len(), 1);
        let q = q_apply(&c, &sols[0].a).unwrap();
        for (x, y) in sols[0].a.iter().zip(&q) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-12);
        }
        // λ = (−3+√5)/2 branch: first entry is the root itself.
        assert_abs_diff_eq!(sols[0].a[0], (-3.0 + 5.0_f64.sqrt()) / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn rotated_solutions_still_solve() {
        let c = cfg(6, 4);
        for s in closed_form_solutions(&c).unwrap() {
            let r = crate::matching::rotate_half_period(&s.a);
            assert!(residual_norm(&c, &r).unwrap() < 1e-9);
        }
    }
}

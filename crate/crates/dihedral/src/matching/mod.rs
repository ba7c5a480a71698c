//! The finite matching system `a = Q(a)`.
//!
//! A mode vector `a ∈ R^{N+1}` holds the core amplitudes of the `N+1`
//! angular modes. The quadratic map `Q` couples them through exact cosine
//! coefficients:
//!
//! ```text
//! Q_n(a) = 2 Σ_{j=1}^{N−n} cos(mπ(n−j)/3) a_j a_{n+j}
//!        +   Σ_{j=0}^{n}   cos(mπ(n−2j)/3) a_j a_{n−j},   n = 0..N.
//! ```
//!
//! Fixed points of `Q` are the admissible amplitude vectors. This module
//! evaluates `Q` and its derivative, solves `a = Q(a)` by damped Newton,
//! applies the three symmetry transforms that map solutions to solutions
//! (half-period rotation, harmonic embedding, bright/dark duality), and
//! enumerates solutions by seeded multi-start search. Closed-form families
//! for `N ≤ 4` live in [`closed_form_solutions`]; real-root isolation for
//! their coefficient polynomials in [`isolate_real_roots`].

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lattice::{LatticeConfig, MClass};
use crate::linalg::{LuFactors, Matrix};
use crate::{exec, Error, Result};

mod closed_form;
mod roots;

pub use closed_form::closed_form_solutions;
pub use roots::isolate_real_roots;

/// Amplitude vector `(a_0, …, a_N)`.
pub type ModeVector = Vec<f64>;

/// A converged fixed point of `Q` together with its quality measures.
#[derive(Debug, Clone, Serialize)]
pub struct MatchSolution {
    /// The amplitude vector.
    pub a: ModeVector,
    /// Max-norm of `a − Q(a)`.
    pub residual_norm: f64,
    /// `det(I − DQ(a))`; nonzero for isolated solutions.
    pub nondegeneracy_det: f64,
    /// Residue class of `m` the solution was computed under.
    pub class: MClass,
}

/// How an entry of [`enumerate_solutions`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymmetryOrigin {
    /// Converged directly from a Newton start.
    Direct,
    /// Half-period rotation of a direct solution.
    HalfPeriod,
    /// Bright/dark dual of a direct solution (`6 | m` only).
    Dark,
    /// Dual of the rotated solution.
    DarkHalfPeriod,
}

/// A solution found by [`enumerate_solutions`], tagged with its origin.
#[derive(Debug, Clone, Serialize)]
pub struct EnumeratedSolution {
    pub solution: MatchSolution,
    pub origin: SymmetryOrigin,
}

fn expect_modes(cfg: &LatticeConfig, a: &[f64]) -> Result<()> {
    if a.len() != cfg.modes() {
        return Err(Error::DimensionMismatch { expected: cfg.modes(), found: a.len() });
    }
    Ok(())
}

pub(crate) fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Evaluate `Q(a)`.
pub fn q_apply(cfg: &LatticeConfig, a: &[f64]) -> Result<ModeVector> {
    expect_modes(cfg, a)?;
    Ok(eval(cfg, a))
}

fn eval(cfg: &LatticeConfig, a: &[f64]) -> Vec<f64> {
    let n_max = cfg.truncation();
    (0..=n_max)
        .map(|n| {
            let mut cross = 0.0;
            for j in 1..=(n_max - n) {
                cross += cfg.cos_coeff(n as i64 - j as i64) * (a[j] * a[n + j]);
            }
            let mut inner = 0.0;
            for j in 0..=n {
                inner += cfg.cos_coeff(n as i64 - 2 * j as i64) * (a[j] * a[n - j]);
            }
            2.0 * cross + inner
        })
        .collect()
}

/// Analytic derivative `DQ(a)`, entry `(n, k) = ∂Q_n/∂a_k`.
pub fn q_jacobian(cfg: &LatticeConfig, a: &[f64]) -> Result<Matrix> {
    expect_modes(cfg, a)?;
    Ok(jacobian(cfg, a))
}

fn jacobian(cfg: &LatticeConfig, a: &[f64]) -> Matrix {
    let n_max = cfg.truncation();
    let mut jac = Matrix::zeros(n_max + 1, n_max + 1);
    // Product rule applied term by term; coincident indices (j = n−j etc.)
    // accumulate automatically.
    for n in 0..=n_max {
        for j in 1..=(n_max - n) {
            let c = 2.0 * cfg.cos_coeff(n as i64 - j as i64).value();
            jac[(n, j)] += c * a[n + j];
            jac[(n, n + j)] += c * a[j];
        }
        for j in 0..=n {
            let c = cfg.cos_coeff(n as i64 - 2 * j as i64).value();
            jac[(n, j)] += c * a[n - j];
            jac[(n, n - j)] += c * a[j];
        }
    }
    jac
}

/// Max-norm of the fixed-point residual `a − Q(a)`.
pub fn residual_norm(cfg: &LatticeConfig, a: &[f64]) -> Result<f64> {
    expect_modes(cfg, a)?;
    Ok(max_norm(&residual_vec(cfg, a)))
}

fn residual_vec(cfg: &LatticeConfig, a: &[f64]) -> Vec<f64> {
    let q = eval(cfg, a);
    a.iter().zip(q).map(|(x, qx)| x - qx).collect()
}

/// `I − DQ(a)`, the Jacobian of the fixed-point residual.
fn fixed_point_jacobian(cfg: &LatticeConfig, a: &[f64]) -> Matrix {
    let mut jac = jacobian(cfg, a);
    for i in 0..a.len() {
        jac[(i, i)] = 1.0 - jac[(i, i)];
        for j in 0..a.len() {
            if j != i {
                jac[(i, j)] = -jac[(i, j)];
            }
        }
    }
    jac
}

/// Scale-aware threshold below which `det(I − DQ)` counts as degenerate.
fn degeneracy_threshold(jac: &Matrix, modes: usize) -> f64 {
    1e-12 * jac.max_abs().max(f64::MIN_POSITIVE).powi(modes as i32)
}

const MAX_STEP_HALVINGS: u32 = 20;

/// Damped Newton iteration on `F(a) = a − Q(a)`.
///
/// Halves the step (up to [`MAX_STEP_HALVINGS`] times) whenever the full
/// update fails to reduce the residual, and records `det(I − DQ)` at the
/// solution. Iterates whose Jacobian determinant falls below the scale-aware
/// degeneracy threshold abort with [`Error::SingularJacobian`]; this is what
/// discards the non-isolated solution curves that exist for some `m`.
pub fn newton_fixed_point(
    cfg: &LatticeConfig,
    a0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<MatchSolution> {
    expect_modes(cfg, a0)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig("Newton tolerance must be positive".into()));
    }
    let modes = cfg.modes();
    let mut a = a0.to_vec();
    let mut f = residual_vec(cfg, &a);
    let mut f_norm = max_norm(&f);
    for iteration in 0..max_iter {
        if f_norm <= tol {
            return finish(cfg, a, f_norm, iteration);
        }
        let jac = fixed_point_jacobian(cfg, &a);
        let lu = LuFactors::new(jac.clone()).map_err(|_| Error::SingularJacobian {
            det: 0.0,
            iteration,
        })?;
        let det = lu.det();
        if det.abs() < degeneracy_threshold(&jac, modes) {
            return Err(Error::SingularJacobian { det, iteration });
        }
        let step = lu.solve(&f);
        let mut scale = 1.0;
        let mut accepted = None;
        let mut fallback = None;
        for _ in 0..=MAX_STEP_HALVINGS {
            let trial: Vec<f64> = a.iter().zip(&step).map(|(x, d)| x - scale * d).collect();
            let trial_f = residual_vec(cfg, &trial);
            let trial_norm = max_norm(&trial_f);
            if trial_norm < f_norm {
                accepted = Some((trial, trial_f, trial_norm));
                break;
            }
            if fallback.is_none() {
                fallback = Some((trial, trial_f, trial_norm));
            }
            scale *= 0.5;
        }
        // If no damping helps we are at the rounding floor; take the full
        // step and let the convergence test decide.
        let (next, next_f, next_norm) = accepted.or(fallback).expect("at least one trial");
        a = next;
        f = next_f;
        f_norm = next_norm;
    }
    if f_norm <= tol {
        return finish(cfg, a, f_norm, max_iter);
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: f_norm })
}

fn finish(cfg: &LatticeConfig, a: Vec<f64>, f_norm: f64, iteration: usize) -> Result<MatchSolution> {
    let jac = fixed_point_jacobian(cfg, &a);
    let det = crate::linalg::det(&jac);
    if det.abs() < degeneracy_threshold(&jac, cfg.modes()) {
        return Err(Error::SingularJacobian { det, iteration });
    }
    Ok(MatchSolution {
        a,
        residual_norm: f_norm,
        nondegeneracy_det: det,
        class: cfg.m_class(),
    })
}

/// Record residual and nondegeneracy data for an already-converged vector.
fn solution_record(cfg: &LatticeConfig, a: Vec<f64>) -> MatchSolution {
    let residual = max_norm(&residual_vec(cfg, &a));
    let det = crate::linalg::det(&fixed_point_jacobian(cfg, &a));
    MatchSolution { a, residual_norm: residual, nondegeneracy_det: det, class: cfg.m_class() }
}

/// A few undamped Newton steps keeping the best iterate seen.
///
/// Used to finish off closed-form constructions whose back-substituted
/// values sit within the Newton basin but carry amplified rounding (large
/// coefficient polynomials at large roots). Never moves away: if no step
/// improves the residual the input is returned as-is.
pub(crate) fn polish_solution(cfg: &LatticeConfig, a0: Vec<f64>) -> MatchSolution {
    let mut best = a0.clone();
    let mut best_norm = max_norm(&residual_vec(cfg, &best));
    let mut a = a0;
    for _ in 0..8 {
        let Ok(lu) = LuFactors::new(fixed_point_jacobian(cfg, &a)) else { break };
        let step = lu.solve(&residual_vec(cfg, &a));
        a = a.iter().zip(&step).map(|(x, d)| x - d).collect();
        let norm = max_norm(&residual_vec(cfg, &a));
        if norm < best_norm {
            best = a.clone();
            best_norm = norm;
        } else {
            break;
        }
    }
    solution_record(cfg, best)
}

/// The rotation symmetry: `a_n ↦ (−1)^n a_n`.
///
/// Maps fixed points of `Q` to fixed points (the map is equivariant), and
/// corresponds to rotating the pattern by half the angular period.
pub fn rotate_half_period(a: &[f64]) -> ModeVector {
    a.iter()
        .enumerate()
        .map(|(n, v)| if n % 2 == 0 { *v } else { -v })
        .collect()
}

/// Spread a solution of the stride-`i` sublattice onto a finer mode vector:
/// entry `ℓ` becomes `a_{ℓ/i}` when `i | ℓ` and zero otherwise.
///
/// A fixed point of `Q` at symmetry order `m·i` embeds to a fixed point at
/// order `m` whenever `⌊N_target/i⌋` equals the source truncation.
pub fn harmonic_embed(a: &[f64], stride: usize, n_target: usize) -> Result<ModeVector> {
    if stride == 0 {
        return Err(Error::InvalidConfig("embedding stride must be >= 1".into()));
    }
    if a.is_empty() || n_target / stride != a.len() - 1 {
        return Err(Error::IncompatibleEmbedding {
            stride,
            n_target,
            source_modes: a.len(),
        });
    }
    let mut out = vec![0.0; n_target + 1];
    for (j, &v) in a.iter().enumerate() {
        out[j * stride] = v;
    }
    Ok(out)
}

/// The bright/dark duality, defined for `6 | m` only: `b_0 = 1 − a_0`,
/// `b_ℓ = −a_ℓ` for `ℓ ≥ 1`. An involution exchanging elevations on a flat
/// background with dips on a patterned background.
pub fn dark_counterpart(cfg: &LatticeConfig, a: &[f64]) -> Result<ModeVector> {
    if cfg.m_class() != MClass::Six {
        return Err(Error::NotSixDivisible { m: cfg.m() });
    }
    expect_modes(cfg, a)?;
    let mut b: Vec<f64> = a.iter().map(|v| -v).collect();
    b[0] = 1.0 - a[0];
    Ok(b)
}

const ENUMERATE_MAX_ITER: usize = 60;

/// Multi-start Newton search over `[−1, 1]^{N+1}`.
///
/// Starts are drawn from a ChaCha stream seeded with `seed`, so results are
/// reproducible and independent of the parallel schedule (starts run in
/// parallel, deduplication is a sequential pass in start order). For `6 | m`
/// a deterministic decaying ramp is prepended to the start list: it sits in
/// the Newton basin of the strictly positive branch, which random starts
/// miss at larger `N`. Converged solutions closer than `100·tol` in max
/// norm are merged; each representative is closed under the symmetry group
/// (rotation, and duality when `6 | m`) with the images tagged by
/// [`SymmetryOrigin`].
pub fn enumerate_solutions(
    cfg: &LatticeConfig,
    n_starts: usize,
    seed: u64,
    tol: f64,
) -> Vec<EnumeratedSolution> {
    let modes = cfg.modes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(n_starts + 1);
    if cfg.m_class() == MClass::Six {
        let scale = modes as f64;
        starts.push(
            (0..modes)
                .map(|n| 0.6 * (1.0 - n as f64 / scale) / scale)
                .collect(),
        );
    }
    for _ in 0..n_starts {
        starts.push((0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }

    let converged: Vec<Option<MatchSolution>> = exec::map_indexed(starts.len(), |i| {
        newton_fixed_point(cfg, &starts[i], tol, ENUMERATE_MAX_ITER).ok()
    });

    let merge_dist = 100.0 * tol;
    let mut out: Vec<EnumeratedSolution> = Vec::new();
    for sol in converged.into_iter().flatten() {
        if !is_known(&out, &sol.a, merge_dist) {
            push_with_orbit(cfg, sol, merge_dist, &mut out);
        }
    }
    out
}

fn is_known(found: &[EnumeratedSolution], a: &[f64], merge_dist: f64) -> bool {
    found.iter().any(|s| {
        s.solution
            .a
            .iter()
            .zip(a)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
            < merge_dist
    })
}

fn push_with_orbit(
    cfg: &LatticeConfig,
    sol: MatchSolution,
    merge_dist: f64,
    out: &mut Vec<EnumeratedSolution>,
) {
    let base = sol.a.clone();
    out.push(EnumeratedSolution { solution: sol, origin: SymmetryOrigin::Direct });
    let mut images = vec![(rotate_half_period(&base), SymmetryOrigin::HalfPeriod)];
    if let Ok(dark) = dark_counterpart(cfg, &base) {
        images.push((rotate_half_period(&dark), SymmetryOrigin::DarkHalfPeriod));
        images.push((dark, SymmetryOrigin::Dark));
    }
    for (image, origin) in images {
        if !is_known(out, &image, merge_dist) {
            out.push(EnumeratedSolution { solution: solution_record(cfg, image), origin });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(m: u32, n: usize) -> LatticeConfig {
        LatticeConfig::new(m, n).unwrap()
    }

    const HEX_N1: [f64; 2] = [0.5, 0.35355339059327373]; // (1/2, 1/(2√2))

    #[test]
    fn q_fixes_known_points() {
        let c = cfg(6, 1);
        assert_eq!(q_apply(&c, &[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        assert_eq!(q_apply(&c, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        let q = q_apply(&c, &HEX_N1).unwrap();
        assert_abs_diff_eq!(q[0], HEX_N1[0], epsilon = 1e-15);
        assert_abs_diff_eq!(q[1], HEX_N1[1], epsilon = 1e-15);
    }

    #[test]
    fn q_rejects_wrong_length() {
        assert!(matches!(
            q_apply(&cfg(6, 3), &[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 4, found: 2 })
        ));
    }

    #[test]
    fn jacobian_at_special_points() {
        let c = cfg(6, 1);
        let z = q_jacobian(&c, &[0.0, 0.0]).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let j = q_jacobian(&c, &[1.0, 0.0]).unwrap();
        assert_eq!(j[(0, 0)], 2.0);
        assert_eq!(j[(0, 1)], 0.0);
        assert_eq!(j[(1, 0)], 0.0);
        assert_eq!(j[(1, 1)], 2.0);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        use rand::prelude::*;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for &m in &[2u32, 3, 5, 6, 7, 12] {
            for n in [1usize, 2, 4, 6] {
                let c = cfg(m, n);
                let a: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let jac = q_jacobian(&c, &a).unwrap();
                for k in 0..=n {
                    let mut ap = a.clone();
                    let mut am = a.clone();
                    ap[k] += h;
                    am[k] -= h;
                    let qp = q_apply(&c, &ap).unwrap();
                    let qm = q_apply(&c, &am).unwrap();
                    for row in 0..=n {
                        let fd = (qp[row] - qm[row]) / (2.0 * h);
                        assert!(
                            (jac[(row, k)] - fd).abs() < 1e-6,
                            "m={m} N={n} entry ({row},{k}): {} vs {fd}",
                            jac[(row, k)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_is_exactly_equivariant() {
        use rand::prelude::*;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &m in &[2u32, 5, 6, 9] {
            for n in [1usize, 3, 7] {
                let c = cfg(m, n);
                let a: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let lhs = q_apply(&c, &rotate_half_period(&a)).unwrap();
                let rhs = rotate_half_period(&q_apply(&c, &a).unwrap());
                // Negation is exact in IEEE arithmetic, so this holds bitwise.
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn newton_converges_to_named_solutions() {
        let sol = newton_fixed_point(&cfg(6, 1), &[0.4, 0.3], 1e-12, 50).unwrap();
        assert_abs_diff_eq!(sol.a[0], HEX_N1[0], epsilon = 1e-12);
        assert_abs_diff_eq!(sol.a[1], HEX_N1[1], epsilon = 1e-12);
        assert!(sol.residual_norm <= 1e-12);
        assert!(sol.nondegeneracy_det.abs() > 1e-8);

        let sol = newton_fixed_point(&cfg(2, 1), &[-0.9, 1.3], 1e-12, 50).unwrap();
        assert_abs_diff_eq!(sol.a[0], -1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(sol.a[1], std::f64::consts::SQRT_2, epsilon = 1e-11);
    }

    #[test]
    fn newton_keeps_trivial_fixed_point() {
        let sol = newton_fixed_point(&cfg(6, 3), &[0.0; 4], 1e-12, 10).unwrap();
        assert_eq!(sol.a, vec![0.0; 4]);
        assert_eq!(sol.residual_norm, 0.0);
        assert_abs_diff_eq!(sol.nondegeneracy_det, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rotation_and_duality_values() {
        assert_eq!(rotate_half_period(&[1.0, 2.0, 3.0, 4.0]), vec![1.0, -2.0, 3.0, -4.0]);
        let c = cfg(6, 1);
        assert_eq!(dark_counterpart(&c, &[1.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(dark_counterpart(&c, &[0.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        let dual = dark_counterpart(&c, &HEX_N1).unwrap();
        assert_eq!(dual, vec![0.5, -HEX_N1[1]]);
        assert!(matches!(
            dark_counterpart(&cfg(5, 1), &[0.1, 0.1]),
            Err(Error::NotSixDivisible { m: 5 })
        ));
    }

    #[test]
    fn duality_preserves_solutions() {
        let c = cfg(12, 2);
        let sols = closed_form_solutions(&c).unwrap();
        assert!(!sols.is_empty());
        for s in &sols {
            let dual = dark_counterpart(&c, &s.a).unwrap();
            let r = residual_norm(&c, &dual).unwrap();
            assert!(r <= 3.0 * (s.residual_norm + 1e-14), "dual residual {r}");
        }
    }

    #[test]
    fn harmonic_embedding_layout() {
        let e = harmonic_embed(&HEX_N1, 2, 2).unwrap();
        assert_eq!(e, vec![0.5, 0.0, HEX_N1[1]]);
        let e = harmonic_embed(&HEX_N1, 3, 3).unwrap();
        assert_eq!(e, vec![0.5, 0.0, 0.0, HEX_N1[1]]);
        let id = harmonic_embed(&[1.0, 2.0, 3.0], 1, 2).unwrap();
        assert_eq!(id, vec![1.0, 2.0, 3.0]);
        assert!(harmonic_embed(&HEX_N1, 2, 5).is_err());
        assert!(harmonic_embed(&[], 1, 0).is_err());
    }

    #[test]
    fn embedding_maps_solutions_to_solutions() {
        // Source solves the system at order m·i; the embedding solves it at
        // order m with the same numbers spread over the sublattice.
        let source = closed_form_solutions(&cfg(12, 1)).unwrap().remove(0);
        let embedded = harmonic_embed(&source.a, 2, 2).unwrap();
        assert!(residual_norm(&cfg(6, 2), &embedded).unwrap() < 1e-12);

        let source = closed_form_solutions(&cfg(6, 1)).unwrap().remove(0);
        let embedded = harmonic_embed(&source.a, 3, 3).unwrap();
        assert!(residual_norm(&cfg(2, 3), &embedded).unwrap() < 1e-12);
        let embedded = harmonic_embed(&source.a, 2, 3).unwrap();
        assert!(residual_norm(&cfg(3, 3), &embedded).unwrap() < 1e-12);
    }

    #[test]
    fn enumeration_finds_the_full_n1_solution_set() {
        let c = cfg(6, 1);
        let found = enumerate_solutions(&c, 200, 42, 1e-12);
        let expect = [
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, HEX_N1[1]],
            vec![0.5, -HEX_N1[1]],
        ];
        for target in &expect {
            assert!(
                found.iter().any(|s| s
                    .solution
                    .a
                    .iter()
                    .zip(target)
                    .all(|(x, y)| (x - y).abs() < 1e-9)),
                "missing {target:?}"
            );
        }
        // The 2×2 quadratic system has exactly these four solutions.
        assert_eq!(found.len(), 4);
        for s in &found {
            assert!(s.solution.residual_norm < 1e-9);
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let c = cfg(6, 2);
        let a = enumerate_solutions(&c, 60, 9, 1e-12);
        let b = enumerate_solutions(&c, 60, 9, 1e-12);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.solution.a, y.solution.a);
            assert_eq!(x.origin, y.origin);
        }
    }

    #[test]
    fn enumeration_reaches_positive_branch_via_ramp_start() {
        let c = cfg(6, 10);
        let found = enumerate_solutions(&c, 40, 3, 1e-12);
        let positive = found
            .iter()
            .find(|s| s.solution.a.iter().all(|&v| v > 0.0))
            .expect("positive branch");
        assert_eq!(positive.origin, SymmetryOrigin::Direct);
        // Amplitudes decay with the mode index and scale like 1/(N+1).
        let a = &positive.solution.a;
        assert!(a.windows(2).all(|w| w[1] < w[0]));
        assert!(a[0] < 0.3);
    }
}

//! Interval enclosures of the quantities that drive the certification
//! polynomials: per-node defect images, the off-node interpolation defect,
//! the collocation Jacobian, and the Lipschitz-type coefficients.
//!
//! Everything here works on a piecewise-linear profile with float node
//! values.  The node values are exact data, all shifts in the defect
//! integrals are whole multiples of the mesh width, and so every integral
//! that appears reduces to a sum over single mesh segments of a product of
//! two linear functions — evaluated in outward-rounded interval arithmetic.

use crate::continuum::Spline;
use crate::linalg::Matrix;
use crate::verify::interval::Interval;
use crate::{exec, Error, Result};

fn node_intervals(w: &Spline) -> Vec<Interval> {
    w.values().iter().map(|&x| Interval::point(x)).collect()
}

fn mesh_width(segments: usize) -> Interval {
    Interval::ONE
        .div(Interval::point(segments as f64))
        .expect("segment count is positive")
}

/// `∫` over one mesh segment of the product of two linear functions with
/// endpoint values `(p0, p1)` and `(q0, q1)`; `c` is `δt/6`.
fn segment_integral(c: Interval, p0: Interval, p1: Interval, q0: Interval, q1: Interval) -> Interval {
    c * (p0 * (q0 * 2.0 + q1) + p1 * (q0 + q1 * 2.0))
}

/// Node values of the quadratic defect integral
/// `g(t) = −2∫₀^{1−t} w(s)w(t+s)ds − ∫₀^t w(s)w(t−s)ds`
/// as intervals.  At a node the shifted copies of the profile share the
/// mesh, so both integrals split into whole segments.
fn defect_integral_at_nodes(v: &[Interval], c: Interval) -> Vec<Interval> {
    let n = v.len();
    exec::map_indexed(n, |i| {
        let mut far = Interval::ZERO;
        for k in 0..(n - 1 - i) {
            far += segment_integral(c, v[k], v[k + 1], v[k + i], v[k + i + 1]);
        }
        let mut near = Interval::ZERO;
        for k in 0..i {
            near += segment_integral(c, v[k], v[k + 1], v[i - k], v[i - k - 1]);
        }
        -(far * 2.0 + near)
    })
}

/// Per-node bound `Y_k ⊇ |(A†[ŵ + g])_k|` together with the off-node bound
/// `Y_∞` on the distance between the defect image and its linear interpolant.
pub fn y_bounds(w: &Spline, a_dagger: &Matrix) -> Result<(Vec<Interval>, Interval)> {
    let v = node_intervals(w);
    let n = v.len();
    if a_dagger.nrows() != n || a_dagger.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a_dagger.nrows(),
        });
    }
    let dt = mesh_width(n - 1);
    let c = dt.div(Interval::point(6.0)).expect("six is not zero");
    let g = defect_integral_at_nodes(&v, c);
    let image: Vec<Interval> = (0..n).map(|k| v[k] + g[k]).collect();
    let y = exec::map_indexed(n, |k| {
        let row = a_dagger.row(k);
        let mut acc = Interval::ZERO;
        for (j, &a) in row.iter().enumerate() {
            acc += Interval::point(a) * image[j];
        }
        acc.abs()
    });
    Ok((y, off_node_defect_bound(&v, dt)))
}

/// Sharp interpolation-error bound for a `W^{2,∞}` function: on each segment
/// the gap to the linear interpolant is at most `δt²/8` times the essential
/// sup of the second derivative there.  Differentiating the defect integral
/// twice (for piecewise-linear `w`, so `w′` is piecewise constant and no
/// distributional terms arise) gives
///
/// ```text
/// g″(t) = −2 w′(1−t) w(1) + 2∫_t^1 w′(s−t) w′(s) ds − ∫_0^t w′(t−s) w′(s) ds
/// ```
///
/// The boundary term is exact per segment; the slope autocorrelations are
/// bounded by the largest slope times the tail/head variation of `w`.
fn off_node_defect_bound(v: &[Interval], dt: Interval) -> Interval {
    let m = v.len() - 1;
    let slopes: Vec<Interval> = (0..m)
        .map(|k| (v[k + 1] - v[k]).div(dt).expect("mesh width is positive"))
        .collect();
    // prefix[k] = ∫_0^{t_k} |w′|
    let mut prefix = vec![Interval::ZERO; m + 1];
    for k in 0..m {
        prefix[k + 1] = prefix[k] + slopes[k].abs() * dt;
    }
    let total = prefix[m];
    let s_max = slopes
        .iter()
        .fold(Interval::ZERO, |acc, s| acc.max(s.abs()));
    let scale = (dt * dt)
        .div(Interval::point(8.0))
        .expect("eight is not zero");
    let w_end = v[m];
    let mut worst = Interval::ZERO;
    for k in 0..m {
        let boundary = -(slopes[m - 1 - k] * w_end) * 2.0;
        let tail = total - prefix[k];
        let head = prefix[k + 1];
        let spread = (s_max * (tail * 2.0 + head)).abs().sup();
        let enclosure = boundary + Interval::new(-spread, spread);
        worst = worst.max(scale * enclosure.abs());
    }
    worst
}

/// Interval Jacobian of the node-collocated defect map.  Term-for-term
/// mirror of the float Jacobian in the continuum module, so every float
/// entry lies inside the corresponding interval entry by construction.
pub fn phi_matrix(w: &Spline) -> Vec<Vec<Interval>> {
    let v = node_intervals(w);
    let n = v.len();
    let dt = mesh_width(n - 1);
    let c = dt.div(Interval::point(6.0)).expect("six is not zero");
    let c2 = c * 2.0;
    exec::map_indexed(n, |i| {
        let mut row = vec![Interval::ZERO; n];
        for k in 0..(n - 1 - i) {
            let (a0, a1, b0, b1) = (k, k + 1, k + i, k + i + 1);
            row[a0] -= c2 * (v[b0] * 2.0 + v[b1]);
            row[a1] -= c2 * (v[b0] + v[b1] * 2.0);
            row[b0] -= c2 * (v[a0] * 2.0 + v[a1]);
            row[b1] -= c2 * (v[a0] + v[a1] * 2.0);
        }
        for k in 0..i {
            let (a0, a1, b0, b1) = (k, k + 1, i - k, i - k - 1);
            row[a0] -= c * (v[b0] * 2.0 + v[b1]);
            row[a1] -= c * (v[b0] + v[b1] * 2.0);
            row[b0] -= c * (v[a0] * 2.0 + v[a1]);
            row[b1] -= c * (v[a0] + v[a1] * 2.0);
        }
        row[i] += Interval::ONE;
        row
    })
}

/// Linear and quadratic certification coefficients.
pub struct ZBounds {
    /// Per node: defect row sum of `|I − A†·Φ|` plus `(|A†| V¹)_k`.
    pub z_lin: Vec<Interval>,
    /// Per node: `(|A†| 1)_k · 2(1+ω)²`.
    pub z_quad: Vec<Interval>,
    /// Linear coefficient of the off-node polynomial.
    pub w1: Interval,
    /// Quadratic coefficient of the off-node polynomial.
    pub w2: Interval,
}

pub fn z_bounds(w: &Spline, a_dagger: &Matrix, omega: f64) -> Result<ZBounds> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "weight omega must be positive and finite, got {omega}"
        )));
    }
    let v = node_intervals(w);
    let n = v.len();
    if a_dagger.nrows() != n || a_dagger.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a_dagger.nrows(),
        });
    }
    let dt = mesh_width(n - 1);
    let om = Interval::point(omega);
    let one_plus = Interval::ONE + om;

    let phi = phi_matrix(w);
    // column-major copy so the defect accumulation below runs contiguously
    let mut cols = vec![vec![Interval::ZERO; n]; n];
    for (i, row) in phi.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            cols[j][i] = e;
        }
    }

    // trapezoid prefix integrals of the profile (exact on linear segments)
    let mut prefix = vec![Interval::ZERO; n];
    for k in 0..(n - 1) {
        prefix[k + 1] = prefix[k] + (v[k] + v[k + 1]) * dt * 0.5;
    }
    let total = prefix[n - 1];
    // V¹_k = ω (∫₀^{1−t_k} w + ∫_{t_k}^1 w + 2∫₀^{t_k} w)
    let v1: Vec<Interval> = (0..n)
        .map(|k| om * (prefix[n - 1 - k] + total + prefix[k]))
        .collect();
    let v2 = one_plus * one_plus * 2.0;

    let per_row: Vec<(Interval, Interval, Interval)> = exec::map_indexed(n, |i| {
        let a_row = a_dagger.row(i);
        let mut defect = Interval::ZERO;
        for (j, col) in cols.iter().enumerate() {
            let mut acc = Interval::ZERO;
            for (k, &a) in a_row.iter().enumerate() {
                acc += Interval::point(a) * col[k];
            }
            let target = if i == j { Interval::ONE } else { Interval::ZERO };
            defect += (target - acc).abs();
        }
        let mut weighted = Interval::ZERO;
        let mut abs_sum = Interval::ZERO;
        for (j, &a) in a_row.iter().enumerate() {
            let mag = Interval::point(a.abs());
            weighted += mag * v1[j];
            abs_sum += mag;
        }
        (defect, weighted, abs_sum)
    });

    let z_lin = per_row.iter().map(|(d, wv, _)| *d + *wv).collect();
    let z_quad = per_row.iter().map(|(_, _, s)| *s * v2).collect();

    let w1 = (one_plus * dt * 4.0) * (v[n - 1].max(v[n - 2]) + v[0].max(v[1]) * 2.0);
    let w2 = (one_plus * 6.0) * (dt * one_plus * 2.0 + om);

    Ok(ZBounds {
        z_lin,
        z_quad,
        w1,
        w2,
    })
}

/// Interval LU factorisation with partial pivoting by mignitude.  Succeeds
/// (returns `true`) only if every pivot interval excludes zero, which
/// certifies that every real matrix inside the input — here the single
/// point matrix `a` — is injective.
pub fn interval_lu_injective(a: &Matrix) -> bool {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "injectivity check needs a square matrix");
    let mut rows: Vec<Vec<Interval>> = (0..n)
        .map(|i| a.row(i).iter().map(|&x| Interval::point(x)).collect())
        .collect();
    for k in 0..n {
        let mut best = k;
        let mut best_m = rows[k][k].mignitude();
        for i in (k + 1)..n {
            let m = rows[i][k].mignitude();
            if m > best_m {
                best = i;
                best_m = m;
            }
        }
        if best_m == 0.0 {
            return false;
        }
        rows.swap(k, best);
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = pivot_row[k];
        exec::for_each_mut(tail, |_, row| {
            if row[k] == Interval::ZERO {
                return;
            }
            let mlt = row[k].div(pivot).expect("pivot excludes zero");
            for j in (k + 1)..n {
                row[j] -= mlt * pivot_row[j];
            }
            row[k] = Interval::ZERO;
        });
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum;

    fn curved_profile(segments: usize) -> Spline {
        Spline::sample(segments, |t| 0.8 - 0.42 * t + 0.05 * t * t)
    }

    #[test]
    fn phi_contains_the_float_jacobian() {
        let w = curved_profile(24);
        let float_jac = continuum::g_jacobian(&w);
        let phi = phi_matrix(&w);
        for i in 0..25 {
            for j in 0..25 {
                let entry = phi[i][j];
                assert!(
                    entry.contains(float_jac[(i, j)]),
                    "float entry ({i},{j}) = {} outside {}",
                    float_jac[(i, j)],
                    entry
                );
                assert!(entry.width() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_of_zero_profile_is_the_identity() {
        let phi = phi_matrix(&Spline::zero(12));
        for (i, row) in phi.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(e.contains(expect));
                assert!(e.width() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_profile_has_vanishing_defect_bounds() {
        let w = Spline::zero(16);
        let a = Matrix::identity(17);
        let (y, y_inf) = y_bounds(&w, &a).unwrap();
        for yk in &y {
            assert!(yk.sup() < 1e-100);
        }
        assert!(y_inf.sup() < 1e-100);
    }

    #[test]
    fn off_node_bound_improves_like_the_square_of_the_mesh() {
        let a40 = Matrix::identity(41);
        let a80 = Matrix::identity(81);
        let (_, coarse) = y_bounds(&curved_profile(40), &a40).unwrap();
        let (_, fine) = y_bounds(&curved_profile(80), &a80).unwrap();
        assert!(fine.sup() < coarse.sup());
        let ratio = coarse.sup() / fine.sup();
        assert!((2.5..6.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn y_bounds_rejects_mismatched_inverse() {
        let w = Spline::zero(10);
        let a = Matrix::identity(4);
        assert!(matches!(
            y_bounds(&w, &a),
            Err(Error::DimensionMismatch { expected: 11, found: 4 })
        ));
    }

    #[test]
    fn lipschitz_coefficients_on_a_constant_profile() {
        // profile ≡ 2 on four segments, ω = 1/2, identity in place of A†:
        // W¹ = 4·(3/2)·(1/4)·(2 + 2·2) = 9,  W² = 6·(3/2)·(2·(1/4)·(3/2) + 1/2) = 11.25,
        // Z_quad = 1 · 2(3/2)² = 4.5,  and V¹_k = (1/2)(2(1−t_k) + 2 + 2t_k) = 2.
        let w = Spline::constant(4, 2.0);
        let a = Matrix::identity(5);
        let zb = z_bounds(&w, &a, 0.5).unwrap();
        assert!(zb.w1.contains(9.0) && zb.w1.width() < 1e-9);
        assert!(zb.w2.contains(11.25) && zb.w2.width() < 1e-9);
        for q in &zb.z_quad {
            assert!(q.contains(4.5) && q.width() < 1e-9);
        }
        let phi = phi_matrix(&w);
        for k in 0..5 {
            let defect: f64 = (0..5)
                .map(|j| {
                    let target = if k == j { 1.0 } else { 0.0 };
                    (Interval::point(target) - phi[k][j]).abs().sup()
                })
                .sum();
            let slack = (zb.z_lin[k].sup() - (defect + 2.0)).abs();
            assert!(slack < 1e-9, "node {k}: slack {slack}");
        }
    }

    #[test]
    fn zero_inverse_reduces_to_pure_defect() {
        let w = curved_profile(12);
        let a = Matrix::zeros(13, 13);
        let zb = z_bounds(&w, &a, 0.1).unwrap();
        for k in 0..13 {
            assert!(zb.z_lin[k].contains(1.0) && zb.z_lin[k].width() < 1e-12);
            assert!(zb.z_quad[k].contains(0.0) && zb.z_quad[k].width() < 1e-12);
        }
    }

    #[test]
    fn interval_lu_accepts_and_rejects() {
        assert!(interval_lu_injective(&Matrix::identity(6)));
        assert!(!interval_lu_injective(&Matrix::zeros(3, 3)));

        let mut singular = Matrix::zeros(2, 2);
        singular[(0, 0)] = 1.0;
        singular[(0, 1)] = 2.0;
        singular[(1, 0)] = 2.0;
        singular[(1, 1)] = 4.0;
        assert!(!interval_lu_injective(&singular));

        let mut hilbert = Matrix::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                hilbert[(i, j)] = 1.0 / (i + j + 1) as f64;
            }
        }
        assert!(interval_lu_injective(&hilbert));
    }
}

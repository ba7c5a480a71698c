//! The continuum limit of the matching system for `6 | m`.
//!
//! As the truncation grows, the rescaled amplitudes `(N+1)·a_n` sample a
//! function `α : [0,1] → R` satisfying the quadratic integral equation
//!
//! ```text
//! α(t) = 2 ∫_0^{1−t} α(s) α(s+t) ds + ∫_0^t α(s) α(t−s) ds,
//! ```
//!
//! i.e. `G(α) := α − Q_∞(α) = 0`. The unknown is discretised as a
//! piecewise-linear [`Spline`] on a uniform mesh and the equation is
//! collocated at the nodes. Products of two linear splines are piecewise
//! quadratic, so every integral here is computed segment-exactly — no
//! quadrature error enters, which the downstream verification machinery
//! relies on.
//!
//! The bridge back to finite truncations is the rescaled map
//! `F_N(a)_n = a_n − (2/(N+1)) Σ_{j=1}^{N−n} a_j a_{n+j}
//! − (1/(N+1)) Σ_{j=0}^{n} a_j a_{n−j}` ([`f_n_apply`]): its roots are
//! exactly the matching solutions scaled by `N+1`, and its sums are
//! Riemann sums of the integrals above. [`correspondence_error`] measures
//! `sup_n |a_n − α(n/(N+1))/(N+1)|` for a matching-scale vector `a`.

use crate::linalg::{LuFactors, Matrix};
use crate::{exec, Error, Result};

/// Piecewise-linear function on the uniform mesh `t_k = k/M` of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    values: Vec<f64>,
}

impl Spline {
    /// Wrap node values; `values[k]` is the value at `t_k = k/M` with
    /// `M = values.len() − 1 ≥ 2`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidConfig(
                "a spline needs at least 2 segments (3 node values)".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite spline node value".into()));
        }
        Ok(Self { values })
    }

    pub fn zero(segments: usize) -> Self {
        Self { values: vec![0.0; segments + 1] }
    }

    pub fn constant(segments: usize, c: f64) -> Self {
        Self { values: vec![c; segments + 1] }
    }

    /// Sample a function at the nodes.
    pub fn sample(segments: usize, f: impl Fn(f64) -> f64) -> Self {
        let m = segments as f64;
        Self { values: (0..=segments).map(|k| f(k as f64 / m)).collect() }
    }

    /// Segment count `M`.
    pub fn segments(&self) -> usize {
        self.values.len() - 1
    }

    /// Mesh width `δt = 1/M`.
    pub fn dt(&self) -> f64 {
        1.0 / self.segments() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolant at `t`; clamps `t` into `[0, 1]` so that
    /// rounding in breakpoint arithmetic cannot step outside the mesh.
    pub fn eval(&self, t: f64) -> f64 {
        let m = self.segments();
        let x = (t.clamp(0.0, 1.0)) * m as f64;
        let k = (x as usize).min(m - 1);
        let frac = x - k as f64;
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Resample onto a different uniform mesh by linear interpolation.
    pub fn resample(&self, segments: usize) -> Spline {
        Spline::sample(segments, |t| self.eval(t))
    }
}

/// Exact integral of the product of two linear functions over a width-`h`
/// segment with endpoint values `(p0, p1)` and `(q0, q1)`.
#[inline]
fn segment_product(h: f64, p0: f64, p1: f64, q0: f64, q1: f64) -> f64 {
    h / 6.0 * (2.0 * p0 * q0 + p0 * q1 + p1 * q0 + 2.0 * p1 * q1)
}

/// `Q_∞(w)(t) = 2 ∫_0^{1−t} w(s) w(s+t) ds + ∫_0^t w(s) w(t−s) ds`.
///
/// Both integrands are products of linear pieces between the breakpoints
/// induced by the mesh and its shift by `t`, so the result is exact up to
/// rounding for any `t ∈ [0, 1]`, not just at nodes.
pub fn q_inf_apply(w: &Spline, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain { name: "t", value: t, domain: "[0, 1]" });
    }
    let far = shifted_product_integral(w, t, false);
    let near = shifted_product_integral(w, t, true);
    Ok(2.0 * far + near)
}

/// `∫_0^{1−t} w(s) w(s+t) ds` (`reflected = false`) or
/// `∫_0^t w(s) w(t−s) ds` (`reflected = true`), over the union mesh of the
/// node set and its shift.
fn shifted_product_integral(w: &Spline, t: f64, reflected: bool) -> f64 {
    let m = w.segments();
    let dt = w.dt();
    let upper = if reflected { t } else { 1.0 - t };
    if upper <= 0.0 {
        return 0.0;
    }
    let mut cuts: Vec<f64> = Vec::with_capacity(2 * m + 4);
    cuts.push(0.0);
    cuts.push(upper);
    for k in 1..=m {
        let node = k as f64 * dt;
        if node < upper {
            cuts.push(node);
        }
        // s-values at which the second factor crosses a node
        let shifted = if reflected { t - node } else { node - t };
        if shifted > 0.0 && shifted < upper {
            cuts.push(shifted);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    for pair in cuts.windows(2) {
        let (s0, s1) = (pair[0], pair[1]);
        let h = s1 - s0;
        if h <= 0.0 {
            continue;
        }
        let (q0, q1) = if reflected {
            (w.eval(t - s0), w.eval(t - s1))
        } else {
            (w.eval(s0 + t), w.eval(s1 + t))
        };
        sum += segment_product(h, w.eval(s0), w.eval(s1), q0, q1);
    }
    sum
}

/// `Q_∞(w)` at node `t_i`: the shifted mesh coincides with the mesh, so
/// the union-mesh machinery collapses to sums over whole segments.
fn q_inf_at_node(w: &[f64], dt: f64, i: usize) -> f64 {
    let m = w.len() - 1;
    let mut far = 0.0;
    for k in 0..(m - i) {
        far += segment_product(dt, w[k], w[k + 1], w[k + i], w[k + i + 1]);
    }
    let mut near = 0.0;
    for k in 0..i {
        near += segment_product(dt, w[k], w[k + 1], w[i - k], w[i - k - 1]);
    }
    2.0 * far + near
}

/// Node values of `G(w) = w − Q_∞(w)`.
pub fn g_residual(w: &Spline) -> Vec<f64> {
    let v = w.values();
    let dt = w.dt();
    exec::map_indexed(v.len(), |i| v[i] - q_inf_at_node(v, dt, i))
}

/// Jacobian of the node-collocated `G` with respect to the node values.
pub(crate) fn g_jacobian(w: &Spline) -> Matrix {
    let v = w.values();
    let dt = w.dt();
    let n = v.len();
    let rows = exec::map_indexed(n, |i| {
        let mut row = vec![0.0; n];
        // d/dv of  −2 Σ_k ∫ w|_[k,k+1] · w|_[k+i,k+i+1]  −  Σ_k ∫ w|_[k,k+1] · w̃
        // via the product rule on the four endpoint values of each segment.
        let c = dt / 6.0;
        for k in 0..(n - 1 - i) {
            let (a0, a1, b0, b1) = (k, k + 1, k + i, k + i + 1);
            row[a0] -= 2.0 * c * (2.0 * v[b0] + v[b1]);
            row[a1] -= 2.0 * c * (v[b0] + 2.0 * v[b1]);
            row[b0] -= 2.0 * c * (2.0 * v[a0] + v[a1]);
            row[b1] -= 2.0 * c * (v[a0] + 2.0 * v[a1]);
        }
        for k in 0..i {
            let (a0, a1, b0, b1) = (k, k + 1, i - k, i - k - 1);
            row[a0] -= c * (2.0 * v[b0] + v[b1]);
            row[a1] -= c * (v[b0] + 2.0 * v[b1]);
            row[b0] -= c * (2.0 * v[a0] + v[a1]);
            row[b1] -= c * (v[a0] + 2.0 * v[a1]);
        }
        row[i] += 1.0;
        row
    });
    let mut jac = Matrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        jac.row_mut(i).copy_from_slice(&row);
    }
    jac
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

const MAX_NEWTON_ITER: usize = 50;
const MAX_STEP_HALVINGS: u32 = 20;

/// Newton solve of the collocated system `G(w)(t_k) = 0` on an `M`-segment
/// mesh, starting from `init` (resampled if its mesh differs).
pub fn solve_continuum(m: usize, init: &Spline, tol: f64) -> Result<Spline> {
    if m < 2 {
        return Err(Error::InvalidConfig("mesh must have at least 2 segments".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig("Newton tolerance must be positive".into()));
    }
    let mut w = if init.segments() == m { init.clone() } else { init.resample(m) };
    let mut f = g_residual(&w);
    let mut f_norm = max_norm(&f);
    for _ in 0..MAX_NEWTON_ITER {
        if f_norm <= tol {
            return Ok(w);
        }
        let lu = LuFactors::new(g_jacobian(&w))?;
        let step = lu.solve(&f);
        let mut scale = 1.0;
        let mut accepted = None;
        let mut fallback = None;
        for _ in 0..=MAX_STEP_HALVINGS {
            let trial: Vec<f64> = w
                .values()
                .iter()
                .zip(&step)
                .map(|(x, d)| x - scale * d)
                .collect();
            let trial_spline = Spline { values: trial };
            let trial_f = g_residual(&trial_spline);
            let trial_norm = max_norm(&trial_f);
            if trial_norm < f_norm {
                accepted = Some((trial_spline, trial_f, trial_norm));
                break;
            }
            if fallback.is_none() {
                fallback = Some((trial_spline, trial_f, trial_norm));
            }
            scale *= 0.5;
        }
        let (next, next_f, next_norm) = accepted.or(fallback).expect("at least one trial");
        w = next;
        f = next_f;
        f_norm = next_norm;
    }
    if f_norm <= tol {
        Ok(w)
    } else {
        Err(Error::NoConvergence { iterations: MAX_NEWTON_ITER, residual: f_norm })
    }
}

/// The rescaled finite map `F_N`; roots are matching solutions times `N+1`.
pub fn f_n_apply(a: &[f64]) -> Vec<f64> {
    let n_max = a.len() - 1;
    let inv = 1.0 / a.len() as f64;
    (0..=n_max)
        .map(|n| {
            let mut cross = 0.0;
            for j in 1..=(n_max - n) {
                cross += a[j] * a[n + j];
            }
            let mut inner = 0.0;
            for j in 0..=n {
                inner += a[j] * a[n - j];
            }
            a[n] - inv * (2.0 * cross + inner)
        })
        .collect()
}

fn f_n_jacobian(a: &[f64]) -> Matrix {
    let n_max = a.len() - 1;
    let inv = 1.0 / a.len() as f64;
    let mut jac = Matrix::zeros(a.len(), a.len());
    for n in 0..=n_max {
        for j in 1..=(n_max - n) {
            jac[(n, j)] -= 2.0 * inv * a[n + j];
            jac[(n, n + j)] -= 2.0 * inv * a[j];
        }
        for j in 0..=n {
            jac[(n, j)] -= inv * a[n - j];
            jac[(n, n - j)] -= inv * a[j];
        }
        jac[(n, n)] += 1.0;
    }
    jac
}

/// Damped Newton on `F_N` from a given start.
fn newton_f_n(a0: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let mut a = a0.to_vec();
    let mut f = f_n_apply(&a);
    let mut f_norm = max_norm(&f);
    for _ in 0..max_iter {
        if f_norm <= tol {
            return Ok(a);
        }
        let lu = LuFactors::new(f_n_jacobian(&a))?;
        let step = lu.solve(&f);
        let mut scale = 1.0;
        for attempt in 0..=MAX_STEP_HALVINGS {
            let trial: Vec<f64> = a.iter().zip(&step).map(|(x, d)| x - scale * d).collect();
            let trial_f = f_n_apply(&trial);
            let trial_norm = max_norm(&trial_f);
            if trial_norm < f_norm || attempt == MAX_STEP_HALVINGS {
                a = trial;
                f = trial_f;
                f_norm = trial_norm;
                break;
            }
            scale *= 0.5;
        }
    }
    if f_norm <= tol {
        Ok(a)
    } else {
        Err(Error::NoConvergence { iterations: max_iter, residual: f_norm })
    }
}

/// Interpret `samples` as values at `n/len` and interpolate onto an
/// `m`-segment node set, extrapolating linearly past the last sample
/// (the sample points stop short of `t = 1` by one spacing).
fn transfer_to_mesh(samples: &[f64], m: usize) -> Vec<f64> {
    let count = samples.len();
    let spacing = 1.0 / count as f64;
    (0..=m)
        .map(|k| {
            let x = (k as f64 / m as f64) / spacing;
            let n = x as usize;
            if n + 1 < count {
                samples[n] + (x - n as f64) * (samples[n + 1] - samples[n])
            } else {
                let slope = samples[count - 1] - samples[count - 2];
                samples[count - 1] + (x - (count - 1) as f64) * slope
            }
        })
        .collect()
}

/// Positive decaying start in the rescaled variables.
fn ramp(modes: usize) -> Vec<f64> {
    let scale = modes as f64;
    (0..modes).map(|n| 0.6 * (1.0 - n as f64 / scale)).collect()
}

/// Build a starting spline for [`solve_continuum`] targeting the strictly
/// positive solution.
///
/// Plain collocation Newton from a raw ramp spline leaves the positive
/// branch's basin at fine meshes, so the guess is staged: solve `F_N = 0`
/// by damped Newton from the ramp at a coarse truncation, continue the
/// solution up a doubling ladder of truncations to `N = M`, then place the
/// rescaled samples on the collocation mesh.
pub fn default_initial_guess(m: usize) -> Result<Spline> {
    if m < 2 {
        return Err(Error::InvalidConfig("mesh must have at least 2 segments".into()));
    }
    let mut truncations = vec![m.min(64)];
    while *truncations.last().unwrap() < m {
        truncations.push((truncations.last().unwrap() * 2).min(m));
    }
    let mut a = newton_f_n(&ramp(truncations[0] + 1), 1e-10, 80)?;
    for &n in &truncations[1..] {
        let start = transfer_to_mesh(&a, n + 1);
        // transfer_to_mesh yields n+2 values at k/(n+1); exactly the F_N unknowns
        a = newton_f_n(&start[..n + 1], 1e-10, 80)?;
    }
    Spline::new(transfer_to_mesh(&a, m))
}

/// `sup_n |a_n − α(n/(N+1))/(N+1)|` for a matching-scale vector `a`.
pub fn correspondence_error(alpha: &Spline, a: &[f64]) -> f64 {
    let scale = a.len() as f64;
    a.iter()
        .enumerate()
        .fold(0.0, |m, (n, &v)| {
            m.max((v - alpha.eval(n as f64 / scale) / scale).abs())
        })
}

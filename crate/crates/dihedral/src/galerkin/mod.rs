//! Finite-difference radial Galerkin solver for the quadratic-cubic
//! Swift–Hohenberg equation.
//!
//! The angular cosine truncation `u(r,θ) = Σ u_{|n|}(r)cos(mnθ)` reduces the
//! planar PDE to `N+1` coupled radial equations
//!
//! ```text
//! G(V;μ)_n = −[(I + 𝒟_n)² + μI]v_n
//!            + γ Σ_{i+j=n} v_{|i|}∘v_{|j|} − Σ_{i+j+ℓ=n} v_{|i|}∘v_{|j|}∘v_{|ℓ|}
//! ```
//!
//! with all convolution indices running over `[−N, N]` and `∘` the
//! elementwise product. `𝒟_n = D₂ + R D₁ − (mn)² R²` is the radial Bessel
//! operator discretised by central differences on a uniform mesh over
//! `[0, r*]`. Localised `D_m` solutions are found by damped Newton iteration
//! and tracked in `μ` by secant (pseudo-arclength) continuation.

pub mod oracle;

use crate::lattice::LatticeConfig;
use crate::linalg::BandedMatrix;
use crate::profile::bessel_j_many;
use crate::{exec, Error, Result};
use serde::Serialize;

/// Uniform radial mesh `r_i = i·δr`, `i = 0..T−1`, with `r_{T−1} = r*`.
///
/// The origin is a mesh node; the `1/r` factors in the radial Laplacian are
/// never evaluated there because the `r = 0` operator rows are replaced by
/// boundary stencils.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialMesh {
    r_star: f64,
    count: usize,
    dr: f64,
}

impl RadialMesh {
    pub fn new(r_star: f64, count: usize) -> Result<Self> {
        if !(r_star.is_finite() && r_star > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "outer radius must be positive, got {r_star}"
            )));
        }
        if count < 3 {
            return Err(Error::InvalidConfig(format!(
                "mesh needs at least 3 points, got {count}"
            )));
        }
        let dr = r_star / (count - 1) as f64;
        Ok(Self { r_star, count, dr })
    }

    /// `T = 3·r*`: the coarser mesh used for continuation runs.
    pub fn continuation_default(r_star: f64) -> Result<Self> {
        Self::new(r_star, (3.0 * r_star).round().max(3.0) as usize)
    }

    /// `T = 10·r*`: the finer mesh used when accuracy matters more than speed.
    pub fn verification_default(r_star: f64) -> Result<Self> {
        Self::new(r_star, (10.0 * r_star).round().max(3.0) as usize)
    }

    pub fn r_star(&self) -> f64 {
        self.r_star
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.dr
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.dr
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.node(i)).collect()
    }
}

/// Mode-major storage of the `N+1` radial amplitude samples: row `n` holds
/// `v_n` on the mesh.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RadialField {
    modes: usize,
    len: usize,
    data: Vec<f64>,
}

impl RadialField {
    pub fn zeros(modes: usize, len: usize) -> Self {
        assert!(modes >= 1 && len >= 1, "field dimensions must be positive");
        Self { modes, len, data: vec![0.0; modes * len] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let modes = rows.len();
        if modes == 0 {
            return Err(Error::InvalidConfig("field needs at least one mode row".into()));
        }
        let len = rows[0].len();
        if len == 0 {
            return Err(Error::InvalidConfig("field rows must be nonempty".into()));
        }
        let mut data = Vec::with_capacity(modes * len);
        for row in &rows {
            if row.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { modes, len, data })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.data[n * self.len..(n + 1) * self.len]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [f64] {
        &mut self.data[n * self.len..(n + 1) * self.len]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L²` norm `√(δr Σ v²)` over all modes.
    pub fn l2_norm(&self, spacing: f64) -> f64 {
        (spacing * self.data.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    fn to_node_major(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.data.len()];
        for n in 0..self.modes {
            let row = self.row(n);
            for (j, &v) in row.iter().enumerate() {
                out[j * self.modes + n] = v;
            }
        }
        out
    }

    fn from_node_major(x: &[f64], modes: usize, len: usize) -> Self {
        let mut field = Self::zeros(modes, len);
        for n in 0..modes {
            let row = field.row_mut(n);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = x[j * modes + n];
            }
        }
        field
    }

    fn add_node_major_scaled(&mut self, delta: &[f64], scale: f64) {
        let modes = self.modes;
        for n in 0..modes {
            let len = self.len;
            let row = &mut self.data[n * len..(n + 1) * len];
            for (j, slot) in row.iter_mut().enumerate() {
                *slot += scale * delta[j * modes + n];
            }
        }
    }
}

/// Swift–Hohenberg instance parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SheParams {
    pub mu: f64,
    pub gamma: f64,
}

/// Tridiagonal finite-difference representation of `𝒟_n`.
///
/// `sub[i]`, `diag[i]`, `sup[i]` are the entries `(i, i−1)`, `(i, i)`,
/// `(i, i+1)`; `sub[0]` and `sup[T−1]` are identically zero.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl ModeOperator {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let t = self.diag.len();
        assert_eq!(v.len(), t);
        (0..t)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.sub[i] * v[i - 1];
                }
                if i + 1 < t {
                    s += self.sup[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Dense copy for small-problem reference computations.
    pub fn dense(&self) -> crate::linalg::Matrix {
        let t = self.diag.len();
        let mut m = crate::linalg::Matrix::zeros(t, t);
        for i in 0..t {
            if i > 0 {
                m.row_mut(i)[i - 1] = self.sub[i];
            }
            m.row_mut(i)[i] = self.diag[i];
            if i + 1 < t {
                m.row_mut(i)[i + 1] = self.sup[i];
            }
        }
        m
    }
}

/// Builds the `N+1` discrete radial operators `𝒟_n`.
///
/// Interior rows are the central-difference Bessel operator
/// `v″ + v′/r − (mn)²v/r²`. Boundary rows encode the regularity and Neumann
/// conditions:
///
/// * `r = 0`, `n = 0`: symmetric ghost point and L'Hôpital give
///   `Δ₀v ≈ (4v₁ − 4v₀)/δr²`;
/// * `r = 0`, `n ≥ 1`: the operator row is zero, so the residual at the
///   origin reduces to `−(1+μ)v_n(0)` and Newton pins `v_n(0) = 0`;
/// * `r = r*`: Neumann ghost `v_{T} = v_{T−2}` with the curvature term kept.
pub fn build_operators(mesh: &RadialMesh, cfg: &LatticeConfig) -> Vec<ModeOperator> {
    let t = mesh.len();
    let dr = mesh.spacing();
    let inv_dr2 = 1.0 / (dr * dr);
    (0..cfg.modes())
        .map(|n| {
            let order = f64::from(cfg.m()) * n as f64;
            let order2 = order * order;
            let mut sub = vec![0.0; t];
            let mut diag = vec![0.0; t];
            let mut sup = vec![0.0; t];
            for i in 1..t - 1 {
                let r = mesh.node(i);
                sub[i] = inv_dr2 - 1.0 / (2.0 * dr * r);
                diag[i] = -2.0 * inv_dr2 - order2 / (r * r);
                sup[i] = inv_dr2 + 1.0 / (2.0 * dr * r);
            }
            if n == 0 {
                diag[0] = -4.0 * inv_dr2;
                sup[0] = 4.0 * inv_dr2;
            }
            let r_star = mesh.r_star();
            sub[t - 1] = 2.0 * inv_dr2;
            diag[t - 1] = -2.0 * inv_dr2 - order2 / (r_star * r_star);
            ModeOperator { sub, diag, sup }
        })
        .collect()
}

/// `[(I + 𝒟)² + μI] v` via two tridiagonal applications.
fn linear_apply(op: &ModeOperator, mu: f64, v: &[f64]) -> Vec<f64> {
    let mut w = op.apply(v);
    for (wi, vi) in w.iter_mut().zip(v) {
        *wi += vi;
    }
    let mut z = op.apply(&w);
    for i in 0..z.len() {
        z[i] += w[i] + mu * v[i];
    }
    z
}

/// Elementwise pair convolutions `q_s = Σ_{i+j=s, |i|,|j|≤N} v_{|i|}∘v_{|j|}`
/// for `s = 0..2N`; both the quadratic term (`s ≤ N`) and the cubic term
/// (through `cubic_n = Σ_ℓ v_{|ℓ|}∘q_{|n−ℓ|}`) are assembled from this table.
fn pair_products(field: &RadialField) -> Vec<Vec<f64>> {
    let nmax = (field.modes() - 1) as i64;
    let t = field.len();
    exec::map_indexed((2 * nmax + 1) as usize, |s| {
        let s = s as i64;
        let mut q = vec![0.0; t];
        for i in (s - nmax)..=nmax {
            let vi = field.row(i.unsigned_abs() as usize);
            let vj = field.row((s - i).unsigned_abs() as usize);
            for (qk, (a, b)) in q.iter_mut().zip(vi.iter().zip(vj)) {
                *qk += a * b;
            }
        }
        q
    })
}

/// Quadratic convolution `Σ_{i+j=n} v_{|i|}∘v_{|j|}` for each output mode.
pub fn quadratic_sum(field: &RadialField) -> RadialField {
    let q = pair_products(field);
    let rows = q.into_iter().take(field.modes()).collect();
    RadialField::from_rows(rows).expect("pair product rows are rectangular")
}

/// Cubic convolution `Σ_{i+j+ℓ=n} v_{|i|}∘v_{|j|}∘v_{|ℓ|}` for each output mode.
pub fn cubic_sum(field: &RadialField) -> RadialField {
    let nmax = (field.modes() - 1) as i64;
    let t = field.len();
    let q = pair_products(field);
    let rows = exec::map_indexed(field.modes(), |n| {
        let mut out = vec![0.0; t];
        for l in -nmax..=nmax {
            let vl = field.row(l.unsigned_abs() as usize);
            let qs = &q[(n as i64 - l).unsigned_abs() as usize];
            for (ok, (a, b)) in out.iter_mut().zip(vl.iter().zip(qs)) {
                *ok += a * b;
            }
        }
        out
    });
    RadialField::from_rows(rows).expect("cubic rows are rectangular")
}

fn check_shapes(mesh: &RadialMesh, cfg: &LatticeConfig, field: &RadialField) -> Result<()> {
    if field.modes() != cfg.modes() {
        return Err(Error::DimensionMismatch { expected: cfg.modes(), found: field.modes() });
    }
    if field.len() != mesh.len() {
        return Err(Error::DimensionMismatch { expected: mesh.len(), found: field.len() });
    }
    Ok(())
}

/// Galerkin residual `G(V;μ)` of the quadratic-cubic Swift–Hohenberg system.
pub fn she_residual(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    params: &SheParams,
    field: &RadialField,
) -> Result<RadialField> {
    check_shapes(mesh, cfg, field)?;
    let ops = build_operators(mesh, cfg);
    Ok(residual_with(&ops, params, field))
}

fn residual_with(ops: &[ModeOperator], params: &SheParams, field: &RadialField) -> RadialField {
    let t = field.len();
    let nmax = (field.modes() - 1) as i64;
    let q = pair_products(field);
    let rows = exec::map_indexed(field.modes(), |n| {
        let mut out = linear_apply(&ops[n], params.mu, field.row(n));
        for x in &mut out {
            *x = -*x;
        }
        let quad = &q[n];
        let mut cubic = vec![0.0; t];
        for l in -nmax..=nmax {
            let vl = field.row(l.unsigned_abs() as usize);
            let qs = &q[(n as i64 - l).unsigned_abs() as usize];
            for (ck, (a, b)) in cubic.iter_mut().zip(vl.iter().zip(qs)) {
                *ck += a * b;
            }
        }
        for k in 0..t {
            out[k] += params.gamma * quad[k] - cubic[k];
        }
        out
    });
    RadialField::from_rows(rows).expect("residual rows are rectangular")
}

/// Pentadiagonal bands of `(I + 𝒟)² + μI`, offsets −2..2.
fn squared_linear_bands(op: &ModeOperator, mu: f64) -> [Vec<f64>; 5] {
    let t = op.diag.len();
    let sub = &op.sub;
    let sup = &op.sup;
    let bd: Vec<f64> = op.diag.iter().map(|d| d + 1.0).collect();
    let mut m2 = vec![0.0; t];
    let mut m1 = vec![0.0; t];
    let mut m0 = vec![0.0; t];
    let mut p1 = vec![0.0; t];
    let mut p2 = vec![0.0; t];
    for i in 0..t {
        if i >= 2 {
            m2[i] = sub[i] * sub[i - 1];
        }
        if i >= 1 {
            m1[i] = sub[i] * (bd[i - 1] + bd[i]);
        }
        let mut s = bd[i] * bd[i] + mu;
        if i >= 1 {
            s += sub[i] * sup[i - 1];
        }
        if i + 1 < t {
            s += sup[i] * sub[i + 1];
            p1[i] = sup[i] * (bd[i] + bd[i + 1]);
        }
        m0[i] = s;
        if i + 2 < t {
            p2[i] = sup[i] * sup[i + 1];
        }
    }
    [m2, m1, m0, p1, p2]
}

/// Analytic Jacobian of [`she_residual`] in node-major banded form.
///
/// Unknown `(node j, mode n)` maps to row `j·(N+1) + n`; the linear part
/// reaches two nodes each way within a mode and the convolution terms couple
/// all modes at one node, so the half-bandwidth is `3(N+1) − 1`.
pub fn she_jacobian(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    params: &SheParams,
    field: &RadialField,
) -> Result<BandedMatrix> {
    check_shapes(mesh, cfg, field)?;
    let ops = build_operators(mesh, cfg);
    Ok(jacobian_with(&ops, params, field))
}

fn jacobian_with(ops: &[ModeOperator], params: &SheParams, field: &RadialField) -> BandedMatrix {
    let modes = field.modes();
    let t = field.len();
    let hw = 3 * modes - 1;
    let mut jac = BandedMatrix::zeros(modes * t, hw, hw);
    let idx = |node: usize, n: usize| node * modes + n;

    for (n, op) in ops.iter().enumerate() {
        let bands = squared_linear_bands(op, params.mu);
        for (slot, band) in bands.iter().enumerate() {
            let off = slot as isize - 2;
            for (i, &v) in band.iter().enumerate() {
                let j = i as isize + off;
                if v != 0.0 && j >= 0 && j < t as isize {
                    jac.add(idx(i, n), idx(j as usize, n), -v);
                }
            }
        }
    }

    // Differentiating the convolutions with respect to v_k picks up the
    // index set S(k) = {k, −k} (just {0} when k = 0): the quadratic term
    // contributes 2γ Σ_{i∈S(k)} v_{|n−i|} and the cubic term
    // 3 Σ_{i∈S(k)} q_{|n−i|}, both as diagonal blocks at (n, k).
    let q = pair_products(field);
    let nmax = modes - 1;
    let mut w = vec![0.0; t];
    for n in 0..modes {
        for k in 0..modes {
            w.iter_mut().for_each(|x| *x = 0.0);
            let candidates: &[i64] = if k == 0 { &[0] } else { &[k as i64, -(k as i64)] };
            for &i in candidates {
                let d = (n as i64 - i).unsigned_abs() as usize;
                if d <= nmax {
                    let row = field.row(d);
                    for (wj, vj) in w.iter_mut().zip(row) {
                        *wj += 2.0 * params.gamma * vj;
                    }
                }
                let qd = &q[d];
                for (wj, qj) in w.iter_mut().zip(qd) {
                    *wj -= 3.0 * qj;
                }
            }
            for (j, &wj) in w.iter().enumerate() {
                if wj != 0.0 {
                    jac.add(idx(j, n), idx(j, k), wj);
                }
            }
        }
    }
    jac
}

/// Damped Newton iteration on `G(V;μ) = 0` from the supplied start field.
pub fn newton_solve(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    params: &SheParams,
    start: &RadialField,
    tol: f64,
    max_iter: usize,
) -> Result<RadialField> {
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
    }
    check_shapes(mesh, cfg, start)?;
    let ops = build_operators(mesh, cfg);
    newton_with(&ops, params, start, tol, max_iter)
}

fn newton_with(
    ops: &[ModeOperator],
    params: &SheParams,
    start: &RadialField,
    tol: f64,
    max_iter: usize,
) -> Result<RadialField> {
    let mut field = start.clone();
    let mut residual = residual_with(ops, params, &field);
    let mut norm = residual.max_abs();
    for iteration in 0..max_iter {
        if norm <= tol {
            return Ok(field);
        }
        let lu = jacobian_with(ops, params, &field).factor()?;
        let mut rhs = residual.to_node_major();
        for x in &mut rhs {
            *x = -*x;
        }
        let delta = lu.solve(&rhs);
        let mut lambda = 1.0;
        loop {
            let mut trial = field.clone();
            trial.add_node_major_scaled(&delta, lambda);
            let trial_residual = residual_with(ops, params, &trial);
            let trial_norm = trial_residual.max_abs();
            if trial_norm < norm || trial_norm <= tol {
                field = trial;
                residual = trial_residual;
                norm = trial_norm;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                return Err(Error::NoConvergence { iterations: iteration, residual: norm });
            }
        }
    }
    if norm <= tol {
        Ok(field)
    } else {
        Err(Error::NoConvergence { iterations: max_iter, residual: norm })
    }
}

/// Numerical amplitude `u*_n = γ/√(3μ) · max_j|v_n(r_j)| / max_j|J_{mn}(r_j)|`.
pub fn amplitude_diagnostic(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    params: &SheParams,
    field: &RadialField,
) -> Result<Vec<f64>> {
    if !(params.mu > 0.0) {
        return Err(Error::OutOfDomain {
            name: "mu",
            value: params.mu,
            domain: "(0, ∞)",
        });
    }
    check_shapes(mesh, cfg, field)?;
    let m = cfg.m() as usize;
    let top = m * (cfg.modes() - 1);
    let bessel_rows = exec::map_indexed(mesh.len(), |j| {
        bessel_j_many(top, mesh.node(j)).expect("mesh radii are non-negative")
    });
    let mut bessel_max = vec![0.0_f64; top + 1];
    for row in &bessel_rows {
        for (bm, &v) in bessel_max.iter_mut().zip(row) {
            *bm = bm.max(v.abs());
        }
    }
    let scale = params.gamma / (3.0 * params.mu).sqrt();
    Ok((0..cfg.modes())
        .map(|n| {
            let peak = field.row(n).iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            scale * peak / bessel_max[m * n]
        })
        .collect())
}

/// One recorded continuation state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchPoint {
    pub step: usize,
    pub mu: f64,
    /// Discrete `L²` norm of the field.
    pub norm: f64,
    /// Residual sup-norm at acceptance.
    pub residual: f64,
}

/// Accepted states of a secant continuation run. The last two fields are
/// kept so a run can be restarted or reversed from where it stopped.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuationBranch {
    pub points: Vec<BranchPoint>,
    pub prev_mu: f64,
    pub prev_field: RadialField,
    pub final_mu: f64,
    pub final_field: RadialField,
}

impl ContinuationBranch {
    /// Number of sign changes of `Δμ` along the branch (fold crossings).
    pub fn fold_count(&self) -> usize {
        let mut folds = 0;
        let mut last_sign = 0i8;
        for pair in self.points.windows(2) {
            let d = pair[1].mu - pair[0].mu;
            if d == 0.0 {
                continue;
            }
            let sign = if d > 0.0 { 1 } else { -1 };
            if last_sign != 0 && sign != last_sign {
                folds += 1;
            }
            last_sign = sign;
        }
        folds
    }
}

const CORRECTOR_TOL: f64 = 1e-9;
const CORRECTOR_ITERS: usize = 12;

struct SecantState {
    field: RadialField,
    mu: f64,
}

fn weighted_dot(a: &SecantState, b: &SecantState, dr: f64) -> f64 {
    let fields: f64 = a.field.data().iter().zip(b.field.data()).map(|(x, y)| x * y).sum();
    dr * fields + a.mu * b.mu
}

fn weighted_dist(a: &SecantState, b: &SecantState, dr: f64) -> f64 {
    let fields: f64 = a
        .field
        .data()
        .iter()
        .zip(b.field.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    (dr * fields + (a.mu - b.mu) * (a.mu - b.mu)).sqrt()
}

/// Secant continuation of `G(V;μ) = 0` in `μ`.
///
/// `start` must already solve the system at `params0.mu` (it is polished
/// once and rejected with [`Error::InitialPointNotConverged`] otherwise).
/// The second branch point comes from `second_hint` — a `(μ, field)` pair
/// near the branch — or, when absent, from a natural-parameter step of size
/// `step` (whose sign selects the initial direction). After that the
/// predictor extrapolates the secant of the last two accepted states and the
/// corrector is Newton on the bordered system with the arclength constraint,
/// solved by banded elimination plus a rank-one Schur complement. The
/// arclength step halves on corrector failure, grows by 1.2 after three
/// consecutive successes, and is clamped to `[|step|/64, 4|step|]`.
pub fn secant_continue(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    params0: &SheParams,
    start: &RadialField,
    second_hint: Option<(f64, &RadialField)>,
    n_steps: usize,
    step: f64,
) -> Result<ContinuationBranch> {
    if !(step.is_finite() && step != 0.0) {
        return Err(Error::InvalidConfig(format!("step must be nonzero, got {step}")));
    }
    check_shapes(mesh, cfg, start)?;
    let ops = build_operators(mesh, cfg);
    let dr = mesh.spacing();
    let gamma = params0.gamma;

    // A handful of iterations polishes anything already near the branch;
    // genuinely wrong starts fail here instead of wandering to an unrelated
    // solution.
    let polish = |field: &RadialField, mu: f64| -> Result<RadialField> {
        newton_with(&ops, &SheParams { mu, gamma }, field, CORRECTOR_TOL, 6)
    };

    let first = polish(start, params0.mu).map_err(|e| match e {
        Error::NoConvergence { residual, .. } => Error::InitialPointNotConverged { residual },
        other => other,
    })?;
    let mut points = Vec::with_capacity(n_steps + 2);
    let record = |points: &mut Vec<BranchPoint>, state: &SecantState, residual: f64| {
        points.push(BranchPoint {
            step: points.len(),
            mu: state.mu,
            norm: state.field.l2_norm(dr),
            residual,
        });
    };
    let mut prev = SecantState { field: first, mu: params0.mu };
    record(&mut points, &prev, residual_with(&ops, params0, &prev.field).max_abs());

    let mut curr = match second_hint {
        Some((mu1, hint)) => {
            let field = polish(hint, mu1).map_err(|e| match e {
                Error::NoConvergence { residual, .. } => Error::InitialPointNotConverged { residual },
                other => other,
            })?;
            SecantState { field, mu: mu1 }
        }
        None => {
            let h_min = step.abs() / 64.0;
            let mut h = step;
            loop {
                match polish(&prev.field, params0.mu + h) {
                    Ok(field) => break SecantState { field, mu: params0.mu + h },
                    Err(Error::NoConvergence { .. }) | Err(Error::SingularJacobian { .. }) => {
                        h *= 0.5;
                        if h.abs() < h_min {
                            return Err(Error::StepUnderflow { step: h.abs(), min: h_min });
                        }
                    }
                    Err(other) => return Err(other),
                }
            }
        }
    };
    {
        let params = SheParams { mu: curr.mu, gamma };
        let res = residual_with(&ops, &params, &curr.field).max_abs();
        record(&mut points, &curr, res);
    }

    let h_min = step.abs() / 64.0;
    let h_max = step.abs() * 4.0;
    let mut h = weighted_dist(&curr, &prev, dr).clamp(h_min, h_max);
    let mut successes = 0usize;

    for _ in 0..n_steps {
        loop {
            match secant_step(&ops, gamma, &prev, &curr, h, dr) {
                Some((state, residual)) => {
                    record(&mut points, &state, residual);
                    prev = std::mem::replace(&mut curr, state);
                    successes += 1;
                    if successes >= 3 {
                        successes = 0;
                        h = (h * 1.2).clamp(h_min, h_max);
                    }
                    break;
                }
                None => {
                    successes = 0;
                    h *= 0.5;
                    if h < h_min {
                        return Err(Error::StepUnderflow { step: h, min: h_min });
                    }
                }
            }
        }
    }

    Ok(ContinuationBranch {
        points,
        prev_mu: prev.mu,
        prev_field: prev.field,
        final_mu: curr.mu,
        final_field: curr.field,
    })
}

/// One predictor-corrector step; `None` signals the caller to halve the step.
fn secant_step(
    ops: &[ModeOperator],
    gamma: f64,
    prev: &SecantState,
    curr: &SecantState,
    h: f64,
    dr: f64,
) -> Option<(SecantState, f64)> {
    let modes = curr.field.modes();
    let t = curr.field.len();
    let dist = weighted_dist(curr, prev, dr);
    if !(dist > 0.0) {
        return None;
    }
    let inv = 1.0 / dist;
    let mut dir_field = curr.field.clone();
    for (d, p) in dir_field
        .data
        .iter_mut()
        .zip(prev.field.data())
    {
        *d = (*d - p) * inv;
    }
    let dir = SecantState { field: dir_field, mu: (curr.mu - prev.mu) * inv };

    let mut state = SecantState { field: curr.field.clone(), mu: curr.mu };
    for (x, d) in state.field.data.iter_mut().zip(dir.field.data()) {
        *x += h * d;
    }
    state.mu += h * dir.mu;

    for _ in 0..CORRECTOR_ITERS {
        let params = SheParams { mu: state.mu, gamma };
        let residual = residual_with(ops, &params, &state.field);
        let res_norm = residual.max_abs();
        let diff = SecantState {
            field: {
                let mut d = state.field.clone();
                for (x, c) in d.data.iter_mut().zip(curr.field.data()) {
                    *x -= c;
                }
                d
            },
            mu: state.mu - curr.mu,
        };
        let constraint = weighted_dot(&diff, &dir, dr) - h;
        if res_norm <= CORRECTOR_TOL && constraint.abs() <= CORRECTOR_TOL * (1.0 + h) {
            return Some((state, res_norm));
        }
        let lu = match jacobian_with(ops, &params, &state.field).factor() {
            Ok(lu) => lu,
            Err(_) => return None,
        };
        // G_μ = −V, so the bordered system reduces to two banded solves:
        // δV = a + b·δμ with a = −J⁻¹G and b = J⁻¹V.
        let mut rhs = residual.to_node_major();
        for x in &mut rhs {
            *x = -*x;
        }
        let a = lu.solve(&rhs);
        let b = lu.solve(&state.field.to_node_major());
        let a_field = RadialField::from_node_major(&a, modes, t);
        let b_field = RadialField::from_node_major(&b, modes, t);
        let dir_dot = |f: &RadialField| -> f64 {
            dr * f.data().iter().zip(dir.field.data()).map(|(x, y)| x * y).sum::<f64>()
        };
        let denom = dir_dot(&b_field) + dir.mu;
        if denom.abs() < 1e-14 {
            return None;
        }
        let dmu = -(constraint + dir_dot(&a_field)) / denom;
        state.field.add_node_major_scaled(&a, 1.0);
        state.field.add_node_major_scaled(&b, dmu);
        state.mu += dmu;
        if !state.mu.is_finite() || !state.field.max_abs().is_finite() {
            return None;
        }
    }
    None
}

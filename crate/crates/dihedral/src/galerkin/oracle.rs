//! Dense reference assembly of the Galerkin residual.
//!
//! The production residual evaluates the quadratic and cubic terms as
//! direct convolution sums. This module rebuilds the same residual through
//! an independent route — the block-Toeplitz matrices `C₁`, `C₂`, the block
//! exchange matrix, and the `K₂`/`K₃` products — with the linear part formed
//! as an explicit dense matrix square. It exists to validate the fast path
//! and is far too slow for production mesh sizes.

use super::{build_operators, RadialField, RadialMesh, SheParams};
use crate::lattice::LatticeConfig;
use crate::linalg::Matrix;
use crate::{Error, Result};

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.ncols(), b.nrows());
    let mut out = Matrix::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        let arow = a.row(i);
        let orow = out.row_mut(i);
        for (k, &aik) in arow.iter().enumerate() {
            if aik == 0.0 {
                continue;
            }
            for (j, &bkj) in b.row(k).iter().enumerate() {
                orow[j] += aik * bkj;
            }
        }
    }
    out
}

fn transpose(a: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.ncols(), a.nrows());
    for i in 0..a.nrows() {
        for (j, &v) in a.row(i).iter().enumerate() {
            out.row_mut(j)[i] = v;
        }
    }
    out
}

fn add_scaled(a: &mut Matrix, b: &Matrix, s: f64) {
    assert_eq!(a.nrows(), b.nrows());
    for i in 0..a.nrows() {
        for (x, &y) in a.row_mut(i).iter_mut().zip(b.row(i)) {
            *x += s * y;
        }
    }
}

/// Writes `diag(v)` into block `(bi, bj)` of a block matrix with `t × t`
/// blocks.
fn place_diag_block(m: &mut Matrix, bi: usize, bj: usize, v: &[f64], scale: f64) {
    let t = v.len();
    for (k, &vk) in v.iter().enumerate() {
        m.row_mut(bi * t + k)[bj * t + k] += scale * vk;
    }
}

struct Blocks {
    modes: usize,
    t: usize,
}

impl Blocks {
    fn zeros(&self) -> Matrix {
        Matrix::zeros(self.modes * self.t, self.modes * self.t)
    }

    /// Lower block Toeplitz: block `(i, j) = diag(v_{i−j})` for `i ≥ j`.
    fn c1(&self, field: &RadialField) -> Matrix {
        let mut m = self.zeros();
        for i in 0..self.modes {
            for j in 0..=i {
                place_diag_block(&mut m, i, j, field.row(i - j), 1.0);
            }
        }
        m
    }

    /// Upper block Toeplitz: block `(i, j) = diag(v_{N−j+i})` for `j ≥ i`.
    fn c2(&self, field: &RadialField) -> Matrix {
        let n = self.modes - 1;
        let mut m = self.zeros();
        for i in 0..self.modes {
            for j in i..self.modes {
                place_diag_block(&mut m, i, j, field.row(n - j + i), 1.0);
            }
        }
        m
    }

    /// Block exchange: block `(i, N−i) = I`.
    fn exchange(&self) -> Matrix {
        let mut m = self.zeros();
        let ones = vec![1.0; self.t];
        for i in 0..self.modes {
            place_diag_block(&mut m, i, self.modes - 1 - i, &ones, 1.0);
        }
        m
    }

    /// `I_{N+1} ⊗ diag(w)`.
    fn repeat_diag(&self, w: &[f64]) -> Matrix {
        let mut m = self.zeros();
        for i in 0..self.modes {
            place_diag_block(&mut m, i, i, w, 1.0);
        }
        m
    }

    /// `𝒥₁ ⊗ diag(w)`: block `(i, N−i) = diag(w)`.
    fn antidiag_repeat(&self, w: &[f64]) -> Matrix {
        let mut m = self.zeros();
        for i in 0..self.modes {
            place_diag_block(&mut m, i, self.modes - 1 - i, w, 1.0);
        }
        m
    }
}

fn flatten(field: &RadialField) -> Vec<f64> {
    field.data().to_vec()
}

fn unflatten(x: &[f64], modes: usize, t: usize) -> Vec<Vec<f64>> {
    (0..modes).map(|n| x[n * t..(n + 1) * t].to_vec()).collect()
}

/// `Σ_{i+j=n} v∘v` for every mode via `K₂ = [2C₂𝒥 + C₁ − 2 I⊗D(v₀)]V`.
pub fn quadratic_via_blocks(field: &RadialField) -> Vec<Vec<f64>> {
    let blocks = Blocks { modes: field.modes(), t: field.len() };
    let mut k2 = matmul(&blocks.c2(field), &blocks.exchange());
    for i in 0..k2.nrows() {
        for x in k2.row_mut(i) {
            *x *= 2.0;
        }
    }
    add_scaled(&mut k2, &blocks.c1(field), 1.0);
    add_scaled(&mut k2, &blocks.repeat_diag(field.row(0)), -2.0);
    unflatten(&k2.mul_vec(&flatten(field)), field.modes(), field.len())
}

/// `Σ_{i+j+ℓ=n} v∘v∘v` for every mode via the `K₃` block identity.
pub fn cubic_via_blocks(field: &RadialField) -> Vec<Vec<f64>> {
    let modes = field.modes();
    let t = field.len();
    let blocks = Blocks { modes, t };
    let c1 = blocks.c1(field);
    let c2 = blocks.c2(field);
    let c2j = matmul(&c2, &blocks.exchange());

    let mut k2_mat = c2j.clone();
    for i in 0..k2_mat.nrows() {
        for x in k2_mat.row_mut(i) {
            *x *= 2.0;
        }
    }
    add_scaled(&mut k2_mat, &c1, 1.0);
    add_scaled(&mut k2_mat, &blocks.repeat_diag(field.row(0)), -2.0);
    let k2 = k2_mat.mul_vec(&flatten(field));
    let k2_rows = unflatten(&k2, modes, t);

    let mut first = c2j;
    add_scaled(&mut first, &c1, 1.0);
    add_scaled(&mut first, &transpose(&c1), 1.0);
    add_scaled(&mut first, &blocks.repeat_diag(field.row(0)), -1.0);

    let mut second = matmul(&transpose(&c2), &c2);
    add_scaled(&mut second, &blocks.antidiag_repeat(&k2_rows[modes - 1]), -1.0);
    add_scaled(&mut second, &blocks.repeat_diag(&k2_rows[0]), -1.0);

    let from_k2 = first.mul_vec(&k2);
    let mut out = second.mul_vec(&flatten(field));
    for (o, p) in out.iter_mut().zip(&from_k2) {
        *o += p;
    }
    unflatten(&out, modes, t)
}

/// Residual with the nonlinearity assembled through the block route.
///
/// The linear term reuses the production tridiagonal application — only the
/// convolution sums are computed independently here, so a comparison against
/// [`super::she_residual`] isolates exactly the quadratic and cubic paths.
pub fn residual_via_blocks(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    params: &SheParams,
    field: &RadialField,
) -> Result<RadialField> {
    if field.modes() != cfg.modes() {
        return Err(Error::DimensionMismatch { expected: cfg.modes(), found: field.modes() });
    }
    if field.len() != mesh.len() {
        return Err(Error::DimensionMismatch { expected: mesh.len(), found: field.len() });
    }
    let t = mesh.len();
    let ops = build_operators(mesh, cfg);
    let quad = quadratic_via_blocks(field);
    let cubic = cubic_via_blocks(field);
    let mut rows = Vec::with_capacity(field.modes());
    for (n, op) in ops.iter().enumerate() {
        let lin = super::linear_apply(op, params.mu, field.row(n));
        let row: Vec<f64> = (0..t)
            .map(|j| -lin[j] + params.gamma * quad[n][j] - cubic[n][j])
            .collect();
        rows.push(row);
    }
    RadialField::from_rows(rows)
}

/// Dense `(I + 𝒟_n)² + μI` per mode, for validating the factored
/// tridiagonal application and the pentadiagonal Jacobian bands.
pub fn dense_linear_operators(
    mesh: &RadialMesh,
    cfg: &LatticeConfig,
    mu: f64,
) -> Vec<Matrix> {
    let t = mesh.len();
    build_operators(mesh, cfg)
        .iter()
        .map(|op| {
            let mut b = Matrix::identity(t);
            add_scaled(&mut b, &op.dense(), 1.0);
            let mut lin = matmul(&b, &b);
            for i in 0..t {
                lin.row_mut(i)[i] += mu;
            }
            lin
        })
        .collect()
}

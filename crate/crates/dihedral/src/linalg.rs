//! Small dense and banded linear-algebra kernels.
//!
//! The crate needs exactly three factorizations: a dense LU for the
//! moderate square systems of the matching and collocation Newton solves
//! (up to ~1000²), a banded LU for the Galerkin Jacobian (band-block
//! structure, order up to ~25 000 with bandwidth a few dozen), and an
//! interval LU that lives in [`crate::verify`]. They are hand-rolled so the
//! dense elimination can share its row loop with the rayon feature flag and
//! the interval variant can reuse the same pivoting scheme.

use crate::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = 1.0;
        }
        a
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Factor and solve `A x = b` for a single right-hand side.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let lu = LuFactors::new(self.clone())?;
        Ok(lu.solve(b))
    }

    /// Explicit inverse via LU; used for the approximate-inverse matrix of
    /// the verification pipeline where the full inverse is genuinely needed.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let lu = LuFactors::new(self.clone())?;
        let cols = crate::exec::map_indexed(n, |j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            lu.solve(&e)
        });
        let mut inv = Matrix::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
    /// Sign of the permutation, for determinants.
    perm_sign: f64,
}

impl LuFactors {
    pub fn new(mut a: Matrix) -> Result<Self> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU requires a square matrix");
        let mut perm: Vec<usize> = (0..n).collect();
        let mut perm_sign = 1.0;
        let scale = a.max_abs().max(1.0);
        for k in 0..n {
            let (piv, piv_val) = (k..n)
                .map(|i| (i, a[(i, k)].abs()))
                .fold((k, -1.0), |best, cand| if cand.1 > best.1 { cand } else { best });
            if piv_val <= f64::EPSILON * scale {
                return Err(Error::SingularJacobian { det: 0.0, iteration: k });
            }
            if piv != k {
                perm.swap(k, piv);
                perm_sign = -perm_sign;
                let (lo, hi) = a.data.split_at_mut(piv * n);
                lo[k * n..k * n + n].swap_with_slice(&mut hi[..n]);
            }
            let inv_pivot = 1.0 / a[(k, k)];
            let pivot_row = a.row(k)[k + 1..].to_vec();
            let update = |row: &mut [f64]| {
                let m = row[k] * inv_pivot;
                row[k] = m;
                for (x, p) in row[k + 1..].iter_mut().zip(&pivot_row) {
                    *x -= m * p;
                }
            };
            let trailing = &mut a.data[(k + 1) * n..];
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                // Rows update independently; worth spawning only for the
                // large collocation systems.
                if n - k > 256 {
                    trailing.par_chunks_mut(n).for_each(update);
                } else {
                    trailing.chunks_mut(n).for_each(update);
                }
            }
            #[cfg(not(feature = "parallel"))]
            trailing.chunks_mut(n).for_each(update);
        }
        Ok(Self { lu: a, perm, perm_sign })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    pub fn det(&self) -> f64 {
        let n = self.lu.nrows();
        (0..n).fold(self.perm_sign, |d, i| d * self.lu[(i, i)])
    }
}

/// Determinant that tolerates singular matrices (returns 0 on failed
/// elimination rather than an error).
pub fn det(a: &Matrix) -> f64 {
    match LuFactors::new(a.clone()) {
        Ok(lu) => lu.det(),
        Err(_) => 0.0,
    }
}

/// Square banded matrix in LAPACK-style band storage with room for
/// partial-pivoting fill-in.
///
/// Entry `(i, j)` is stored when `|i − j|` is within the band; the
/// factorization may fill up to `kl` extra superdiagonals.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// `(2·kl + ku + 1)` rows of length `n`; entry `(i, j)` lives at band
    /// row `kl + ku + i − j`.
    ab: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, ab: vec![0.0; (2 * kl + ku + 1) * n] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = (i as isize, j as isize);
        let band_row = self.kl as isize + self.ku as isize + i - j;
        if i < 0 || j < 0 || i >= self.n as isize || j >= self.n as isize {
            return None;
        }
        // Stored band excludes the pivoting fill rows above ku.
        if i - j > self.kl as isize || j - i > self.ku as isize {
            return None;
        }
        Some(band_row as usize * self.n + j as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.ab[s])
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        let s = self.slot(i, j).unwrap_or_else(|| {
            panic!("entry ({i}, {j}) outside band kl={} ku={}", self.kl, self.ku)
        });
        self.ab[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j).unwrap_or_else(|| {
            panic!("entry ({i}, {j}) outside band kl={} ku={}", self.kl, self.ku)
        });
        self.ab[s] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factor in place with partial pivoting (row interchanges stay within
    /// `kl` of the diagonal, so fill is bounded by `kl + ku`).
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let width = 2 * kl + ku + 1;
        let mut pivots = vec![0usize; n];
        // During elimination entries live in an expanded band of ku + kl
        // superdiagonals; re-index raw storage directly for speed.
        let at = |ab: &Vec<f64>, i: usize, j: usize| ab[(kl + ku + i - j) * n + j];
        let scale = self.ab.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let (piv, piv_val) = (k..=last_row)
                .map(|i| (i, at(&self.ab, i, k).abs()))
                .fold((k, -1.0), |best, cand| if cand.1 > best.1 { cand } else { best });
            if piv_val <= f64::EPSILON * scale {
                return Err(Error::SingularJacobian { det: 0.0, iteration: k });
            }
            pivots[k] = piv;
            let last_col = (k + kl + ku).min(n - 1);
            if piv != k {
                for j in k..=last_col {
                    let a = (kl + ku + k - j) * n + j;
                    let b = (kl + ku + piv - j) * n + j;
                    debug_assert!(b / n < width);
                    self.ab.swap(a, b);
                }
            }
            let inv_pivot = 1.0 / at(&self.ab, k, k);
            for i in k + 1..=last_row {
                let m = at(&self.ab, i, k) * inv_pivot;
                self.ab[(kl + ku + i - k) * n + k] = m;
                if m != 0.0 {
                    for j in k + 1..=last_col {
                        let u = at(&self.ab, k, j);
                        self.ab[(kl + ku + i - j) * n + j] -= m * u;
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku, ab: self.ab, pivots })
    }
}

/// Factored banded matrix.
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        assert_eq!(x.len(), n);
        let (kl, ku) = (self.kl, self.ku);
        let at = |i: usize, j: usize| self.ab[(kl + ku + i - j) * n + j];
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let last_row = (k + kl).min(n - 1);
            for i in k + 1..=last_row {
                x[i] -= at(i, k) * x[k];
            }
        }
        for i in (0..n).rev() {
            let last_col = (i + kl + ku).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=last_col {
                s -= at(i, j) * x[j];
            }
            x[i] = s / at(i, i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = rng.gen_range(-1.0..1.0);
            }
            a[(i, i)] += 3.0; // keep comfortably nonsingular
        }
        a
    }

    #[test]
    fn dense_solve_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 7, 40] {
            let a = random_matrix(&mut rng, n);
            let x_true: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let b = a.mul_vec(&x_true);
            let x = a.solve(&b).unwrap();
            for (u, v) in x.iter().zip(&x_true) {
                assert!((u - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dense_inverse_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 25);
        let inv = a.inverse().unwrap();
        for i in 0..25 {
            let e = inv.mul_vec(a.row(i));
            // rows of A times A^{-1} on the right is awkward; check A·inv ≈ I
            let _ = e;
        }
        for i in 0..25 {
            for j in 0..25 {
                let v: f64 = (0..25).map(|k| a[(i, k)] * inv[(k, j)]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-10, "({i},{j}): {v}");
            }
        }
    }

    #[test]
    fn determinant_of_triangular_and_permuted() {
        let a = Matrix::from_rows(vec![
            vec![2.0, 1.0, 0.0],
            vec![0.0, 3.0, 5.0],
            vec![0.0, 0.0, 4.0],
        ]);
        assert!((det(&a) - 24.0).abs() < 1e-12);
        let swapped = Matrix::from_rows(vec![
            vec![0.0, 3.0, 5.0],
            vec![2.0, 1.0, 0.0],
            vec![0.0, 0.0, 4.0],
        ]);
        assert!((det(&swapped) + 24.0).abs() < 1e-12);
        assert_eq!(det(&Matrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn banded_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (n, kl, ku) = (60, 4, 3);
        let mut band = BandedMatrix::zeros(n, kl, ku);
        let mut dense = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                let v: f64 = rng.gen_range(-1.0..1.0);
                band.set(i, j, v);
                dense[(i, j)] = v;
            }
            band.add(i, i, 5.0);
            dense[(i, i)] += 5.0;
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).cos()).collect();
        let b = dense.mul_vec(&x_true);
        assert_eq!(band.mul_vec(&x_true), b);
        let x = band.factor().unwrap().solve(&b);
        let x_dense = dense.solve(&b).unwrap();
        for i in 0..n {
            assert!((x[i] - x_true[i]).abs() < 1e-9, "i={i}");
            assert!((x[i] - x_dense[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn banded_pivoting_survives_zero_diagonal() {
        // First diagonal entry zero forces an interchange.
        let mut band = BandedMatrix::zeros(4, 1, 1);
        band.set(0, 0, 0.0);
        band.set(0, 1, 2.0);
        band.set(1, 0, 1.0);
        band.set(1, 1, 1.0);
        band.set(1, 2, 1.0);
        band.set(2, 1, 3.0);
        band.set(2, 2, 1.0);
        band.set(2, 3, 1.0);
        band.set(3, 2, 1.0);
        band.set(3, 3, 2.0);
        let b = band.mul_vec(&[1.0, -1.0, 2.0, 0.5]);
        let x = band.factor().unwrap().solve(&b);
        for (u, v) in x.iter().zip([1.0, -1.0, 2.0, 0.5]) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_reports_error() {
        let a = Matrix::from_rows(vec![
            vec![1.0, 2.0],
            vec![2.0, 4.0],
        ]);
        assert!(matches!(
            LuFactors::new(a),
            Err(crate::Error::SingularJacobian { .. })
        ));
    }
}

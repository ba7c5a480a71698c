//! Leading-order pattern synthesis.
//!
//! A mode vector from the matching system turns into a planar pattern
//! through Bessel-mode superposition near the core, an oscillatory
//! `r^{−1/2}` tail further out, and exponential decay beyond the rescaling
//! radius.  This module provides the special functions, the piecewise
//! radial profile, full grid synthesis, and the triple-product identity
//! that underpins the mode-interaction coefficients.

pub mod bessel;

pub use bessel::{bessel_j, bessel_j_many};

use crate::galerkin::{RadialField, RadialMesh};
use crate::lattice::LatticeConfig;
use crate::{exec, Error, Result};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

/// Physical parameters of the pattern-forming model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelParams {
    k_c: f64,
    c0: f64,
    gamma: f64,
    mu: f64,
}

impl ModelParams {
    /// `k_c`: critical wavenumber; `c0`: curvature of the linear dispersion;
    /// `gamma`: quadratic coefficient (a negative value corresponds to the
    /// sign-flipped field, so positivity is required here); `mu`: distance
    /// from onset.
    pub fn new(k_c: f64, c0: f64, gamma: f64, mu: f64) -> Result<Self> {
        if !(k_c.is_finite() && k_c > 0.0) {
            return Err(Error::InvalidConfig(format!("k_c must be positive, got {k_c}")));
        }
        if !(c0.is_finite() && c0 > 0.0) {
            return Err(Error::InvalidConfig(format!("c0 must be positive, got {c0}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "mu must be non-negative, got {mu}"
            )));
        }
        Ok(Self { k_c, c0, gamma, mu })
    }

    /// Swift–Hohenberg normalisation: `k_c = 1`, `c0 = 1/4`.
    pub fn swift_hohenberg(gamma: f64, mu: f64) -> Result<Self> {
        Self::new(1.0, 0.25, gamma, mu)
    }

    pub fn k_c(&self) -> f64 {
        self.k_c
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// Default piecewise breakpoints: the Bessel core ends where the asymptotic
/// expansions are comfortably valid, the rescaling radius is order one.
pub fn default_breakpoints(k_c: f64) -> (f64, f64) {
    (20.0 / k_c, 1.0)
}

fn parity_sign(order: u32) -> f64 {
    if order % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Leading-order radial amplitude of the `n`-th angular mode.
///
/// Three pieces: `√(k_cπ/2)·J_{mn}(k_c r)` up to `r0`, the oscillatory tail
/// `r^{−1/2}cos(ψ_n)` up to `r1/√μ`, and the same tail damped by
/// `e^{√c0(r1 − √μ r)}` beyond, where `ψ_n = k_c r − mnπ/2 − π/4`.  The
/// common prefactor is `√(24c0)·k_c·a_n·√μ/(γ√(k_cπ))·(−1)^{mn}`.
pub fn radial_profile(
    params: &ModelParams,
    cfg: &LatticeConfig,
    a: &[f64],
    n: usize,
    r: f64,
    r0: f64,
    r1: f64,
) -> Result<f64> {
    if a.len() != cfg.modes() {
        return Err(Error::DimensionMismatch {
            expected: cfg.modes(),
            found: a.len(),
        });
    }
    if n > cfg.truncation() {
        return Err(Error::InvalidConfig(format!(
            "mode index {n} exceeds truncation {}",
            cfg.truncation()
        )));
    }
    let mu = params.mu;
    let limit = if mu == 0.0 { f64::INFINITY } else { r1 / mu.sqrt() };
    if !(r0 > 0.0 && r0 < limit) {
        return Err(Error::InvalidBreakpoints { r0, limit });
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::OutOfDomain {
            name: "r",
            value: r,
            domain: "[0, ∞)",
        });
    }

    let k_c = params.k_c;
    let order = cfg.m() * n as u32;
    let prefactor = (24.0 * params.c0).sqrt() * k_c * a[n] * mu.sqrt()
        / (params.gamma * (k_c * PI).sqrt())
        * parity_sign(order);

    let piece = if r <= r0 {
        (k_c * PI / 2.0).sqrt() * bessel_j(order, k_c * r)?
    } else {
        let psi = k_c * r - f64::from(order % 4) * FRAC_PI_2 - FRAC_PI_4;
        let tail = psi.cos() / r.sqrt();
        if r <= limit {
            tail
        } else {
            tail * (params.c0.sqrt() * (r1 - mu.sqrt() * r)).exp()
        }
    };
    Ok(prefactor * piece)
}

/// A planar field sampled on a polar grid; `u[i][j]` lives at
/// `(r[i], theta[j])`.
#[derive(Debug, Clone, Serialize)]
pub struct PatternGrid {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub u: Vec<Vec<f64>>,
}

/// `count` equally spaced angles starting at zero.  Grids built from this
/// helper let [`synthesize`] evaluate the angular factors by index
/// arithmetic, which makes the discrete rotation and reflection symmetries
/// of the output hold bitwise.
pub fn uniform_angles(count: usize) -> Vec<f64> {
    (0..count).map(|j| TAU * j as f64 / count as f64).collect()
}

/// Cosine table over one full turn, built from the first quarter wave so
/// that the mirror symmetry `tab[k] == tab[count − k]` and (for even
/// `count`) the half-period antisymmetry `tab[k + count/2] == −tab[k]`
/// hold exactly rather than to rounding error.
fn mirrored_cosines(count: usize) -> Vec<f64> {
    let mut tab = vec![0.0; count];
    for k in 0..=count / 4 {
        tab[k] = (TAU * k as f64 / count as f64).cos();
    }
    if count % 4 == 0 {
        tab[count / 4] = 0.0;
    }
    for k in count / 4 + 1..=count / 2 {
        tab[k] = -tab[count / 2 - k];
    }
    for k in count / 2 + 1..count {
        tab[k] = tab[count - k];
    }
    tab
}

/// Superposes the angular modes into the full leading-order field
///
/// ```text
/// u(r,θ) = √(12 c0) k_c √μ / γ · [a₀J₀(k_c r) + 2Σₙ (−1)^{mn} aₙ J_{mn}(k_c r) cos(mnθ)]
/// ```
///
/// on the whole window — the core formula, appropriate for the moderate-`μ`
/// plotting regime.  With the Swift–Hohenberg normalisation the prefactor
/// reduces to `√(3μ)/γ`.
pub fn synthesize(
    params: &ModelParams,
    cfg: &LatticeConfig,
    a: &[f64],
    r_grid: &[f64],
    theta_grid: &[f64],
) -> Result<PatternGrid> {
    if a.len() != cfg.modes() {
        return Err(Error::DimensionMismatch {
            expected: cfg.modes(),
            found: a.len(),
        });
    }
    if r_grid.is_empty() || theta_grid.is_empty() {
        return Err(Error::InvalidConfig("synthesis grids must be nonempty".into()));
    }
    let m = cfg.m();
    let n_modes = cfg.truncation();
    let top_order = m as usize * n_modes;
    let k_c = params.k_c;
    let prefactor = (12.0 * params.c0).sqrt() * k_c * params.mu.sqrt() / params.gamma;

    let js: Vec<Vec<f64>> = exec::map_indexed(r_grid.len(), |i| {
        bessel_j_many(top_order, k_c * r_grid[i])
    })
    .into_iter()
    .collect::<Result<_>>()?;

    // 2 aₙ (−1)^{mn} per angular mode n ≥ 1
    let weights: Vec<f64> = (1..=n_modes)
        .map(|n| 2.0 * a[n] * parity_sign(m * n as u32))
        .collect();

    let t = theta_grid.len();
    let index_exact = theta_grid == uniform_angles(t).as_slice();
    let u = if index_exact {
        let tab = mirrored_cosines(t);
        exec::map_indexed(r_grid.len(), |i| {
            let row_j = &js[i];
            (0..t)
                .map(|j| {
                    let mut s = a[0] * row_j[0];
                    for (n, w) in weights.iter().enumerate() {
                        let order = m as usize * (n + 1);
                        s += w * row_j[order] * tab[(order * j) % t];
                    }
                    prefactor * s
                })
                .collect()
        })
    } else {
        exec::map_indexed(r_grid.len(), |i| {
            let row_j = &js[i];
            theta_grid
                .iter()
                .map(|&theta| {
                    let mut s = a[0] * row_j[0];
                    for (n, w) in weights.iter().enumerate() {
                        let order = m as usize * (n + 1);
                        s += w * row_j[order] * (order as f64 * theta).cos();
                    }
                    prefactor * s
                })
                .collect()
        })
    };

    Ok(PatternGrid {
        r: r_grid.to_vec(),
        theta: theta_grid.to_vec(),
        u,
    })
}

/// Seed field for the Galerkin solver: `v_n(r_j) = β aₙ J_{mn}(r_j) e^{−√μ r_j/2}`.
///
/// The Bessel part carries the right angular structure and core shape; the
/// envelope pulls the tail towards zero so Newton starts inside the basin
/// of the localised branch rather than the periodic one.  `beta` sets the
/// overall amplitude — somewhat above the `√(3μ)/γ` equilibrium scale works
/// well in practice.
pub fn initial_guess(
    params: &ModelParams,
    cfg: &LatticeConfig,
    a: &[f64],
    mesh: &RadialMesh,
    beta: f64,
) -> Result<RadialField> {
    if a.len() != cfg.modes() {
        return Err(Error::DimensionMismatch {
            expected: cfg.modes(),
            found: a.len(),
        });
    }
    let m = cfg.m() as usize;
    let top_order = m * cfg.truncation();
    let decay = params.mu.sqrt() / 2.0;

    let columns: Vec<Vec<f64>> = exec::map_indexed(mesh.len(), |j| {
        let r = mesh.node(j);
        let js = bessel_j_many(top_order, r).expect("mesh nodes are non-negative");
        let envelope = beta * (-decay * r).exp();
        (0..cfg.modes()).map(|n| envelope * a[n] * js[m * n]).collect()
    });

    let mut rows = vec![vec![0.0; mesh.len()]; cfg.modes()];
    for (j, col) in columns.iter().enumerate() {
        for (n, &value) in col.iter().enumerate() {
            rows[n][j] = value;
        }
    }
    RadialField::from_rows(rows)
}

/// Truncated integral `∫₀^{r_max} s J_{ma}(s) J_{mb}(s) J_{m(a+b)}(s) ds`
/// against its closed form `cos(mπ(a−b)/3)/(π sin(π/3))`.  Returns
/// `(numeric, exact)`; the truncation tail decays like `r_max^{−1/2}`.
pub fn triple_product_check(m: u32, a: u32, b: u32, r_max: f64) -> Result<(f64, f64)> {
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "r_max must be positive, got {r_max}"
        )));
    }
    let cfg = LatticeConfig::new(m, 1)?;
    let exact = cfg.cos_coeff(i64::from(a) - i64::from(b)).value() * 2.0 / (PI * 3.0_f64.sqrt());

    let top = (m * (a + b)) as usize;
    let orders = (m * a, m * b, m * (a + b));
    let f = move |s: f64| -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let j = bessel_j_many(top, s).expect("quadrature arguments are non-negative");
        s * j[orders.0 as usize] * j[orders.1 as usize] * j[orders.2 as usize]
    };

    let panels = r_max.ceil() as usize;
    let pieces = exec::map_indexed(panels, |i| {
        let lo = i as f64;
        let hi = ((i + 1) as f64).min(r_max);
        if hi <= lo {
            0.0
        } else {
            adaptive_simpson(&f, lo, hi, 1e-10)
        }
    });
    Ok((pieces.iter().sum(), exact))
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine_simpson(f, a, b, fa, fm, fb, whole, tol, 24)
}

#[allow(clippy::too_many_arguments)]
fn refine_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (a + b);
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        refine_simpson(f, a, mid, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + refine_simpson(f, mid, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

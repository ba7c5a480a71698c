//! Integer-order Bessel functions of the first kind.
//!
//! Three evaluation routes, picked by argument size: the ascending power
//! series for small `x`, Miller's backward recurrence normalised by
//! `J₀ + 2Σ J_{2k} = 1` for moderate `x`, and the large-argument asymptotic
//! expansion once it can deliver full precision for the requested order.
//! Absolute accuracy is at the `1e−13` level throughout `x ≤ 10⁴`.

use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

const SERIES_MAX_X: f64 = 9.0;

fn domain_check(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "x",
            value: x,
            domain: "[0, ∞)",
        })
    }
}

/// Smallest argument from which the asymptotic expansion of `J_ν` reaches
/// full double precision.
fn asymptotic_min(nu: u32) -> f64 {
    let n = nu as f64;
    (4.0 * n * n).max(500.0)
}

/// `J_ν(x)` for integer `ν ≥ 0` and `x ≥ 0`.
pub fn bessel_j(nu: u32, x: f64) -> Result<f64> {
    domain_check(x)?;
    if x == 0.0 {
        return Ok(if nu == 0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_MAX_X {
        Ok(ascending_series(nu, x))
    } else if x >= asymptotic_min(nu) {
        Ok(asymptotic(nu, x))
    } else {
        let table = miller(nu as usize, x);
        Ok(table[nu as usize])
    }
}

/// All of `J₀(x), …, J_{nu_max}(x)` in one pass.  One backward recurrence
/// serves every order, which is what grid synthesis wants; for arguments in
/// the asymptotic range each order is finished off directly.
pub fn bessel_j_many(nu_max: usize, x: f64) -> Result<Vec<f64>> {
    domain_check(x)?;
    if x == 0.0 {
        let mut out = vec![0.0; nu_max + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    if x <= SERIES_MAX_X {
        return Ok((0..=nu_max)
            .map(|nu| ascending_series(nu as u32, x))
            .collect());
    }
    if x >= asymptotic_min(nu_max as u32) {
        return Ok((0..=nu_max).map(|nu| asymptotic(nu as u32, x)).collect());
    }
    Ok(miller(nu_max, x))
}

/// `Σ_k (−1)^k (x/2)^{ν+2k} / (k!(ν+k)!)`, for `x` small enough that the
/// alternating sum loses at most a few digits to cancellation.
fn ascending_series(nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0_f64;
    for k in 1..=nu {
        term *= half / f64::from(k);
        if term < 1e-320 {
            return 0.0;
        }
    }
    let ratio = -half * half;
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= ratio / (kf * (f64::from(nu) + kf));
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 + 1e-320 {
            break;
        }
    }
    sum
}

/// Miller's algorithm: recur `J_{k−1} = (2k/x)J_k − J_{k+1}` downward from a
/// seed high above both `ν` and `x`, then rescale by the accumulated even-order
/// sum.  Returns orders `0..=nu_max`.
fn miller(nu_max: usize, x: f64) -> Vec<f64> {
    let start = (x + 8.0 * x.powf(1.0 / 3.0) + 25.0).max(nu_max as f64 + 12.0) as usize;
    let start = start + (start % 2);

    let mut out = vec![0.0; nu_max + 1];
    let mut norm = 0.0_f64;
    let mut above = 0.0_f64;
    let mut here = 1e-300_f64;
    // seed order is even by construction
    norm += 2.0 * here;
    let mut k = start;
    while k >= 1 {
        let below = (2.0 * k as f64 / x) * here - above;
        let idx = k - 1;
        if idx <= nu_max {
            out[idx] = below;
        }
        if idx == 0 {
            norm += below;
        } else if idx % 2 == 0 {
            norm += 2.0 * below;
        }
        if below.abs() > 1e250 {
            let shrink = 1e-250;
            above = here * shrink;
            here = below * shrink;
            norm *= shrink;
            for v in &mut out[idx.min(nu_max)..] {
                *v *= shrink;
            }
        } else {
            above = here;
            here = below;
        }
        k -= 1;
    }
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// Large-argument expansion `√(2/(πx))[P cos χ − Q sin χ]` with
/// `χ = x − νπ/2 − π/4`; the phase shift is reduced mod 2π exactly via
/// `ν mod 4` before any floating subtraction.
fn asymptotic(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu) * f64::from(nu);
    let chi = x - f64::from(nu % 4) * FRAC_PI_2 - FRAC_PI_4;
    let mut p = 1.0_f64;
    let mut q = 0.0_f64;
    let mut a = 1.0_f64;
    for j in 1u32..40 {
        let odd = f64::from(2 * j - 1);
        let next = a * (mu - odd * odd) / (f64::from(j) * 8.0 * x);
        if next.abs() >= a.abs() && j > 1 {
            break;
        }
        a = next;
        match j % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-18 {
            break;
        }
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

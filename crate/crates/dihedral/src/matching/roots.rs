//! Real-root isolation for the closed-form coefficient polynomials.
//!
//! The polynomials involved have degree at most five with simple real
//! roots, so a floating-point Sturm sequence is reliable: sign-variation
//! counts bracket every distinct real root, bisection shrinks each bracket
//! below the requested tolerance, and a final Newton polish takes the root
//! to machine accuracy (which matters when back-substitution amplifies
//! root error through large coefficients).

/// All real roots of `Σ coeffs[k] x^k` inside `[lo, hi]`, sorted
/// ascending, each accurate to at least `tol` (usually much better).
///
/// The bracket is widened by `tol` on both sides so roots lying exactly on
/// an endpoint are found. Multiple roots are reported once.
///
/// # Panics
///
/// Panics when the polynomial is constant, the leading coefficient is zero,
/// or the bracket/tolerance are degenerate.
pub fn isolate_real_roots(coeffs: &[f64], lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    assert!(coeffs.len() >= 2, "polynomial must have degree >= 1");
    assert!(*coeffs.last().unwrap() != 0.0, "leading coefficient must be nonzero");
    assert!(lo < hi && tol > 0.0, "degenerate bracket or tolerance");

    let p = squarefree_part(coeffs);
    let dp = derivative(&p);
    let chain = sturm_chain(&p);
    let (lo, hi) = (lo - tol, hi + tol);

    let mut roots = Vec::new();
    let mut work = vec![(lo, hi, variations(&chain, lo), variations(&chain, hi))];
    while let Some((a, b, va, vb)) = work.pop() {
        let count = va.saturating_sub(vb);
        if count == 0 {
            continue;
        }
        if count == 1 || b - a <= tol * 1e-3 {
            roots.push(refine(&p, &dp, a, b, tol));
            continue;
        }
        let mut mid = 0.5 * (a + b);
        // Never split exactly on a root: the variation count there is
        // ambiguous. A tiny shove suffices for simple roots.
        let mut shove = (b - a) * 1e-4;
        while eval(&p, mid) == 0.0 {
            mid += shove;
            shove *= 2.0;
        }
        let vm = variations(&chain, mid);
        work.push((a, mid, va, vm));
        work.push((mid, b, vm, vb));
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Remainder of `num / den`, with near-zero leading coefficients trimmed
/// relative to the largest coefficient seen so far.
fn poly_rem(num: &[f64], den: &[f64], scale: f64) -> Vec<f64> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    let lead = den[d];
    while r.len() > d {
        let k = r.len() - 1;
        let factor = r[k] / lead;
        if factor != 0.0 {
            for (i, &c) in den.iter().enumerate() {
                r[k - d + i] -= factor * c;
            }
        }
        r.truncate(k);
    }
    while let Some(&last) = r.last() {
        if last.abs() <= 1e-14 * scale {
            r.pop();
        } else {
            break;
        }
    }
    r
}

/// Divide out `gcd(p, p′)` so that every root is simple; a no-op for
/// square-free input. Keeps bisection honest at even-multiplicity roots
/// (no sign change) and restores quadratic Newton convergence there.
fn squarefree_part(p: &[f64]) -> Vec<f64> {
    let scale = p.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    let mut a = p.to_vec();
    let mut b = derivative(p);
    while b.len() > 1 {
        let r = poly_rem(&a, &b, scale);
        if r.is_empty() {
            // b divides a: b is (a scalar multiple of) the gcd.
            return poly_div(p, &b);
        }
        a = b;
        b = r;
    }
    p.to_vec()
}

/// Quotient of exact polynomial division (remainder known to vanish).
fn poly_div(num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    let lead = den[d];
    let mut q = vec![0.0; r.len() - d];
    while r.len() > d {
        let k = r.len() - 1;
        let factor = r[k] / lead;
        q[k - d] = factor;
        for (i, &c) in den.iter().enumerate() {
            r[k - d + i] -= factor * c;
        }
        r.truncate(k);
    }
    q
}

fn sturm_chain(p: &[f64]) -> Vec<Vec<f64>> {
    let scale = p.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    let mut chain = vec![p.to_vec(), derivative(p)];
    loop {
        let k = chain.len();
        let mut r = poly_rem(&chain[k - 2], &chain[k - 1], scale);
        if r.is_empty() {
            break;
        }
        r.iter_mut().for_each(|c| *c = -*c);
        let degree = r.len() - 1;
        chain.push(r);
        if degree == 0 {
            break;
        }
    }
    chain
}

fn variations(chain: &[Vec<f64>], x: f64) -> usize {
    let mut count = 0;
    let mut prev = 0i8;
    for p in chain {
        let v = eval(p, x);
        let sign = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            continue;
        };
        if prev != 0 && sign != prev {
            count += 1;
        }
        prev = sign;
    }
    count
}

/// Bisection to width `tol`, then guarded Newton to machine accuracy.
fn refine(p: &[f64], dp: &[f64], mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = eval(p, a);
    if fa == 0.0 {
        return a;
    }
    if eval(p, b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = eval(p, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..40 {
        let f = eval(p, x);
        let d = eval(dp, x);
        if d == 0.0 {
            break;
        }
        let next = x - f / d;
        if !next.is_finite() || next < a - tol || next > b + tol {
            break;
        }
        if (next - x).abs() <= f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_with_irrational_roots() {
        // x² + 3x + 1
        let roots = isolate_real_roots(&[1.0, 3.0, 1.0], -10.0, 10.0, 1e-12);
        assert_eq!(roots.len(), 2);
        let s5 = 5.0_f64.sqrt();
        assert_abs_diff_eq!(roots[0], (-3.0 - s5) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(roots[1], (-3.0 + s5) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&[1.0, 0.0, 1.0], -100.0, 100.0, 1e-10).is_empty());
    }

    #[test]
    fn cubic_with_integer_roots() {
        // (x−1)(x−2)(x−3) = x³ − 6x² + 11x − 6
        let roots = isolate_real_roots(&[-6.0, 11.0, -6.0, 1.0], 0.0, 4.0, 1e-12);
        assert_eq!(roots.len(), 3);
        for (r, expect) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*r, expect, epsilon = 1e-13);
        }
    }

    #[test]
    fn respects_bracket() {
        let roots = isolate_real_roots(&[-6.0, 11.0, -6.0, 1.0], 1.5, 4.0, 1e-12);
        assert_eq!(roots.len(), 2);
        assert_abs_diff_eq!(roots[0], 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(roots[1], 3.0, epsilon = 1e-13);
    }

    #[test]
    fn roots_on_the_bracket_boundary_are_found() {
        let roots = isolate_real_roots(&[-6.0, 11.0, -6.0, 1.0], 1.0, 3.0, 1e-12);
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn scaling_invariance() {
        let base = [-6.0, 11.0, -6.0, 1.0];
        let scaled: Vec<f64> = base.iter().map(|c| c * 1e8).collect();
        let a = isolate_real_roots(&base, 0.0, 4.0, 1e-12);
        let b = isolate_real_roots(&scaled, 0.0, 4.0, 1e-12);
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-13);
        }
    }

    #[test]
    fn quintic_interleaving() {
        // 6λ⁵ + 5λ⁴ − 20λ³ − 12λ² + 12λ + 3
        let p = [3.0, 12.0, -12.0, -20.0, 5.0, 6.0];
        let roots = isolate_real_roots(&p, -10.0, 10.0, 1e-13);
        assert_eq!(roots.len(), 5);
        let s5 = 5.0_f64.sqrt();
        let fences = [
            f64::NEG_INFINITY,
            (-1.0 - s5) / 2.0,
            -1.0,
            0.0,
            (-1.0 + s5) / 2.0,
            1.0,
            f64::INFINITY,
        ];
        // λ₁ < (−1−√5)/2 < λ₂ < −1 < λ₃ < 0 < (−1+√5)/2 < λ₄ < 1 < λ₅,
        // with one fence between each adjacent pair of roots.
        assert!(roots[0] < fences[1] && fences[1] < roots[1]);
        assert!(roots[1] < fences[2] && fences[2] < roots[2]);
        assert!(roots[2] < fences[3]);
        assert!(fences[4] < roots[3] && roots[3] < fences[5]);
        assert!(fences[5] < roots[4]);
        // Residuals at machine level relative to the polynomial scale.
        for r in &roots {
            let scale = p
                .iter()
                .enumerate()
                .fold(0.0_f64, |m, (k, c)| m.max((c * r.powi(k as i32)).abs()));
            assert!(eval(&p, *r).abs() <= 1e-13 * scale, "root {r}");
        }
    }

    #[test]
    fn double_root_reported_once() {
        // (x−1)²(x+2) = x³ − 3x + 2
        let roots = isolate_real_roots(&[2.0, -3.0, 0.0, 1.0], -5.0, 5.0, 1e-9);
        assert_eq!(roots.len(), 2);
        assert_abs_diff_eq!(roots[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(roots[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ill_scaled_root_is_polished() {
        // Roots at −117.83…-like magnitudes must come out to full relative
        // precision, not just the bisection tolerance.
        let p = [9.0, 24.0, -113.0, -217.0, 116.0, 1.0];
        let roots = isolate_real_roots(&p, -400.0, 400.0, 1e-12);
        assert_eq!(roots.len(), 5);
        let big = roots[0];
        assert!(big < -100.0);
        let dp = derivative(&p);
        // |p(r)| ≤ ulp-level bound: |p'(r)| · |r| · ε
        assert!(eval(&p, big).abs() <= eval(&dp, big).abs() * big.abs() * 1e-14);
    }
}

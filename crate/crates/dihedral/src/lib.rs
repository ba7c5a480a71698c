//! Toolkit for computing fully localised planar patterns with dihedral
//! symmetry near a pattern-forming (Turing) instability.
//!
//! A `D_m`-symmetric localised pattern is described, to leading order, by an
//! angular cosine series `u(r, θ) = Σ_n u_{|n|}(r) cos(mnθ)` truncated at
//! `N+1` modes. The radial amplitudes of the core are parameterised by a
//! vector `a = (a_0, …, a_N)` that must solve a quadratic *matching system*
//! `a = Q(a)` whose coefficients are exact cosines on the sixth-root lattice.
//! This crate provides:
//!
//! * [`lattice`] — the exact cosine coefficients `cos(mπk/3)` and the
//!   residue class of `m` modulo 6 that controls the structure of `Q`;
//! * [`matching`] — evaluation and differentiation of `Q`, Newton solving,
//!   the symmetry transforms (half-period rotation, harmonic embedding,
//!   bright/dark duality), closed-form solution families for `N ≤ 4`, and
//!   seeded multi-start enumeration;
//! * [`continuum`] — the `N → ∞` limit of the matching system for `6 | m`:
//!   a quadratic integral equation on `[0,1]` discretised by linear splines
//!   with segment-exact product integration, plus the finite/continuum
//!   correspondence;
//! * [`verify`] — outward-rounded interval arithmetic and radii-polynomial
//!   bounds that certify a true, strictly positive solution of the integral
//!   equation near the computed spline;
//! * [`profile`] — integer-order Bessel `J` evaluation, leading-order radial
//!   profiles and planar pattern synthesis, and the oscillatory
//!   triple-product integral check;
//! * [`galerkin`] — a finite-difference solver for the radial Galerkin
//!   truncation of the quadratic-cubic Swift–Hohenberg equation, with damped
//!   Newton and secant (pseudo-arclength) continuation.
//!
//! # Parallelism
//!
//! Hot loops (Jacobian rows, interval matrix products, multi-start solves,
//! grid synthesis) run on rayon when the `parallel` feature (default) is
//! enabled and fall back to plain sequential iteration without it. Results
//! are bitwise identical either way: parallelism is only ever across
//! independent rows/items, never inside a floating-point reduction.

pub mod continuum;
mod error;
mod exec;
pub mod galerkin;
pub mod lattice;
pub mod linalg;
pub mod matching;
pub mod profile;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Caps the global worker pool at `threads`. Call once, before any parallel
/// work; later calls fail. Without the `parallel` feature this is a no-op,
/// since everything runs sequentially anyway.
#[cfg(feature = "parallel")]
pub fn configure_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_threads: usize) -> Result<()> {
    Ok(())
}

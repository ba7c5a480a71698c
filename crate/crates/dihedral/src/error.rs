use thiserror::Error;

/// Errors reported by the solver and verification routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobian numerically singular at iteration {iteration} (det = {det:e})")]
    SingularJacobian { det: f64, iteration: usize },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("operation requires 6 | m, got m = {m}")]
    NotSixDivisible { m: u32 },

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("incompatible embedding: floor({n_target}/{stride}) must equal {source_modes} - 1")]
    IncompatibleEmbedding {
        stride: usize,
        n_target: usize,
        source_modes: usize,
    },

    #[error("argument {name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,

    #[error("square root of an interval entirely below zero")]
    NegativeSqrt,

    #[error("invalid breakpoints: require 0 < r0 ({r0}) < r1/sqrt(mu) ({limit})")]
    InvalidBreakpoints { r0: f64, limit: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("initial point does not satisfy the residual tolerance (residual {residual:e})")]
    InitialPointNotConverged { residual: f64 },

    #[error("continuation step size underflow (step {step:e} below minimum {min:e})")]
    StepUnderflow { step: f64, min: f64 },
}

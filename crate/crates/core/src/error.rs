use thiserror::Error;

/// Errors raised by the evidence-combination library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value at index {index}: {context}")]
    NonFinite { index: usize, context: String },

    #[error("root bracket [{lo}, {hi}] does not change sign (f(lo)={f_lo}, f(hi)={f_hi})")]
    SameSignBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("{operation} did not converge after {iterations} iterations")]
    NoConvergence { operation: &'static str, iterations: usize },

    #[error("weights are not in the simplex: {0}")]
    NotSimplex(String),

    #[error("density is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("supports differ: {0}")]
    SupportMismatch(String),

    #[error("bases are not in Context I: {0}")]
    ContextMismatch(String),

    #[error("relative belief undefined at index {index}: prior mass is zero where the posterior is positive")]
    ZeroPrior { index: usize },

    #[error("all importance weights are zero; the proposal misses the target support")]
    DegenerateWeights,

    #[error("effective sample size {ess:.1} is below the floor {floor}; increase the number of draws")]
    LowEffectiveSampleSize { ess: f64, floor: f64 },

    #[error("exact arithmetic cannot represent {0}")]
    Inexact(String),
}

pub type Result<T> = std::result::Result<T, Error>;

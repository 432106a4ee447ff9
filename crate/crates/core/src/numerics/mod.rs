//! Deterministic numerical plumbing: quadrature, bracketing root-finding,
//! seeded sampling and importance-sampling estimators.

mod importance;
mod quadrature;
mod roots;
mod sampling;
pub mod special;

pub use importance::{
    importance_estimate, importance_estimate_with, log_importance_normalizer, ImportanceEstimate, LogNormalizer,
};
pub use quadrature::{integrate_trapezoid, Grid, Quadrature};
pub use roots::{find_root_monotone, DEFAULT_ROOT_TOL};
pub use sampling::{sample, sample_n, DistributionSpec, Draw, SeededGenerator};

/// `log(Σ exp(x_i))` without overflow. Returns `-inf` for an empty or
/// all-`-inf` input.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

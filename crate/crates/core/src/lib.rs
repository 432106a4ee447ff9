//! Combining statistical evidence from several Bayesian inference bases.
//!
//! Bases that share a model and data but differ in their priors are pooled
//! through power means of the priors, and the resulting relative belief
//! ratios are compared with the per-base evidence. Bases with different
//! models but common data are combined through the mixture of relative
//! belief ratios with posterior-predictive weights.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod base;
pub mod context2;
pub mod distributions;
pub mod elicitation;
mod error;
pub mod evidence;
pub mod numerics;
pub mod pooling;
pub mod regression;
mod scalar;
pub mod studies;

pub use base::{check_context_one, InferenceBase};
pub use distributions::*;
pub use error::{Error, Result};
pub use evidence::{
    base_evidence, combine_evidence_linear, consensus_audit, linear_evidence, rb_power_mean, relative_belief,
    summarize, ConsensusAudit, ConsensusPattern, EvidenceFunction, EvidenceSummary, LabelAudit, Verdict,
    DEFAULT_EPSILON,
};
pub use numerics::*;
pub use pooling::{
    pool_priors, pooled_base, pooled_posterior, pooled_predictive, posterior_weights, weighted_power_mean, Degree,
    PoolSpec, PooledPrior,
};
pub use scalar::{check_simplex, normalize, parse_rational, sum, Scalar};

/// Finite density in exact rational arithmetic.
pub type ExactDensity = FiniteDensity<num_rational::BigRational>;
pub type ExactBase = InferenceBase<ExactDensity>;
pub type GridBase = InferenceBase<GridDensity<f64>>;
pub type FiniteBase64 = InferenceBase<FiniteDensity<f64>>;

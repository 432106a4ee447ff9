//! Power-mean pooling of priors and the posteriors and predictives it
//! induces.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::base::{check_context_one, InferenceBase};
use crate::distributions::{Density, Support};
use crate::{check_simplex, Error, Result, Scalar};

/// Degree of a power mean on the extended real line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Degree<S> {
    NegInf,
    Finite(S),
    PosInf,
}

impl<S: Scalar> Degree<S> {
    pub fn linear() -> Self {
        Degree::Finite(S::one())
    }

    pub fn geometric() -> Self {
        Degree::Finite(S::zero())
    }

    fn is_linear(&self) -> bool {
        matches!(self, Degree::Finite(t) if t.is_one())
    }

    /// Total order on the extended line.
    pub fn cmp_to(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Degree::NegInf, Degree::NegInf) | (Degree::PosInf, Degree::PosInf) => Equal,
            (Degree::NegInf, _) | (_, Degree::PosInf) => Less,
            (_, Degree::NegInf) | (Degree::PosInf, _) => Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.partial_cmp(b).unwrap_or(Equal),
        }
    }

    /// Parses `"inf"`, `"-inf"` or a number via `parse`.
    pub fn parse_with(text: &str, parse: impl Fn(&str) -> Option<S>) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Some(Degree::PosInf),
            "-inf" | "-infinity" => Some(Degree::NegInf),
            other => parse(other).map(Degree::Finite),
        }
    }
}

impl<S: Scalar> fmt::Display for Degree<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::PosInf => write!(f, "inf"),
            Degree::Finite(t) => write!(f, "{t}"),
        }
    }
}

/// Pooling degree `t` and weights `α` on the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolSpec<S> {
    degree: Degree<S>,
    weights: Vec<S>,
}

impl<S: Scalar> PoolSpec<S> {
    pub fn new(degree: Degree<S>, weights: Vec<S>) -> Result<Self> {
        check_simplex(&weights)?;
        if let Degree::Finite(t) = &degree {
            if !t.is_finite_value() {
                return Err(Error::InvalidInput("finite degree must be a finite number".into()));
            }
        }
        Ok(Self { degree, weights })
    }

    /// Equal weights over `k` bases.
    pub fn equal(degree: Degree<S>, k: usize) -> Result<Self> {
        let w = S::one() / S::from_usize(k.max(1)).ok_or_else(|| Error::InvalidInput("too many bases".into()))?;
        Self::new(degree, vec![w; k])
    }

    pub fn degree(&self) -> &Degree<S> {
        &self.degree
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn with_degree(&self, degree: Degree<S>) -> Self {
        Self { degree, weights: self.weights.clone() }
    }
}

/// Weighted power mean of non-negative `values`. Components with zero
/// weight are left out for every degree.
pub fn weighted_power_mean<S: Scalar>(values: &[S], weights: &[S], degree: &Degree<S>) -> Result<S> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(Error::InvalidInput("values and weights must be non-empty and of equal length".into()));
    }
    let active: Vec<(&S, &S)> = values.iter().zip(weights).filter(|(_, w)| **w > S::zero()).collect();
    if active.is_empty() {
        return Err(Error::NotSimplex("all weights are zero".into()));
    }
    if let Some((v, _)) = active.iter().find(|(v, _)| **v < S::zero()) {
        return Err(Error::InvalidInput(format!("power mean of negative value {v}")));
    }
    let inexact = |what: &str| Error::Inexact(what.to_string());
    let pick = |better: fn(&S, &S) -> bool| {
        active.iter().map(|(v, _)| (*v).clone()).reduce(|a, b| if better(&b, &a) { b } else { a }).unwrap()
    };
    match degree {
        Degree::NegInf => Ok(pick(|b, a| b < a)),
        Degree::PosInf => Ok(pick(|b, a| b > a)),
        Degree::Finite(t) if t.is_zero() => {
            if active.iter().any(|(v, _)| v.is_zero()) {
                return Ok(S::zero());
            }
            active.iter().try_fold(S::one(), |acc, (v, w)| {
                Ok(acc * v.checked_pow(w).ok_or_else(|| inexact(&format!("{v}^{w}")))?)
            })
        }
        Degree::Finite(t) if t.is_one() => {
            Ok(active.iter().fold(S::zero(), |acc, (v, w)| acc + (*w).clone() * (*v).clone()))
        }
        Degree::Finite(t) => {
            if *t < S::zero() && active.iter().any(|(v, _)| v.is_zero()) {
                return Ok(S::zero());
            }
            let inner = active.iter().try_fold(S::zero(), |acc, (v, w)| {
                Ok::<S, Error>(acc + (*w).clone() * v.checked_pow(t).ok_or_else(|| inexact(&format!("{v}^{t}")))?)
            })?;
            let inv = S::one() / t.clone();
            inner.checked_pow(&inv).ok_or_else(|| inexact(&format!("({inner})^(1/{t})")))
        }
    }
}

/// Pointwise power mean of several functions on a common support.
fn pointwise_mean<S: Scalar>(columns: &[&[S]], spec: &PoolSpec<S>) -> Result<Vec<S>> {
    let len = columns[0].len();
    (0..len)
        .map(|j| {
            let values: Vec<S> = columns.iter().map(|c| c[j].clone()).collect();
            weighted_power_mean(&values, &spec.weights, &spec.degree)
        })
        .collect()
}

/// A pooled prior and the constant `c_t` that normalized it.
#[derive(Debug, Clone, PartialEq)]
pub struct PooledPrior<D: Density> {
    pub density: D,
    pub normalizer: D::Scalar,
}

fn check_count<T>(items: &[T], spec_len: usize, what: &str) -> Result<()> {
    if items.is_empty() {
        return Err(Error::InvalidInput(format!("no {what} to pool")));
    }
    if items.len() != spec_len {
        return Err(Error::InvalidInput(format!("{} {what} but {spec_len} weights", items.len())));
    }
    Ok(())
}

/// Normalized degree-`t` power mean of the priors.
pub fn pool_priors<D: Density>(priors: &[D], spec: &PoolSpec<D::Scalar>) -> Result<PooledPrior<D>> {
    check_count(priors, spec.weights.len(), "priors")?;
    for p in &priors[1..] {
        priors[0].check_same_support(p)?;
    }
    let columns: Vec<&[D::Scalar]> = priors.iter().map(|p| p.values()).collect();
    let mean = pointwise_mean(&columns, spec)?;
    if spec.degree.is_linear() {
        return Ok(PooledPrior { density: priors[0].with_values(mean)?, normalizer: D::Scalar::one() });
    }
    let (density, normalizer) = priors[0].renormalized(mean.clone()).map_err(|e| match e {
        Error::NotNormalizable(_) => Error::NotNormalizable(format!(
            "the degree {} pool is identically zero (priors have disjoint supports)",
            spec.degree
        )),
        other => other,
    })?;
    if spec.degree.cmp_to(&Degree::linear()).is_gt() {
        check_tail_mass(&priors[0], &mean)?;
    }
    Ok(PooledPrior { density, normalizer })
}

/// On grids, mass near the edges of the working range signals that the
/// power mean is not integrable there.
fn check_tail_mass<D: Density>(like: &D, values: &[D::Scalar]) -> Result<()> {
    let support = like.support();
    if support.coordinate(0).is_none() || support.len() < 32 {
        return Ok(());
    }
    let cut = support.len() / 16;
    let full = like.integrate(values);
    let inner = values
        .iter()
        .enumerate()
        .filter(|(j, _)| *j >= cut && *j < support.len() - cut)
        .fold(D::Scalar::zero(), |acc, (j, v)| acc + like.node_weight(j) * v.clone());
    let rel = ((full.clone() - inner) / full).to_f64_lossy();
    if rel > 1e-6 {
        return Err(Error::NotNormalizable(format!(
            "power mean keeps {rel:.2e} of its mass near the edge of the working range"
        )));
    }
    Ok(())
}

/// `m_{t,α}(x)`, the prior predictive of the data under the pooled prior.
pub fn pooled_predictive<D: Density>(bases: &[InferenceBase<D>], spec: &PoolSpec<D::Scalar>) -> Result<D::Scalar> {
    let pooled = pooled_base(bases, spec)?;
    Ok(pooled.predictive().clone())
}

/// The inference base whose prior is the pooled prior.
pub fn pooled_base<D: Density>(bases: &[InferenceBase<D>], spec: &PoolSpec<D::Scalar>) -> Result<InferenceBase<D>> {
    check_count(bases, spec.weights.len(), "bases")?;
    check_context_one(bases)?;
    let priors: Vec<D> = bases.iter().map(|b| b.prior().clone()).collect();
    let pooled = pool_priors(&priors, spec)?;
    bases[0].with_prior(pooled.density)
}

/// Posterior under the pooled prior, formed as the normalized power mean
/// of `m_i(x)·π_i(·|x)`.
pub fn pooled_posterior<D: Density>(bases: &[InferenceBase<D>], spec: &PoolSpec<D::Scalar>) -> Result<D> {
    check_count(bases, spec.weights.len(), "bases")?;
    check_context_one(bases)?;
    let scaled: Vec<Vec<D::Scalar>> = bases
        .iter()
        .map(|b| {
            let post = b.posterior()?;
            Ok(post.values().iter().map(|v| v.clone() * b.predictive().clone()).collect())
        })
        .collect::<Result<_>>()?;
    let columns: Vec<&[D::Scalar]> = scaled.iter().map(Vec::as_slice).collect();
    let mean = pointwise_mean(&columns, spec)?;
    Ok(bases[0].prior().renormalized(mean)?.0)
}

/// Linear-pool posterior weights `α_i m_i(x) / Σ_j α_j m_j(x)`.
pub fn posterior_weights<D: Density>(bases: &[InferenceBase<D>], alpha: &[D::Scalar]) -> Result<Vec<D::Scalar>> {
    check_count(bases, alpha.len(), "bases")?;
    check_simplex(alpha)?;
    let raw: Vec<D::Scalar> = bases.iter().zip(alpha).map(|(b, a)| a.clone() * b.predictive().clone()).collect();
    crate::normalize(&raw)
}

//! Inference bases: a prior together with the likelihood of the observed
//! data, and the prior predictive it implies.

use num_traits::{One, Signed, Zero};

use crate::distributions::{Density, FiniteDensity, FiniteModel, GridDensity, NormalConjugateSpec, Support};
use crate::numerics::Grid;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceBase<D: Density> {
    prior: D,
    likelihood: Vec<D::Scalar>,
    predictive: D::Scalar,
}

impl<D: Density> InferenceBase<D> {
    /// `likelihood[j]` is `f_θ(x)` at support point `j` for the observed `x`.
    pub fn new(prior: D, likelihood: Vec<D::Scalar>) -> Result<Self> {
        if likelihood.len() != prior.len() {
            return Err(Error::SupportMismatch(format!(
                "likelihood has {} values, prior has {} points",
                likelihood.len(),
                prior.len()
            )));
        }
        if let Some(index) = likelihood.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { index, context: "likelihood value".into() });
        }
        if let Some(j) = likelihood.iter().position(|v| *v < D::Scalar::zero()) {
            return Err(Error::InvalidInput(format!("negative likelihood at {}", prior.support().label(j))));
        }
        let joint: Vec<D::Scalar> =
            prior.values().iter().zip(&likelihood).map(|(p, f)| p.clone() * f.clone()).collect();
        let predictive = prior.integrate(&joint);
        if !(predictive > D::Scalar::zero()) {
            return Err(Error::NotNormalizable("prior predictive of the observed data is zero".into()));
        }
        Ok(Self { prior, likelihood, predictive })
    }

    pub fn prior(&self) -> &D {
        &self.prior
    }

    pub fn likelihood(&self) -> &[D::Scalar] {
        &self.likelihood
    }

    /// Prior predictive density `m(x)` of the observed data.
    pub fn predictive(&self) -> &D::Scalar {
        &self.predictive
    }

    pub fn posterior(&self) -> Result<D> {
        let joint = self.prior.values().iter().zip(&self.likelihood).map(|(p, f)| p.clone() * f.clone()).collect();
        Ok(self.prior.renormalized(joint)?.0)
    }

    /// Same data and model under a different prior.
    pub fn with_prior(&self, prior: D) -> Result<Self> {
        self.prior.check_same_support(&prior)?;
        Self::new(prior, self.likelihood.clone())
    }
}

impl<S: Scalar> InferenceBase<FiniteDensity<S>> {
    /// Base for observed sample point `x` of a finite model.
    pub fn from_model(model: &FiniteModel<S>, prior: FiniteDensity<S>, x: usize) -> Result<Self> {
        if model.parameters() != prior.labels() {
            return Err(Error::SupportMismatch("prior is not over the model's parameter space".into()));
        }
        Self::new(prior, model.likelihood(x)?)
    }
}

impl InferenceBase<GridDensity<f64>> {
    /// Normal location base discretized on `grid`.
    pub fn normal_conjugate(spec: &NormalConjugateSpec, grid: Grid<f64>) -> Result<Self> {
        spec.validate()?;
        let prior = GridDensity::from_fn(grid, |mu| spec.prior_density(mu))?;
        let likelihood = grid.nodes().map(|mu| spec.likelihood(mu)).collect();
        Self::new(prior, likelihood)
    }
}

/// Checks that the bases share support, model and data, so only their
/// priors differ.
pub fn check_context_one<D: Density>(bases: &[InferenceBase<D>]) -> Result<()> {
    let first = bases.first().ok_or_else(|| Error::InvalidInput("no inference bases given".into()))?;
    for (i, b) in bases.iter().enumerate().skip(1) {
        first.prior.check_same_support(&b.prior)?;
        let scale = first.likelihood.iter().fold(D::Scalar::zero(), |m, v| if v.clone() > m { v.clone() } else { m });
        let tol = D::Scalar::mass_tolerance() * (D::Scalar::one() + scale);
        if let Some(j) =
            first.likelihood.iter().zip(&b.likelihood).position(|(a, c)| (a.clone() - c.clone()).abs() > tol)
        {
            return Err(Error::ContextMismatch(format!(
                "base {i} has a different likelihood at {}",
                first.prior.support().label(j)
            )));
        }
    }
    Ok(())
}

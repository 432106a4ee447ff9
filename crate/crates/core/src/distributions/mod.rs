//! Finite and grid densities, the parametric families used by the worked
//! examples, and marginalization onto an interest parameter.

mod families;
mod finite;
mod grid;
mod interest;
mod kl;
mod model;
mod normal;

use std::fmt::Debug;

pub use families::{
    cauchy_location_scale, cauchy_location_scale_with, standardized_t_density, DEFAULT_CAUCHY_COVERAGE,
};
pub use finite::{FiniteDensity, Labels};
pub use grid::GridDensity;
pub use interest::{marginalize, InterestMapping};
pub use kl::{kl_divergence, Divergence};
pub use model::FiniteModel;
pub use normal::NormalConjugateSpec;

use num_traits::Zero;

use crate::{Error, Result, Scalar};

/// The set of points a density lives on.
pub trait Support: Clone + PartialEq + Debug + Send + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Human-readable name of point `j`.
    fn label(&self, j: usize) -> String;

    /// Position on the real line, for grids.
    fn coordinate(&self, j: usize) -> Option<f64>;
}

/// A normalized density on a [`Support`], integrated with per-node weights
/// (1 for finite supports, trapezoid weights for grids).
pub trait Density: Clone + Debug + Send + Sync + Sized {
    type Scalar: Scalar;
    type Support: Support;

    fn support(&self) -> &Self::Support;

    fn values(&self) -> &[Self::Scalar];

    /// Quadrature weight of point `j` of `support`.
    fn weight_on(support: &Self::Support, j: usize) -> Self::Scalar;

    fn node_weight(&self, j: usize) -> Self::Scalar {
        Self::weight_on(self.support(), j)
    }

    /// Builds a density from values that must already integrate to one.
    fn from_parts(support: Self::Support, values: Vec<Self::Scalar>) -> Result<Self>;

    fn len(&self) -> usize {
        self.values().len()
    }

    fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    /// `∫ g` for `g` given at the support points.
    fn integrate(&self, g: &[Self::Scalar]) -> Self::Scalar {
        g.iter().enumerate().fold(Self::Scalar::zero(), |acc, (j, v)| acc + self.node_weight(j) * v.clone())
    }

    /// Mass of the points selected by `keep`.
    fn mass_where(&self, keep: impl Fn(usize) -> bool) -> Self::Scalar {
        self.values()
            .iter()
            .enumerate()
            .filter(|(j, _)| keep(*j))
            .fold(Self::Scalar::zero(), |acc, (j, v)| acc + self.node_weight(j) * v.clone())
    }

    /// Normalizes non-negative `values` on `support`, returning the density
    /// and the normalizing constant that was divided out.
    fn from_unnormalized(support: Self::Support, values: Vec<Self::Scalar>) -> Result<(Self, Self::Scalar)> {
        if values.len() != support.len() {
            return Err(Error::SupportMismatch(format!(
                "{} values for a support of {} points",
                values.len(),
                support.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { index, context: "unnormalized density value".into() });
        }
        if let Some(j) = values.iter().position(|v| *v < Self::Scalar::zero()) {
            return Err(Error::InvalidInput(format!("negative density value at {}", support.label(j))));
        }
        let total = values
            .iter()
            .enumerate()
            .fold(Self::Scalar::zero(), |acc, (j, v)| acc + Self::weight_on(&support, j) * v.clone());
        if !(total > Self::Scalar::zero()) {
            return Err(Error::NotNormalizable("total mass is zero".into()));
        }
        let normalized = values.into_iter().map(|v| v / total.clone()).collect();
        Ok((Self::from_parts(support, normalized)?, total))
    }

    fn check_same_support(&self, other: &Self) -> Result<()> {
        if self.support() == other.support() {
            Ok(())
        } else {
            Err(Error::SupportMismatch("densities are defined on different supports".into()))
        }
    }

    /// New density on the same support.
    fn with_values(&self, values: Vec<Self::Scalar>) -> Result<Self> {
        Self::from_parts(self.support().clone(), values)
    }

    /// Normalizes `values` on this density's support.
    fn renormalized(&self, values: Vec<Self::Scalar>) -> Result<(Self, Self::Scalar)> {
        Self::from_unnormalized(self.support().clone(), values)
    }
}

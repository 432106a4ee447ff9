use num_traits::Float;

use crate::{Error, Result};

/// Uniform grid of nodes `lower + j * step`, `j = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<F> {
    pub lower: F,
    pub step: F,
    pub len: usize,
}

impl<F: Float> Grid<F> {
    pub fn new(lower: F, upper: F, len: usize) -> Result<Self> {
        if len < 2 || !(upper > lower) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 nodes on a finite non-empty range (len={len})"
            )));
        }
        let step = (upper - lower) / F::from(len - 1).unwrap();
        Ok(Self { lower, step, len })
    }

    /// Grid spanning the union of `center ± width_sd * sd` over the given
    /// (center, sd) pairs.
    pub fn covering(ranges: &[(F, F)], width_sd: F, len: usize) -> Result<Self> {
        if ranges.is_empty() {
            return Err(Error::InvalidInput("no ranges to cover".into()));
        }
        let lower = ranges.iter().map(|&(c, s)| c - width_sd * s).fold(F::infinity(), F::min);
        let upper = ranges.iter().map(|&(c, s)| c + width_sd * s).fold(F::neg_infinity(), F::max);
        Self::new(lower, upper, len)
    }

    pub fn upper(&self) -> F {
        self.node(self.len - 1)
    }

    pub fn node(&self, j: usize) -> F {
        self.lower + self.step * F::from(j).unwrap()
    }

    pub fn nodes(&self) -> impl Iterator<Item = F> + '_ {
        (0..self.len).map(move |j| self.node(j))
    }

    /// Trapezoid weight of node `j`.
    pub fn weight(&self, j: usize) -> F {
        if j == 0 || j + 1 == self.len {
            self.step / (F::one() + F::one())
        } else {
            self.step
        }
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest(&self, x: F) -> usize {
        let pos = ((x - self.lower) / self.step).round();
        if pos <= F::zero() {
            0
        } else {
            pos.to_usize().unwrap_or(self.len - 1).min(self.len - 1)
        }
    }
}

/// Values sampled on a uniform grid with spacing `step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature<F> {
    values: Vec<F>,
    step: F,
}

impl<F: Float> Quadrature<F> {
    pub fn new(values: Vec<F>, step: F) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidInput("quadrature needs at least 2 nodes".into()));
        }
        if !(step > F::zero()) || !step.is_finite() {
            return Err(Error::InvalidInput("quadrature step must be positive".into()));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index, context: "quadrature node value".into() });
        }
        Ok(Self { values, step })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn step(&self) -> F {
        self.step
    }

    pub fn integrate(&self) -> F {
        let n = self.values.len();
        let two = F::one() + F::one();
        let interior = self.values[1..n - 1].iter().fold(F::zero(), |acc, &v| acc + v);
        self.step * ((self.values[0] + self.values[n - 1]) / two + interior)
    }
}

/// Trapezoid-rule integral of `values` sampled at spacing `step`.
pub fn integrate_trapezoid<F: Float>(values: &[F], step: F) -> Result<F> {
    Ok(Quadrature::new(values.to_vec(), step)?.integrate())
}

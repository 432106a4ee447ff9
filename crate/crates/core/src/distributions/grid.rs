use num_traits::Float;

use super::{Density, Support};
use crate::numerics::Grid;
use crate::{Error, Result, Scalar};

impl<F: Float + Scalar> Support for Grid<F> {
    fn len(&self) -> usize {
        self.len
    }

    fn label(&self, j: usize) -> String {
        format!("{}", self.node(j))
    }

    fn coordinate(&self, j: usize) -> Option<f64> {
        self.node(j).to_f64()
    }
}

/// Density sampled on a uniform grid; integrates to one under the
/// trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity<F> {
    grid: Grid<F>,
    values: Vec<F>,
}

fn grid_tolerance<F: Float>() -> F {
    F::from(1e-8).unwrap().max(F::epsilon() * F::from(1e3).unwrap())
}

impl<F: Float + Scalar> GridDensity<F> {
    pub fn new(grid: Grid<F>, values: Vec<F>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::SupportMismatch(format!("{} values for {} grid nodes", values.len(), grid.len)));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index, context: "grid density value".into() });
        }
        if let Some(j) = values.iter().position(|v| *v < F::zero()) {
            return Err(Error::InvalidInput(format!(
                "negative density at node {}",
                grid.node(j).to_f64().unwrap_or(f64::NAN)
            )));
        }
        let density = Self { grid, values };
        let total = density.integrate(&density.values);
        if (total - F::one()).abs() > grid_tolerance() {
            return Err(Error::NotNormalizable(format!("grid density integrates to {total}")));
        }
        Ok(density)
    }

    /// Evaluates `f` at the nodes and normalizes by the trapezoid integral.
    pub fn from_fn(grid: Grid<F>, f: impl Fn(F) -> F) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Ok(Self::from_unnormalized(grid, values)?.0)
    }

    pub fn grid(&self) -> &Grid<F> {
        &self.grid
    }

    /// Linear interpolation between nodes; zero outside the grid.
    pub fn value_at(&self, x: F) -> F {
        if x < self.grid.lower || x > self.grid.upper() {
            return F::zero();
        }
        let pos = (x - self.grid.lower) / self.grid.step;
        let j = pos.floor().to_usize().unwrap_or(0).min(self.grid.len - 2);
        let frac = pos - F::from(j).unwrap();
        self.values[j] * (F::one() - frac) + self.values[j + 1] * frac
    }

    pub fn mean(&self) -> F {
        let xv: Vec<F> = self.grid.nodes().zip(&self.values).map(|(x, v)| x * *v).collect();
        self.integrate(&xv)
    }
}

impl<F: Float + Scalar> Density for GridDensity<F> {
    type Scalar = F;
    type Support = Grid<F>;

    fn support(&self) -> &Grid<F> {
        &self.grid
    }

    fn values(&self) -> &[F] {
        &self.values
    }

    fn weight_on(support: &Grid<F>, j: usize) -> F {
        support.weight(j)
    }

    fn from_parts(support: Grid<F>, values: Vec<F>) -> Result<Self> {
        Self::new(support, values)
    }
}

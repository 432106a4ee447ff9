use std::f64::consts::PI;

use crate::numerics::special::student_t_ln_pdf;
use crate::{Error, Result};

/// Coverage of `(-σ0, σ0)` required of the rescaled Cauchy.
pub const DEFAULT_CAUCHY_COVERAGE: f64 = 0.6827;

/// Density at `z` of a Student-t with `lambda` degrees of freedom rescaled
/// to unit variance.
pub fn standardized_t_density(lambda: f64, z: f64) -> Result<f64> {
    if !(lambda > 2.0) {
        return Err(Error::InvalidInput(format!("unit-variance t needs λ > 2, got {lambda}")));
    }
    let c = (lambda / (lambda - 2.0)).sqrt();
    Ok(c * student_t_ln_pdf(c * z, lambda).exp())
}

/// Scale `η0` of a Cauchy(0, η0) putting the default coverage on
/// `(-σ0, σ0)`.
pub fn cauchy_location_scale(sigma0: f64) -> Result<f64> {
    cauchy_location_scale_with(sigma0, DEFAULT_CAUCHY_COVERAGE)
}

/// Solves `(2/π)·atan(σ0/η0) = coverage` for `η0`.
pub fn cauchy_location_scale_with(sigma0: f64, coverage: f64) -> Result<f64> {
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(Error::InvalidInput(format!("σ0 must be positive, got {sigma0}")));
    }
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidInput(format!("coverage must lie in (0,1), got {coverage}")));
    }
    Ok(sigma0 / (coverage * PI / 2.0).tan())
}

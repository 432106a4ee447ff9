//! Thin wrappers over statrs special functions with the parametrizations
//! used throughout the crate.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::{find_root_monotone, Error, Result};

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!("normal quantile needs p in (0,1), got {p}")));
    }
    let mut z = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p);
    // polish with Newton steps on the erfc-based cdf
    for _ in 0..2 {
        let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if pdf > 0.0 {
            z -= (normal_cdf(z) - p) / pdf;
        }
    }
    Ok(z)
}

/// `P(X <= x)` for `X ~ Gamma(shape, rate)`.
pub fn gamma_cdf(shape: f64, rate: f64, x: f64) -> Result<f64> {
    if !(shape > 0.0 && rate > 0.0) {
        return Err(Error::InvalidInput(format!("gamma needs positive shape and rate, got {shape}, {rate}")));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    Ok(statrs::function::gamma::gamma_lr(shape, rate * x))
}

/// Quantile of `Gamma(shape, rate)`, solved by bisection on the CDF.
pub fn gamma_quantile(shape: f64, rate: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!("gamma quantile needs p in (0,1), got {p}")));
    }
    let mean = shape / rate;
    let mut hi = mean.max(1.0 / rate);
    while gamma_cdf(shape, rate, hi)? < p {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence { operation: "gamma_quantile", iterations: 0 });
        }
    }
    let root = find_root_monotone(|x| gamma_cdf(shape, rate, x).unwrap_or(f64::NAN) - p, 0.0, hi, hi * 1e-14)?;
    Ok(root)
}

/// Log density of the standard Student-t with `df` degrees of freedom.
pub fn student_t_ln_pdf(z: f64, df: f64) -> f64 {
    use std::f64::consts::PI;
    ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * PI).ln() - (df + 1.0) / 2.0 * (z * z / df).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_quantile_round_trip() {
        for p in [0.01, 0.3, 0.5, 0.8413447460685429, 0.99] {
            assert!((normal_cdf(normal_quantile(p).unwrap()) - p).abs() < 1e-12);
        }
        assert!((normal_quantile(0.975).unwrap() - 1.959963984540054).abs() < 1e-9);
    }

    #[test]
    fn gamma_cdf_exponential_case() {
        // shape 1 is exponential
        for x in [0.1, 1.0, 3.5] {
            assert!((gamma_cdf(1.0, 2.0, x).unwrap() - (1.0 - (-2.0 * x).exp())).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_quantile_round_trip() {
        for (a, b) in [(0.5, 1.0), (4.05, 140.0), (30.0, 0.1)] {
            for p in [0.005, 0.5, 0.995] {
                let q = gamma_quantile(a, b, p).unwrap();
                assert!((gamma_cdf(a, b, q).unwrap() - p).abs() < 1e-10, "{a} {b} {p}");
            }
        }
    }

    #[test]
    fn t_density_normalizes() {
        let h = 0.01;
        let total: f64 = (-100_000..=100_000).map(|j| student_t_ln_pdf(j as f64 * h, 5.0).exp() * h).sum();
        assert!((total - 1.0).abs() < 1e-6);
    }
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Normal location model with known variance and a normal prior on the
/// mean, reduced to the sample mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalConjugateSpec {
    pub prior_mean: f64,
    pub prior_variance: f64,
    pub sampling_variance: f64,
    pub n: u64,
    pub xbar: f64,
}

fn normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
}

impl NormalConjugateSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.prior_variance > 0.0 && self.sampling_variance > 0.0) {
            return Err(Error::InvalidInput("variances must be strictly positive".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("sample size must be at least 1".into()));
        }
        if !(self.prior_mean.is_finite() && self.xbar.is_finite() && self.prior_variance.is_finite()) {
            return Err(Error::InvalidInput("spec values must be finite".into()));
        }
        Ok(())
    }

    /// Posterior mean and variance of the location.
    pub fn posterior(&self) -> Result<(f64, f64)> {
        self.validate()?;
        let n = self.n as f64;
        let precision = n / self.sampling_variance + 1.0 / self.prior_variance;
        let variance = 1.0 / precision;
        let mean = variance * (n * self.xbar / self.sampling_variance + self.prior_mean / self.prior_variance);
        Ok((mean, variance))
    }

    /// Variance of the sample mean's prior predictive.
    pub fn predictive_variance(&self) -> f64 {
        self.sampling_variance / self.n as f64 + self.prior_variance
    }

    /// Prior predictive density of the sample mean at the observed value.
    pub fn prior_predictive_xbar(&self) -> Result<f64> {
        self.validate()?;
        Ok(normal_pdf(self.xbar, self.prior_mean, self.predictive_variance()))
    }

    /// Prior density of the location at `mu`.
    pub fn prior_density(&self, mu: f64) -> f64 {
        normal_pdf(mu, self.prior_mean, self.prior_variance)
    }

    /// Density of the sample mean at the observed value given location `mu`.
    pub fn likelihood(&self, mu: f64) -> f64 {
        normal_pdf(self.xbar, mu, self.sampling_variance / self.n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_trapezoid, Grid};
    use proptest::prelude::*;

    fn spec(mu: f64, tau2: f64, n: u64, xbar: f64) -> NormalConjugateSpec {
        NormalConjugateSpec { prior_mean: mu, prior_variance: tau2, sampling_variance: 1.0, n, xbar }
    }

    #[test]
    fn worked_posterior() {
        // (n/σ²+1/τ²)⁻¹ (n x̄/σ² + μ/τ²) with n=10, x̄=9.87, μ=9, τ²=1
        let (m, v) = spec(9.0, 1.0, 10, 9.87).posterior().unwrap();
        assert!((m - (98.7 + 9.0) / 11.0).abs() < 1e-12);
        assert!((m - 9.7909).abs() < 1e-4);
        assert!((v - 0.0909).abs() < 1e-4);
    }

    #[test]
    fn diffuse_prior_limit() {
        let (m, v) = spec(0.0, 1e12, 4, 3.0).posterior().unwrap();
        assert!((m - 3.0).abs() < 1e-9);
        assert!((v - 0.25).abs() < 1e-9);
    }

    #[test]
    fn sequential_updates_compose() {
        let xs = [1.2, 0.4, -0.3, 2.2, 0.9];
        let (mut mu, mut tau2) = (0.5, 3.0);
        for x in xs {
            let (m, v) = spec(mu, tau2, 1, x).posterior().unwrap();
            mu = m;
            tau2 = v;
        }
        let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
        let (m, v) = spec(0.5, 3.0, xs.len() as u64, xbar).posterior().unwrap();
        assert!((m - mu).abs() < 1e-12 && (v - tau2).abs() < 1e-12);
    }

    #[test]
    fn predictive_value() {
        // N(12, 1/5 + 2) density at 10.92
        let p = spec(12.0, 2.0, 5, 10.92).prior_predictive_xbar().unwrap();
        let direct = (-(1.08f64).powi(2) / (2.0 * 2.2)).exp() / (2.0 * PI * 2.2).sqrt();
        assert!((p - direct).abs() < 1e-15);
        assert!((p - 0.2063).abs() < 1e-3);
    }

    #[test]
    fn predictive_peaks_at_prior_mean() {
        let at_mode = spec(12.0, 2.0, 5, 12.0).prior_predictive_xbar().unwrap();
        for x in [11.0, 11.9, 12.1, 14.0] {
            assert!(spec(12.0, 2.0, 5, x).prior_predictive_xbar().unwrap() < at_mode);
        }
    }

    #[test]
    fn rejects_bad_variance() {
        assert!(spec(0.0, 0.0, 5, 1.0).posterior().is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_match_grid_bayes(
            mu in -20.0f64..20.0,
            tau2 in 0.05f64..10.0,
            sigma2 in 0.05f64..10.0,
            n in 1u64..50,
            offset in -2.0f64..2.0,
        ) {
            let s = NormalConjugateSpec {
                prior_mean: mu,
                prior_variance: tau2,
                sampling_variance: sigma2,
                n,
                xbar: mu + offset * s_pred(tau2, sigma2, n),
            };
            let (pm, pv) = s.posterior().unwrap();
            let sd = tau2.sqrt().min((sigma2 / n as f64).sqrt());
            let grid = Grid::covering(&[(pm, pv.sqrt()), (mu, tau2.sqrt())], 10.0, 20001).unwrap();
            prop_assume!(grid.step < sd / 20.0);
            let joint: Vec<f64> = grid.nodes().map(|m| s.prior_density(m) * s.likelihood(m)).collect();
            let m = integrate_trapezoid(&joint, grid.step).unwrap();
            let exact = s.prior_predictive_xbar().unwrap();
            prop_assert!((m - exact).abs() < 1e-6 * exact.max(1.0));
            let first: Vec<f64> = grid.nodes().zip(&joint).map(|(x, j)| x * j / m).collect();
            let mean = integrate_trapezoid(&first, grid.step).unwrap();
            prop_assert!((mean - pm).abs() < 1e-6 * (1.0 + pm.abs()));
            let second: Vec<f64> = grid.nodes().zip(&joint).map(|(x, j)| (x - mean).powi(2) * j / m).collect();
            prop_assert!((integrate_trapezoid(&second, grid.step).unwrap() - pv).abs() < 1e-6 * (1.0 + pv));
        }
    }

    fn s_pred(tau2: f64, sigma2: f64, n: u64) -> f64 {
        (tau2 + sigma2 / n as f64).sqrt()
    }
}

//! Prior elicitation for the two-parameter normal regression prior
//! `β | σ² ~ N₂(0, τ₀²σ²I)`, `1/σ² ~ Gamma(α₁, rate α₂)`.

use serde::{Deserialize, Serialize};

use crate::numerics::special::{gamma_cdf, gamma_quantile, normal_quantile};
use crate::{find_root_monotone, Error, Result};

/// Elicitation targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElicitationInput {
    /// Virtual-certainty level.
    pub gamma: f64,
    /// Half-width of the plausible response range.
    pub m0: f64,
    /// Lower bound on the half-length of the response interval.
    pub s1: f64,
    /// Upper bound on the half-length of the response interval.
    pub s2: f64,
    /// Predictor-range factor, `ζ₀² = 1 + max x²`.
    pub zeta0: f64,
}

impl ElicitationInput {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidInput(format!("gamma must lie in (0,1), got {}", self.gamma)));
        }
        if !(self.m0 > 0.0) {
            return Err(Error::InvalidInput(format!("m0 must be positive, got {}", self.m0)));
        }
        if !(self.s1 > 0.0 && self.s1 < self.s2 && self.s2.is_finite()) {
            return Err(Error::InvalidInput(format!("need 0 < s1 < s2, got s1={}, s2={}", self.s1, self.s2)));
        }
        if !(self.zeta0 > 1.0 && self.zeta0 <= std::f64::consts::SQRT_2 + 1e-12) {
            return Err(Error::InvalidInput(format!("zeta0 must lie in (1, sqrt 2], got {}", self.zeta0)));
        }
        Ok(())
    }
}

/// Elicited hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionPrior {
    pub tau0: f64,
    /// Gamma shape of `1/σ²`.
    pub alpha1: f64,
    /// Gamma rate of `1/σ²`.
    pub alpha2: f64,
}

impl RegressionPrior {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau0 > 0.0 && self.alpha1 > 0.0 && self.alpha2 > 0.0)
            || !(self.tau0 * self.alpha1 * self.alpha2).is_finite()
        {
            return Err(Error::InvalidInput(format!("prior hyperparameters must be positive: {self:?}")));
        }
        Ok(())
    }

    /// Scale of the marginal prior `τ₀√(α₂/α₁)·t_{2α₁}` of a coefficient.
    pub fn coefficient_scale(&self) -> f64 {
        self.tau0 * (self.alpha2 / self.alpha1).sqrt()
    }

    /// Marginal prior density of a single coefficient.
    pub fn coefficient_density(&self, beta: f64) -> f64 {
        let scale = self.coefficient_scale();
        (crate::numerics::special::student_t_ln_pdf(beta / scale, 2.0 * self.alpha1) - scale.ln()).exp()
    }
}

/// How the normal quantile `z_{(1+γ)/2}` in the gamma equations is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum QuantileConvention {
    /// `z_p = Φ⁻¹((1+p)/2)`, the half-width of a central interval of
    /// content `p`.
    #[default]
    TwoSided,
    /// `z_p = Φ⁻¹(p)`.
    Standard,
}

impl QuantileConvention {
    /// `z_{(1+γ)/2}`. Only its square enters the equations, and
    /// `z²_{(1−γ)/2}` equals it by symmetry.
    pub fn z(&self, gamma: f64) -> Result<f64> {
        let p = (1.0 + gamma) / 2.0;
        match self {
            Self::TwoSided => normal_quantile((1.0 + p) / 2.0),
            Self::Standard => normal_quantile(p),
        }
    }
}

/// `τ₀ = m₀ / (s₂ ζ₀)`.
pub fn elicit_tau0(input: &ElicitationInput) -> Result<f64> {
    input.validate()?;
    Ok(input.m0 / (input.s2 * input.zeta0))
}

const BRACKET: (f64, f64) = (0.1, 100.0);
const BRACKET_LIMIT: (f64, f64) = (1e-4, 1e6);
const MONOTONE_PROBES: usize = 64;

struct GammaEquations {
    upper: f64,
    lower: f64,
    z2: f64,
    s1: f64,
    s2: f64,
}

impl GammaEquations {
    /// Solves the first equation for `α₂` given `α₁`.
    fn alpha2(&self, alpha1: f64) -> Result<f64> {
        Ok(gamma_quantile(alpha1, 1.0, self.upper)? * self.s1 * self.s1 / self.z2)
    }

    fn first_residual(&self, alpha1: f64, alpha2: f64) -> Result<f64> {
        Ok(gamma_cdf(alpha1, 1.0, alpha2 * self.z2 / (self.s1 * self.s1))? - self.upper)
    }

    fn second_residual(&self, alpha1: f64, alpha2: f64) -> Result<f64> {
        Ok(gamma_cdf(alpha1, 1.0, alpha2 * self.z2 / (self.s2 * self.s2))? - self.lower)
    }

    /// Second-equation residual along the curve where the first holds.
    fn path_residual(&self, log_alpha1: f64) -> Result<f64> {
        let alpha1 = log_alpha1.exp();
        self.second_residual(alpha1, self.alpha2(alpha1)?)
    }

    fn check_monotone(&self, lo: f64, hi: f64) -> Result<()> {
        let values = (0..MONOTONE_PROBES)
            .map(|j| self.path_residual(lo + (hi - lo) * j as f64 / (MONOTONE_PROBES - 1) as f64))
            .collect::<Result<Vec<_>>>()?;
        let increasing = values.windows(2).all(|w| w[1] >= w[0]);
        let decreasing = values.windows(2).all(|w| w[1] <= w[0]);
        if increasing || decreasing {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "second gamma equation is not monotone in alpha1 on [{:.3e}, {:.3e}]",
                lo.exp(),
                hi.exp()
            )))
        }
    }
}

/// Solves the two gamma-CDF equations for `(α₁, α₂)`.
///
/// For each `α₁` the first equation fixes `α₂`. The residual of the second
/// equation along that curve is monotone in `α₁`, so `α₁` is found by
/// bisection on `log α₁`, widening the bracket if needed.
pub fn elicit_gamma(input: &ElicitationInput, convention: QuantileConvention, tol: f64) -> Result<(f64, f64)> {
    input.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let z = convention.z(input.gamma)?;
    let eq = GammaEquations {
        upper: (1.0 + input.gamma) / 2.0,
        lower: (1.0 - input.gamma) / 2.0,
        z2: z * z,
        s1: input.s1,
        s2: input.s2,
    };
    let (mut lo, mut hi) = (BRACKET.0.ln(), BRACKET.1.ln());
    while eq.path_residual(lo)?.signum() == eq.path_residual(hi)?.signum() {
        lo -= std::f64::consts::LN_10;
        hi += std::f64::consts::LN_10;
        if lo < BRACKET_LIMIT.0.ln() || hi > BRACKET_LIMIT.1.ln() {
            return Err(Error::NoConvergence { operation: "elicit_gamma bracket search", iterations: 0 });
        }
    }
    eq.check_monotone(lo, hi)?;
    let log_alpha1 = find_root_monotone(|l| eq.path_residual(l).unwrap_or(f64::NAN), lo, hi, 1e-14)?;
    let alpha1 = log_alpha1.exp();
    let alpha2 = eq.alpha2(alpha1)?;
    let worst = eq.first_residual(alpha1, alpha2)?.abs().max(eq.second_residual(alpha1, alpha2)?.abs());
    if worst > tol {
        return Err(Error::NoConvergence { operation: "elicit_gamma", iterations: 0 });
    }
    Ok((alpha1, alpha2))
}

/// Full elicitation with the default quantile convention.
pub fn elicit(input: &ElicitationInput, tol: f64) -> Result<RegressionPrior> {
    let tau0 = elicit_tau0(input)?;
    let (alpha1, alpha2) = elicit_gamma(input, QuantileConvention::default(), tol)?;
    Ok(RegressionPrior { tau0, alpha1, alpha2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> ElicitationInput {
        ElicitationInput { gamma: 0.99, m0: 30.0, s1: 10.0, s2: 40.0, zeta0: std::f64::consts::SQRT_2 }
    }

    #[test]
    fn tau0_formula() {
        assert!((elicit_tau0(&example()).unwrap() - 0.530330).abs() < 1e-4);
        let unit = ElicitationInput { m0: 40.0 * 1.2, zeta0: 1.2, ..example() };
        assert!((elicit_tau0(&unit).unwrap() - 1.0).abs() < 1e-12);
        let doubled = ElicitationInput { m0: 60.0, ..example() };
        assert!((elicit_tau0(&doubled).unwrap() - 2.0 * elicit_tau0(&example()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn gamma_hyperparameters() {
        let (a1, a2) = elicit_gamma(&example(), QuantileConvention::TwoSided, 1e-10).unwrap();
        assert!((a1 - 4.05).abs() < 0.05, "{a1}");
        assert!((a2 - 140.39).abs() < 1.0, "{a2}");
        let z = QuantileConvention::TwoSided.z(0.99).unwrap();
        assert!((gamma_cdf(a1, 1.0, a2 * z * z / 100.0).unwrap() - 0.995).abs() < 1e-8);
        assert!((gamma_cdf(a1, 1.0, a2 * z * z / 1600.0).unwrap() - 0.005).abs() < 1e-8);
    }

    #[test]
    fn shape_independent_of_convention() {
        let (a1, a2) = elicit_gamma(&example(), QuantileConvention::Standard, 1e-10).unwrap();
        let (b1, b2) = elicit_gamma(&example(), QuantileConvention::TwoSided, 1e-10).unwrap();
        assert!((a1 - b1).abs() < 1e-8);
        assert!(a2 > b2);
    }

    #[test]
    fn elicited_prior_reproduces_interval() {
        let input = example();
        let prior = elicit(&input, 1e-10).unwrap();
        let z = QuantileConvention::TwoSided.z(input.gamma).unwrap();
        // s1/z <= σ <= s2/z  <=>  z²/s2² <= 1/σ² <= z²/s1²
        let content = gamma_cdf(prior.alpha1, prior.alpha2, z * z / (input.s1 * input.s1)).unwrap()
            - gamma_cdf(prior.alpha1, prior.alpha2, z * z / (input.s2 * input.s2)).unwrap();
        assert!((content - input.gamma).abs() < 0.005);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(elicit_gamma(&ElicitationInput { s1: 40.0, ..example() }, QuantileConvention::TwoSided, 1e-8).is_err());
        assert!(elicit_tau0(&ElicitationInput { zeta0: 2.0, ..example() }).is_err());
    }

    #[test]
    fn coefficient_density_at_zero() {
        let p = RegressionPrior { tau0: 0.53, alpha1: 4.05, alpha2: 140.39 };
        let nu = 2.0 * p.alpha1;
        let scale = p.coefficient_scale();
        let t0 = statrs::function::gamma::gamma((nu + 1.0) / 2.0)
            / (statrs::function::gamma::gamma(nu / 2.0) * (nu * std::f64::consts::PI).sqrt());
        assert!((p.coefficient_density(0.0) - t0 / scale).abs() < 1e-9);
    }

    /// Lower regularized gamma by its power series.
    fn series_gamma_cdf(shape: f64, x: f64) -> f64 {
        let mut term = 1.0 / shape;
        let mut total = term;
        for k in 1..10_000 {
            term *= x / (shape + k as f64);
            total += term;
            if term < total * 1e-17 {
                break;
            }
        }
        (shape * x.ln() - x - crate::numerics::special::ln_gamma(shape)).exp() * total
    }

    proptest! {
        #[test]
        fn rate_rescaling(shape in 0.2f64..20.0, rate in 0.01f64..50.0, x in 0.001f64..2.0) {
            let lhs = gamma_cdf(shape, rate, x).unwrap();
            prop_assert!((lhs - series_gamma_cdf(shape, rate * x)).abs() < 1e-9);
        }
    }
}

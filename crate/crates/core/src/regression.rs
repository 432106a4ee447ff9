//! Simple linear regression with normal or Student errors: data
//! reduction to `(b, s, a)`, ancillary-conditioned model weights by
//! importance sampling, and evidence for the slope.

use std::f64::consts::PI;
use std::io::Read;

use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{Density, GridDensity};
use crate::elicitation::RegressionPrior;
use crate::evidence::{relative_belief, summarize, EvidenceFunction, EvidenceSummary};
use crate::numerics::special::{ln_gamma, student_t_ln_pdf};
use crate::numerics::{log_importance_normalizer, log_sum_exp, sample, DistributionSpec, Grid, SeededGenerator};
use crate::{check_simplex, Error, Result};

/// Centered response with an orthonormal design `X = (1/√n, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionData {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Least-squares coefficients `X'y`.
    pub b: [f64; 2],
    /// Residual norm `‖y − Xb‖`.
    pub s: f64,
    /// `(y − Xb)/s`, or zeros when the fit is exact.
    pub a: Vec<f64>,
}

impl RegressionData {
    /// Subtracts `center[0] + center[1]·x` from the response and
    /// standardizes the predictor to mean 0 and norm 1.
    pub fn preprocess(raw_y: &[f64], raw_x: &[f64], center: [f64; 2]) -> Result<Self> {
        let n = raw_y.len();
        if raw_x.len() != n {
            return Err(Error::InvalidInput(format!("{} responses but {} predictor values", n, raw_x.len())));
        }
        if n <= 3 {
            return Err(Error::InvalidInput(format!("need at least 4 observations, got {n}")));
        }
        if let Some(index) = raw_y.iter().chain(raw_x).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: index % n, context: "regression data".into() });
        }
        let y: Vec<f64> = raw_y.iter().zip(raw_x).map(|(y, x)| y - center[0] - center[1] * x).collect();
        let mean = raw_x.iter().sum::<f64>() / n as f64;
        let centered: Vec<f64> = raw_x.iter().map(|x| x - mean).collect();
        let norm = centered.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = raw_x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        if !(norm > 1e-12 * scale) {
            return Err(Error::InvalidInput("predictor is constant".into()));
        }
        let x: Vec<f64> = centered.iter().map(|v| v / norm).collect();
        let root_n = (n as f64).sqrt();
        let b = [y.iter().sum::<f64>() / root_n, x.iter().zip(&y).map(|(x, y)| x * y).sum()];
        let residuals: Vec<f64> = y.iter().zip(&x).map(|(y, x)| y - b[0] / root_n - b[1] * x).collect();
        let s = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
        let fit_scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let (s, a) =
            if s > 1e-12 * fit_scale { (s, residuals.iter().map(|r| r / s).collect()) } else { (0.0, vec![0.0; n]) };
        Ok(Self { x, y, b, s, a })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    fn mean_at(&self, beta: [f64; 2], j: usize) -> f64 {
        beta[0] / (self.len() as f64).sqrt() + beta[1] * self.x[j]
    }
}

#[derive(Debug, Deserialize)]
struct IncomeInvestmentRow {
    #[allow(dead_code)]
    year: i32,
    income: f64,
    investment: f64,
}

/// Reads `year,income,investment` rows and returns `(income, investment)`.
pub fn read_income_investment<R: Read>(reader: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut income = Vec::new();
    let mut investment = Vec::new();
    for row in csv::Reader::from_reader(reader).deserialize::<IncomeInvestmentRow>() {
        let row = row.map_err(|e| Error::InvalidInput(format!("income/investment table: {e}")))?;
        income.push(row.income);
        investment.push(row.investment);
    }
    Ok((income, investment))
}

/// Error distribution, standardized to unit variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ErrorFamily {
    Normal,
    /// `t_λ / √(λ/(λ−2))`.
    Student {
        lambda: f64,
    },
}

impl ErrorFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Normal => Ok(()),
            Self::Student { lambda } if *lambda > 2.0 && lambda.is_finite() => Ok(()),
            Self::Student { lambda } => {
                Err(Error::InvalidInput(format!("Student errors need lambda > 2, got {lambda}")))
            }
        }
    }

    pub fn log_density(&self, z: f64) -> f64 {
        match self {
            Self::Normal => -0.5 * z * z - 0.5 * (2.0 * PI).ln(),
            Self::Student { lambda } => {
                let c = (lambda / (lambda - 2.0)).sqrt();
                student_t_ln_pdf(c * z, *lambda) + c.ln()
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Normal => "normal".into(),
            Self::Student { lambda } => format!("t{lambda}"),
        }
    }
}

/// Log of `s^{n−3} σ^{−n} Π f((b₁−β₁)/σ√n + (b₂−β₂)x_i/σ + s a_i/σ)`, the
/// unnormalized density of `(b, s)` given the ancillary.
pub fn log_conditional_density_bs(
    data: &RegressionData,
    b: [f64; 2],
    s: f64,
    beta: [f64; 2],
    sigma: f64,
    family: ErrorFamily,
) -> Result<f64> {
    if !(s > 0.0 && sigma > 0.0) {
        return Err(Error::InvalidInput("s and sigma must be positive".into()));
    }
    let n = data.len() as f64;
    let root_n = n.sqrt();
    let log_f: f64 = (0..data.len())
        .map(|j| family.log_density(((b[0] - beta[0]) / root_n + (b[1] - beta[1]) * data.x[j] + s * data.a[j]) / sigma))
        .sum();
    Ok((n - 3.0) * s.ln() - n * sigma.ln() + log_f)
}

pub fn conditional_density_bs(
    data: &RegressionData,
    b: [f64; 2],
    s: f64,
    beta: [f64; 2],
    sigma: f64,
    family: ErrorFamily,
) -> Result<f64> {
    Ok(log_conditional_density_bs(data, b, s, beta, sigma, family)?.exp())
}

/// Importance proposal over `(β, 1/σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Proposal {
    /// Normal-theory posterior with the gamma shape and rate halved and the
    /// coefficient covariance doubled.
    #[default]
    TemperedConjugate,
    Prior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub draws: usize,
    pub seed: u64,
    pub ess_floor: f64,
    pub proposal: Proposal,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self { draws: 100_000, seed: 0, ess_floor: 500.0, proposal: Proposal::default() }
    }
}

/// `β | σ² ~ N₂(mean, scale·σ²I)`, `1/σ² ~ Gamma(shape, rate)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct NormalGamma {
    mean: [f64; 2],
    scale: f64,
    shape: f64,
    rate: f64,
}

impl NormalGamma {
    fn prior(prior: &RegressionPrior) -> Self {
        Self { mean: [0.0, 0.0], scale: prior.tau0 * prior.tau0, shape: prior.alpha1, rate: prior.alpha2 }
    }

    /// Conjugate posterior under normal errors, using `X'X = I`.
    fn conjugate_posterior(prior: &RegressionPrior, data: &RegressionData) -> Self {
        let t2 = prior.tau0 * prior.tau0;
        let shrink = t2 / (1.0 + t2);
        let b2 = data.b[0] * data.b[0] + data.b[1] * data.b[1];
        Self {
            mean: [shrink * data.b[0], shrink * data.b[1]],
            scale: shrink,
            shape: prior.alpha1 + data.len() as f64 / 2.0,
            rate: prior.alpha2 + 0.5 * (data.s * data.s + b2 / (1.0 + t2)),
        }
    }

    fn tempered(self) -> Self {
        Self { scale: 2.0 * self.scale, shape: self.shape / 2.0, rate: self.rate / 2.0, ..self }
    }

    fn precision_spec(&self) -> DistributionSpec {
        DistributionSpec::GammaRate { shape: self.shape, rate: self.rate }
    }

    fn coefficient_spec(&self, k: usize, precision: f64) -> DistributionSpec {
        DistributionSpec::Normal { mean: self.mean[k], sd: (self.scale / precision).sqrt() }
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> Result<([f64; 2], f64)> {
        let precision = scalar(sample(&self.precision_spec(), rng)?)?;
        let b0 = scalar(sample(&self.coefficient_spec(0, precision), rng)?)?;
        let b1 = scalar(sample(&self.coefficient_spec(1, precision), rng)?)?;
        Ok(([b0, b1], precision))
    }

    fn log_density(&self, beta: [f64; 2], precision: f64) -> Result<f64> {
        Ok(self.precision_spec().log_pdf(precision)?
            + self.coefficient_spec(0, precision).log_pdf(beta[0])?
            + self.coefficient_spec(1, precision).log_pdf(beta[1])?)
    }

    /// Density of `(β₁, 1/σ²)` with `β₂` integrated out.
    fn log_density_without_slope(&self, beta1: f64, precision: f64) -> Result<f64> {
        Ok(self.precision_spec().log_pdf(precision)? + self.coefficient_spec(0, precision).log_pdf(beta1)?)
    }
}

fn scalar(draw: crate::numerics::Draw) -> Result<f64> {
    draw.scalar().ok_or_else(|| Error::InvalidInput("expected a scalar draw".into()))
}

fn log_likelihood(data: &RegressionData, beta: [f64; 2], precision: f64, family: ErrorFamily) -> f64 {
    let root = precision.sqrt();
    let n = data.len() as f64;
    (0..data.len()).map(|j| family.log_density((data.y[j] - data.mean_at(beta, j)) * root)).sum::<f64>()
        + 0.5 * n * precision.ln()
}

/// Closed-form normal-error marginal likelihood `m(y)` on the log scale.
pub fn normal_log_marginal(data: &RegressionData, prior: &RegressionPrior) -> Result<f64> {
    prior.validate()?;
    let post = NormalGamma::conjugate_posterior(prior, data);
    let n = data.len() as f64;
    let t2 = prior.tau0 * prior.tau0;
    Ok(-0.5 * n * (2.0 * PI).ln() - (1.0 + t2).ln() + prior.alpha1 * prior.alpha2.ln() - ln_gamma(prior.alpha1)
        + ln_gamma(post.shape)
        - post.shape * post.rate.ln())
}

/// `log ∫∫∫ s^{n−3} Π f(u₁/√n + u₂x_i + s a_i) du₁ du₂ ds`, the
/// family-specific part of the ancillary density, with its relative
/// standard error.
pub fn log_ancillary_normalizer(data: &RegressionData, family: ErrorFamily, mc: &MonteCarlo) -> Result<(f64, f64)> {
    family.validate()?;
    let n = data.len() as f64;
    if let ErrorFamily::Normal = family {
        // the exponent sums to -(u₁² + u₂² + s²)/2 because a ⟂ X and ‖a‖ = 1
        return Ok((-(n - 2.0) / 2.0 * (2.0 * PI).ln() + (n - 4.0) / 2.0 * 2f64.ln() + ln_gamma((n - 2.0) / 2.0), 0.0));
    }
    if data.s == 0.0 {
        return Err(Error::InvalidInput("the ancillary is undefined for an exact fit".into()));
    }
    let u = DistributionSpec::StudentT { location: 0.0, scale: 1.2, df: 5.0 };
    let log_s = DistributionSpec::StudentT { location: 0.5 * (n - 3.0).ln(), scale: 0.3, df: 5.0 };
    let generator = SeededGenerator::new(mc.seed).derive(u64::MAX);
    let log_w = (0..mc.draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = generator.derive(i as u64).rng();
            let u1 = scalar(sample(&u, &mut rng)?)?;
            let u2 = scalar(sample(&u, &mut rng)?)?;
            let v = scalar(sample(&log_s, &mut rng)?)?;
            let s = v.exp();
            let integrand: f64 = (0..data.len())
                .map(|j| family.log_density(u1 / n.sqrt() + u2 * data.x[j] + s * data.a[j]))
                .sum::<f64>()
                + (n - 2.0) * v;
            Ok(integrand - u.log_pdf(u1)? - u.log_pdf(u2)? - log_s.log_pdf(v)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let est = log_importance_normalizer(&log_w)?;
    if est.effective_sample_size < mc.ess_floor {
        return Err(Error::LowEffectiveSampleSize { ess: est.effective_sample_size, floor: mc.ess_floor });
    }
    Ok((est.log_mean, est.relative_error))
}

/// Per-family model weights with Monte Carlo standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelWeights {
    pub families: Vec<ErrorFamily>,
    pub weights: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// Estimated `log m_i(y)`.
    pub log_marginals: Vec<f64>,
    pub log_ancillary: Vec<f64>,
    pub effective_sample_sizes: Vec<f64>,
}

fn proposal_for(prior: &RegressionPrior, data: &RegressionData, proposal: Proposal) -> NormalGamma {
    match proposal {
        Proposal::TemperedConjugate => NormalGamma::conjugate_posterior(prior, data).tempered(),
        Proposal::Prior => NormalGamma::prior(prior),
    }
}

/// Draws shared by every family: `(β, 1/σ², log prior − log proposal)`.
fn shared_draws(prior: &RegressionPrior, data: &RegressionData, mc: &MonteCarlo) -> Result<Vec<([f64; 2], f64, f64)>> {
    let target = NormalGamma::prior(prior);
    let proposal = proposal_for(prior, data, mc.proposal);
    let generator = SeededGenerator::new(mc.seed);
    (0..mc.draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = generator.derive(i as u64).rng();
            let (beta, precision) = proposal.draw(&mut rng)?;
            let shift = match mc.proposal {
                Proposal::Prior => 0.0,
                Proposal::TemperedConjugate => {
                    target.log_density(beta, precision)? - proposal.log_density(beta, precision)?
                }
            };
            Ok((beta, precision, shift))
        })
        .collect()
}

/// Weights `∝ α_i m_i(b, s | a)`, where `m_i(y)` is estimated by importance
/// sampling on draws shared across families and the ancillary density
/// supplies the conditioning.
pub fn model_weights_regression(
    data: &RegressionData,
    prior: &RegressionPrior,
    families: &[ErrorFamily],
    alpha: &[f64],
    mc: &MonteCarlo,
) -> Result<ModelWeights> {
    prior.validate()?;
    if families.len() < 2 {
        return Err(Error::InvalidInput("at least two error families are required".into()));
    }
    if alpha.len() != families.len() {
        return Err(Error::InvalidInput(format!("{} families but {} prior weights", families.len(), alpha.len())));
    }
    check_simplex(alpha)?;
    for f in families {
        f.validate()?;
    }
    if data.s == 0.0 {
        return Err(Error::InvalidInput("the ancillary is undefined for an exact fit".into()));
    }
    let draws = shared_draws(prior, data, mc)?;
    let mut log_marginals = Vec::new();
    let mut relative = Vec::new();
    let mut log_ancillary = Vec::new();
    let mut ess = Vec::new();
    for family in families {
        let log_w: Vec<f64> = draws
            .par_iter()
            .map(|(beta, precision, shift)| shift + log_likelihood(data, *beta, *precision, *family))
            .collect();
        let est = log_importance_normalizer(&log_w)?;
        if est.effective_sample_size < mc.ess_floor {
            return Err(Error::LowEffectiveSampleSize { ess: est.effective_sample_size, floor: mc.ess_floor });
        }
        let (log_c, c_err) = log_ancillary_normalizer(data, *family, mc)?;
        log_marginals.push(est.log_mean);
        log_ancillary.push(log_c);
        relative.push((est.relative_error.powi(2) + c_err.powi(2)).sqrt());
        ess.push(est.effective_sample_size);
    }
    let logs: Vec<f64> = log_marginals.iter().zip(&log_ancillary).map(|(m, c)| m - c).collect();
    let weights = crate::context2::normalize_log_weights(alpha, &logs)?;
    // delta method, ignoring the covariance induced by the shared draws
    let standard_errors = (0..weights.len())
        .map(|i| {
            let var: f64 = (0..weights.len())
                .map(|j| {
                    let d = if i == j { 1.0 - weights[i] } else { weights[j] };
                    (d * relative[j]).powi(2)
                })
                .sum();
            weights[i] * var.sqrt()
        })
        .collect();
    Ok(ModelWeights {
        families: families.to_vec(),
        weights,
        standard_errors,
        log_marginals,
        log_ancillary,
        effective_sample_sizes: ess,
    })
}

/// Evidence for the slope `β₂` under one error family.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeEvidence {
    pub prior: GridDensity<f64>,
    pub posterior: GridDensity<f64>,
    pub evidence: EvidenceFunction<GridDensity<f64>>,
    pub summary: EvidenceSummary<f64>,
}

/// Prior `τ₀√(α₂/α₁) t_{2α₁}` and the importance-sampled posterior of `β₂`
/// on `grid`. The posterior at each node averages
/// `π(β₁, β₂, σ) L / q(β₁, σ)` over proposal draws of `(β₁, 1/σ²)`.
pub fn beta2_evidence(
    data: &RegressionData,
    prior: &RegressionPrior,
    family: ErrorFamily,
    grid: Grid<f64>,
    mc: &MonteCarlo,
    psi0: Option<f64>,
    epsilon: f64,
) -> Result<SlopeEvidence> {
    prior.validate()?;
    family.validate()?;
    let target = NormalGamma::prior(prior);
    let proposal = proposal_for(prior, data, mc.proposal);
    let generator = SeededGenerator::new(mc.seed).derive(u64::MAX - 1);
    let draws = (0..mc.draws)
        .into_par_iter()
        .map(|i| {
            let mut rng = generator.derive(i as u64).rng();
            let (beta, precision) = proposal.draw(&mut rng)?;
            Ok((beta[0], precision, proposal.log_density_without_slope(beta[0], precision)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let log_post = grid
        .nodes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&slope| {
            let terms = draws
                .iter()
                .map(|&(beta1, precision, log_q)| {
                    let beta = [beta1, slope];
                    Ok(target.log_density(beta, precision)? + log_likelihood(data, beta, precision, family) - log_q)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(log_sum_exp(&terms))
        })
        .collect::<Result<Vec<f64>>>()?;
    let shift = log_post.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::DegenerateWeights);
    }
    let prior_density = GridDensity::from_fn(grid, |b| prior.coefficient_density(b))?;
    let (posterior, _) = prior_density.renormalized(log_post.iter().map(|l| (l - shift).exp()).collect())?;
    let evidence = relative_belief(&prior_density, &posterior, epsilon)?;
    let summary = summarize(&evidence, &prior_density, &posterior, psi0.map(|p| grid.nearest(p)))?;
    Ok(SlopeEvidence { prior: prior_density, posterior, evidence, summary })
}

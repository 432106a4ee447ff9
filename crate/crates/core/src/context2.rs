//! Combining bases that share data but not models: mixture evidence, the
//! Jeffrey posterior, ancillary-conditioned and condition-★ weights, and
//! prediction of a future normal observation.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::base::InferenceBase;
use crate::distributions::{Density, GridDensity, NormalConjugateSpec};
use crate::evidence::{base_evidence, summarize, EvidenceFunction, EvidenceSummary};
use crate::numerics::{log_sum_exp, special::ln_gamma, Grid};
use crate::{check_simplex, normalize, Error, Result};

/// Bases over a common interest support, each possibly under its own
/// model, all conditioned on the same data.
#[derive(Debug, Clone, PartialEq)]
pub struct HeterogeneousEnsemble<D: Density> {
    bases: Vec<InferenceBase<D>>,
    alpha: Vec<D::Scalar>,
    weights: Vec<D::Scalar>,
}

impl<D: Density> HeterogeneousEnsemble<D> {
    /// Weights `α_i m_i(x) / Σ α_j m_j(x)`.
    pub fn new(bases: Vec<InferenceBase<D>>, alpha: Vec<D::Scalar>) -> Result<Self> {
        Self::check_shape(&bases, &alpha)?;
        let raw: Vec<D::Scalar> = bases.iter().zip(&alpha).map(|(b, a)| a.clone() * b.predictive().clone()).collect();
        let weights = normalize(&raw)?;
        Ok(Self { bases, alpha, weights })
    }

    /// Uses externally resolved posterior weights, e.g. ancillary-conditioned
    /// or condition-★ weights.
    pub fn with_weights(bases: Vec<InferenceBase<D>>, alpha: Vec<D::Scalar>, weights: Vec<D::Scalar>) -> Result<Self> {
        Self::check_shape(&bases, &alpha)?;
        if weights.len() != bases.len() {
            return Err(Error::InvalidInput("one posterior weight per base is required".into()));
        }
        check_simplex(&weights)?;
        Ok(Self { bases, alpha, weights })
    }

    fn check_shape(bases: &[InferenceBase<D>], alpha: &[D::Scalar]) -> Result<()> {
        if bases.is_empty() {
            return Err(Error::InvalidInput("an ensemble needs at least one base".into()));
        }
        if alpha.len() != bases.len() {
            return Err(Error::InvalidInput(format!("{} bases but {} prior weights", bases.len(), alpha.len())));
        }
        check_simplex(alpha)?;
        for b in &bases[1..] {
            bases[0]
                .prior()
                .check_same_support(b.prior())
                .map_err(|_| Error::SupportMismatch("ensemble members use different interest grids".into()))?;
        }
        Ok(())
    }

    pub fn bases(&self) -> &[InferenceBase<D>] {
        &self.bases
    }

    pub fn alpha(&self) -> &[D::Scalar] {
        &self.alpha
    }

    pub fn weights(&self) -> &[D::Scalar] {
        &self.weights
    }

    fn mix(&self, columns: &[Vec<D::Scalar>], weights: &[D::Scalar]) -> Result<D> {
        let len = columns[0].len();
        let values = (0..len)
            .map(|j| columns.iter().zip(weights).fold(D::Scalar::zero(), |acc, (c, w)| acc + w.clone() * c[j].clone()))
            .collect();
        Ok(self.bases[0].prior().renormalized(values)?.0)
    }

    /// `α`-mixture of the priors.
    pub fn prior_mixture(&self) -> Result<D> {
        let columns: Vec<_> = self.bases.iter().map(|b| b.prior().values().to_vec()).collect();
        self.mix(&columns, &self.alpha)
    }
}

/// Rejects ensembles whose bases were fitted to different data sets.
pub fn check_shared_data<T: PartialEq + std::fmt::Debug>(data_ids: &[T]) -> Result<()> {
    match data_ids.iter().find(|d| *d != &data_ids[0]) {
        None => Ok(()),
        Some(other) => Err(Error::ContextMismatch(format!(
            "bases use different data sets ({:?} and {other:?}); only a common data set is supported",
            data_ids[0]
        ))),
    }
}

/// `RB* = Σ w_i RB_i`.
pub fn mixture_rb<D: Density>(ensemble: &HeterogeneousEnsemble<D>, epsilon: D::Scalar) -> Result<EvidenceFunction<D>> {
    let functions = ensemble.bases.iter().map(|b| base_evidence(b, epsilon.clone())).collect::<Result<Vec<_>>>()?;
    crate::evidence::combine_evidence_linear(&functions, &ensemble.weights)
}

/// `Σ w_i π_i(·|x)`.
pub fn jeffrey_posterior<D: Density>(ensemble: &HeterogeneousEnsemble<D>) -> Result<D> {
    let columns = ensemble.bases.iter().map(|b| Ok(b.posterior()?.values().to_vec())).collect::<Result<Vec<_>>>()?;
    ensemble.mix(&columns, &ensemble.weights)
}

/// Summary of `RB*`, with posterior contents from the Jeffrey posterior and
/// prior contents from the `α`-mixture of priors.
pub fn summarize_ensemble<D: Density>(
    ensemble: &HeterogeneousEnsemble<D>,
    epsilon: D::Scalar,
    psi0: Option<usize>,
) -> Result<(EvidenceFunction<D>, EvidenceSummary<D::Scalar>)> {
    let rb = mixture_rb(ensemble, epsilon)?;
    let summary = summarize(&rb, &ensemble.prior_mixture()?, &jeffrey_posterior(ensemble)?, psi0)?;
    Ok((rb, summary))
}

/// Normalizes `α_i · exp(log_values_i)` in log space.
pub fn normalize_log_weights(alpha: &[f64], log_values: &[f64]) -> Result<Vec<f64>> {
    if alpha.len() != log_values.len() {
        return Err(Error::InvalidInput("one value per base is required".into()));
    }
    check_simplex(alpha)?;
    if let Some(index) = log_values.iter().position(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::NonFinite { index, context: "log predictive".into() });
    }
    let logs: Vec<f64> =
        alpha.iter().zip(log_values).map(|(a, l)| if *a > 0.0 { a.ln() + l } else { f64::NEG_INFINITY }).collect();
    let total = log_sum_exp(&logs);
    if total == f64::NEG_INFINITY {
        return Err(Error::DegenerateWeights);
    }
    Ok(logs.iter().map(|l| (l - total).exp()).collect())
}

/// Conditional prior predictive `m_i(L(x) | A(x))` of a location model,
/// where `L(x) = x̄` and `A(x) = x − x̄1`.
pub trait ConditionalPredictive: Send + Sync {
    fn log_conditional_predictive(&self, sample: &[f64]) -> Result<f64>;
}

/// Splits a sample into its mean and location ancillary.
pub fn location_ancillary(sample: &[f64]) -> Result<(f64, Vec<f64>)> {
    if sample.is_empty() {
        return Err(Error::InvalidInput("empty sample".into()));
    }
    if let Some(index) = sample.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index, context: "sample value".into() });
    }
    let mean = sample.iter().sum::<f64>() / sample.len() as f64;
    Ok((mean, sample.iter().map(|x| x - mean).collect()))
}

/// Normal location model `N(μ, σ0²)` with prior `μ ~ N(μ0, τ²)`. The mean
/// is independent of the ancillary, so the conditional predictive is the
/// `N(μ0, σ0²/n + τ²)` density at `x̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalLocationBase {
    pub prior_mean: f64,
    pub prior_variance: f64,
    pub sampling_variance: f64,
}

impl ConditionalPredictive for NormalLocationBase {
    fn log_conditional_predictive(&self, sample: &[f64]) -> Result<f64> {
        let (xbar, _) = location_ancillary(sample)?;
        if !(self.prior_variance > 0.0 && self.sampling_variance > 0.0) {
            return Err(Error::InvalidInput("variances must be positive".into()));
        }
        let v = self.sampling_variance / sample.len() as f64 + self.prior_variance;
        Ok(-0.5 * (2.0 * PI * v).ln() - (xbar - self.prior_mean).powi(2) / (2.0 * v))
    }
}

/// Cauchy location model with scale `η0` and prior `μ ~ N(μ0, τ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyLocationBase {
    pub prior_mean: f64,
    pub prior_variance: f64,
    pub scale: f64,
}

impl CauchyLocationBase {
    fn log_g(&self, z: f64) -> f64 {
        -(PI * self.scale).ln() - (z / self.scale).powi(2).ln_1p()
    }

    fn log_joint(&self, shifts: &[f64], u: f64) -> f64 {
        shifts.iter().map(|a| self.log_g(u + a)).sum()
    }

    /// `log ∫ exp(h(u)) du` by the trapezoid rule on a grid wide enough for
    /// the algebraic tails and fine enough for the peak.
    fn log_integral(&self, lo: f64, hi: f64, width: f64, h: impl Fn(f64) -> f64) -> Result<f64> {
        let step = (width / 40.0).min(self.scale / 40.0);
        let len = (((hi - lo) / step).ceil() as usize + 1).clamp(2001, 400_001);
        let grid = Grid::new(lo, hi, len)?;
        let logs: Vec<f64> = grid.nodes().map(&h).collect();
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::NotNormalizable("conditional predictive integrand vanishes".into()));
        }
        let scaled: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
        Ok(max + crate::numerics::integrate_trapezoid(&scaled, grid.step)?.ln())
    }
}

impl ConditionalPredictive for CauchyLocationBase {
    fn log_conditional_predictive(&self, sample: &[f64]) -> Result<f64> {
        if !(self.prior_variance > 0.0 && self.scale > 0.0) {
            return Err(Error::InvalidInput("prior variance and scale must be positive".into()));
        }
        let (xbar, a) = location_ancillary(sample)?;
        let n = sample.len() as f64;
        let tau = self.prior_variance.sqrt();
        let peak = self.scale / n.sqrt();
        let spread = a.iter().cloned().fold(0.0, |m: f64, v| m.max(v.abs()));
        let reach = spread + 200.0 * self.scale;

        // numerator: ∫ Π g(x_j − μ) π(μ) dμ, with μ = x̄ − u
        let log_prior = |mu: f64| {
            -0.5 * (2.0 * PI * self.prior_variance).ln() - (mu - self.prior_mean).powi(2) / (2.0 * self.prior_variance)
        };
        let lo = (xbar - reach).min(self.prior_mean - 12.0 * tau);
        let hi = (xbar + reach).max(self.prior_mean + 12.0 * tau);
        let numerator = self.log_integral(lo, hi, peak.min(tau), |mu| self.log_joint(&a, xbar - mu) + log_prior(mu))?;
        // denominator: ∫ Π g(u + a_j) du
        let denominator = self.log_integral(-reach, reach, peak, |u| self.log_joint(&a, u))?;
        Ok(numerator - denominator)
    }
}

/// Weights `∝ α_i m_i(L(x)|A(x))`.
pub fn ancillary_weights(alpha: &[f64], bases: &[&dyn ConditionalPredictive], sample: &[f64]) -> Result<Vec<f64>> {
    if bases.len() != alpha.len() {
        return Err(Error::InvalidInput(format!("{} bases but {} prior weights", bases.len(), alpha.len())));
    }
    let logs = bases.iter().map(|b| b.log_conditional_predictive(sample)).collect::<Result<Vec<_>>>()?;
    normalize_log_weights(alpha, &logs)
}

/// Finite ancillary partition with model-specific but parameter-free cell
/// probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionStarSpec {
    /// `cell_probabilities[i][j]` is `p_ij`.
    pub cell_probabilities: Vec<Vec<f64>>,
    pub counts: Vec<u64>,
    pub alpha_star: Vec<f64>,
}

impl ConditionStarSpec {
    pub fn validate(&self) -> Result<()> {
        check_simplex(&self.alpha_star)?;
        if self.cell_probabilities.len() != self.alpha_star.len() {
            return Err(Error::InvalidInput("one cell-probability row per base is required".into()));
        }
        for (i, row) in self.cell_probabilities.iter().enumerate() {
            if row.len() != self.counts.len() {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} cells, counts have {}",
                    row.len(),
                    self.counts.len()
                )));
            }
            check_simplex(row).map_err(|e| Error::NotSimplex(format!("row {i}: {e}")))?;
        }
        Ok(())
    }

    /// `log f_i(n̆)`, the multinomial log mass of the observed counts.
    pub fn log_multinomial(&self, i: usize) -> f64 {
        let n: u64 = self.counts.iter().sum();
        let mut total = ln_gamma(n as f64 + 1.0);
        for (c, p) in self.counts.iter().zip(&self.cell_probabilities[i]) {
            if *c == 0 {
                continue;
            }
            if *p == 0.0 {
                return f64::NEG_INFINITY;
            }
            total += *c as f64 * p.ln() - ln_gamma(*c as f64 + 1.0);
        }
        total
    }
}

/// Weights `∝ (α*_i / f_i(n̆)) m_i`, with `m_i` given on the log scale.
pub fn condition_star_weights(spec: &ConditionStarSpec, log_predictives: &[f64]) -> Result<Vec<f64>> {
    spec.validate()?;
    if log_predictives.len() != spec.alpha_star.len() {
        return Err(Error::InvalidInput("one predictive per base is required".into()));
    }
    let log_f: Vec<f64> = (0..spec.alpha_star.len()).map(|i| spec.log_multinomial(i)).collect();
    if log_f.iter().all(|l| *l == f64::NEG_INFINITY) {
        return Err(Error::InvalidInput("every base gives the observed counts probability zero".into()));
    }
    let logs: Vec<f64> = log_f
        .iter()
        .zip(log_predictives)
        .map(|(f, m)| if *f == f64::NEG_INFINITY { f64::NEG_INFINITY } else { m - f })
        .collect();
    normalize_log_weights(&spec.alpha_star, &logs)
}

/// Which weights to use as `n → ∞` in prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LimitWeights {
    /// The limit of the finite-`n` weights, `∝ N(μ; μ_i, τ_i²)`.
    #[default]
    Derived,
    /// `∝ N(μ; μ_i, σ0² + τ_i²)`.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PredictionMode {
    FiniteN,
    /// `n → ∞` with true mean `mu`.
    Limit {
        mu: f64,
        weights: LimitWeights,
    },
}

/// Evidence about a future `y ~ N(μ, σ0²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub weights: Vec<f64>,
    pub evidence: EvidenceFunction<GridDensity<f64>>,
    pub summary: EvidenceSummary<f64>,
    pub prior: GridDensity<f64>,
    pub posterior: GridDensity<f64>,
    pub per_base: Vec<(EvidenceFunction<GridDensity<f64>>, EvidenceSummary<f64>)>,
}

fn normal_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt()
}

/// Default `y` grid: union of the prior predictive ranges ± 8 sd.
pub fn prediction_grid(specs: &[NormalConjugateSpec], len: usize) -> Result<Grid<f64>> {
    let ranges: Vec<(f64, f64)> =
        specs.iter().map(|s| (s.prior_mean, (s.sampling_variance + s.prior_variance).sqrt())).collect();
    Grid::covering(&ranges, 8.0, len)
}

/// Per-base prior and posterior densities of `y` and the mixture weights.
type PredictiveParts = (Vec<GridDensity<f64>>, Vec<GridDensity<f64>>, Vec<f64>);

fn predictive_parts(
    specs: &[NormalConjugateSpec],
    alpha: &[f64],
    mode: PredictionMode,
    grid: Grid<f64>,
) -> Result<PredictiveParts> {
    if specs.is_empty() || specs.len() != alpha.len() {
        return Err(Error::InvalidInput("one prior weight per base is required".into()));
    }
    let mut priors = Vec::new();
    let mut posts = Vec::new();
    let mut logs = Vec::new();
    for s in specs {
        s.validate()?;
        let s2 = s.sampling_variance;
        priors.push(GridDensity::from_fn(grid, |y| normal_pdf(y, s.prior_mean, s2 + s.prior_variance))?);
        match mode {
            PredictionMode::FiniteN => {
                let (m, v) = s.posterior()?;
                posts.push(GridDensity::from_fn(grid, |y| normal_pdf(y, m, v + s2))?);
                logs.push(s.prior_predictive_xbar()?.ln());
            }
            PredictionMode::Limit { mu, weights } => {
                posts.push(GridDensity::from_fn(grid, |y| normal_pdf(y, mu, s2))?);
                let var = match weights {
                    LimitWeights::Derived => s.prior_variance,
                    LimitWeights::AsPrinted => s2 + s.prior_variance,
                };
                logs.push(normal_pdf(mu, s.prior_mean, var).ln());
            }
        }
    }
    let weights = normalize_log_weights(alpha, &logs)?;
    Ok((priors, posts, weights))
}

/// Mixture evidence for a future observation in the normal location
/// setting, with weights from the observed `x̄` or their `n → ∞` limit.
pub fn predict(
    specs: &[NormalConjugateSpec],
    alpha: &[f64],
    mode: PredictionMode,
    grid: Grid<f64>,
    epsilon: f64,
) -> Result<Prediction> {
    let (priors, posts, weights) = predictive_parts(specs, alpha, mode, grid)?;
    let bases = priors
        .iter()
        .zip(&posts)
        .map(|(p, q)| {
            // likelihood proportional to RB_{i,Y}; the base's m then integrates to 1
            let rb = p.values().iter().zip(q.values()).map(|(a, b)| b / a).collect();
            InferenceBase::new(p.clone(), rb)
        })
        .collect::<Result<Vec<_>>>()?;
    let per_base = bases
        .iter()
        .map(|b| {
            let rb = base_evidence(b, epsilon)?;
            let s = summarize(&rb, b.prior(), &b.posterior()?, None)?;
            Ok((rb, s))
        })
        .collect::<Result<Vec<_>>>()?;
    let ensemble = HeterogeneousEnsemble::with_weights(bases, alpha.to_vec(), weights.clone())?;
    let (evidence, summary) = summarize_ensemble(&ensemble, epsilon, None)?;
    Ok(Prediction {
        weights,
        evidence,
        summary,
        prior: ensemble.prior_mixture()?,
        posterior: jeffrey_posterior(&ensemble)?,
        per_base,
    })
}

/// The `y`-dependent-weight mixture obtained by dividing the Jeffrey
/// posterior by the `α`-mixture prior. Diagnostic only: it is not a linear
/// pool of evidence.
pub fn full_predictive_rb(
    specs: &[NormalConjugateSpec],
    alpha: &[f64],
    mode: PredictionMode,
    grid: Grid<f64>,
    epsilon: f64,
) -> Result<EvidenceFunction<GridDensity<f64>>> {
    let prediction = predict(specs, alpha, mode, grid, epsilon)?;
    crate::evidence::relative_belief(&prediction.prior, &prediction.posterior, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{FiniteDensity, Labels};

    fn table_specs(n: u64, xbar: f64) -> Vec<NormalConjugateSpec> {
        [(12.0, 2.0), (9.0, 1.0), (11.0, 4.0)]
            .iter()
            .map(|&(m, t)| NormalConjugateSpec { prior_mean: m, prior_variance: t, sampling_variance: 1.0, n, xbar })
            .collect()
    }

    #[test]
    fn finite_weights_equal_predictive_weights() {
        let specs = table_specs(10, 9.87);
        let alpha = vec![1.0 / 3.0; 3];
        let grid = prediction_grid(&specs, 4097).unwrap();
        let p = predict(&specs, &alpha, PredictionMode::FiniteN, grid, 1e-9).unwrap();
        let m: Vec<f64> = specs.iter().map(|s| s.prior_predictive_xbar().unwrap()).collect();
        let expected = normalize(&m).unwrap();
        for (a, b) in p.weights.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn full_predictive_rb_differs() {
        let specs = table_specs(10, 9.87);
        let alpha = vec![1.0 / 3.0; 3];
        let grid = prediction_grid(&specs, 1025).unwrap();
        let star = predict(&specs, &alpha, PredictionMode::FiniteN, grid, 1e-9).unwrap().evidence;
        let full = full_predictive_rb(&specs, &alpha, PredictionMode::FiniteN, grid, 1e-9).unwrap();
        let max_gap = star.values().iter().zip(full.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(max_gap > 1e-3);
    }

    #[test]
    fn single_base_mixture_is_its_rb() {
        let l = Labels::numbered("t", 3).unwrap();
        let b = InferenceBase::new(FiniteDensity::new(l, vec![0.2, 0.3, 0.5]).unwrap(), vec![0.1, 0.6, 0.3]).unwrap();
        let e = HeterogeneousEnsemble::new(vec![b.clone()], vec![1.0]).unwrap();
        assert_eq!(mixture_rb(&e, 1e-9).unwrap(), base_evidence(&b, 1e-9).unwrap());
        assert_eq!(jeffrey_posterior(&e).unwrap(), b.posterior().unwrap());
    }

    #[test]
    fn identical_cells_reduce_condition_star() {
        let spec = ConditionStarSpec {
            cell_probabilities: vec![vec![0.2, 0.8], vec![0.2, 0.8]],
            counts: vec![3, 7],
            alpha_star: vec![0.4, 0.6],
        };
        let logm = [(0.01f64).ln(), (0.03f64).ln()];
        let w = condition_star_weights(&spec, &logm).unwrap();
        let expected = normalize(&[0.4 * 0.01, 0.6 * 0.03]).unwrap();
        assert!((w[0] - expected[0]).abs() < 1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn impossible_counts_rejected() {
        let spec = ConditionStarSpec {
            cell_probabilities: vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            counts: vec![3, 7],
            alpha_star: vec![0.5, 0.5],
        };
        assert!(condition_star_weights(&spec, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn shared_data_required() {
        assert!(check_shared_data(&["x", "x"]).is_ok());
        assert!(matches!(check_shared_data(&["x", "y"]), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn normal_ancillary_weight_formula() {
        let sample = [0.3, -0.2, 0.8, 0.1];
        let base = NormalLocationBase { prior_mean: 0.0, prior_variance: 2.0, sampling_variance: 3.0 };
        let v: f64 = 3.0 / 4.0 + 2.0;
        let xbar = 0.25;
        let expected = v.powf(-0.5) * (-(xbar * xbar) / (2.0 * v)).exp() / (2.0 * PI).sqrt();
        assert!((base.log_conditional_predictive(&sample).unwrap() - expected.ln()).abs() < 1e-12);
    }
}

use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::{log_sum_exp, SeededGenerator};
use crate::{Error, Result};

/// Self-normalized importance-sampling estimate of `E_target[h]`, plus the
/// plain mean-weight estimate of the normalizing constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImportanceEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub effective_sample_size: f64,
    /// `mean(w)`, an unbiased estimate of `∫ target` when `target` is
    /// unnormalized.
    pub normalizer: f64,
    pub normalizer_standard_error: f64,
    pub draws: usize,
}

/// Mean of `exp(log_w)` on the log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalizer {
    pub log_mean: f64,
    /// Standard error of the mean relative to the mean itself.
    pub relative_error: f64,
    pub effective_sample_size: f64,
}

/// Estimate from precomputed importance weights and integrand values.
pub fn importance_estimate(weights: &[f64], values: &[f64]) -> Result<ImportanceEstimate> {
    if weights.len() != values.len() {
        return Err(Error::InvalidInput("weights and values differ in length".into()));
    }
    if weights.len() < 2 {
        return Err(Error::InvalidInput("importance sampling needs at least 2 draws".into()));
    }
    if let Some(index) = weights.iter().position(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::NonFinite { index, context: "importance weight".into() });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index, context: "integrand value".into() });
    }
    let n = weights.len() as f64;
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateWeights);
    }
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    let estimate = weights.iter().zip(values).map(|(w, h)| w * h).sum::<f64>() / total;
    let var_num: f64 = weights.iter().zip(values).map(|(w, h)| (w * (h - estimate)).powi(2)).sum();
    let normalizer = total / n;
    let var_w = weights.iter().map(|w| (w - normalizer).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(ImportanceEstimate {
        estimate,
        standard_error: var_num.sqrt() / total,
        effective_sample_size: total * total / sum_sq,
        normalizer,
        normalizer_standard_error: (var_w / n).sqrt(),
        draws: weights.len(),
    })
}

/// Draw `n` points with per-draw sub-streams of `generator`, weight them by
/// `exp(log_weight(x))` and average `h(x)`. Draws run in parallel but the
/// result does not depend on the thread count.
pub fn importance_estimate_with<X, D, W, H>(
    generator: SeededGenerator,
    n: usize,
    draw: D,
    log_weight: W,
    h: H,
) -> Result<ImportanceEstimate>
where
    X: Send,
    D: Fn(&mut ChaCha20Rng) -> Result<X> + Sync,
    W: Fn(&X) -> f64 + Sync,
    H: Fn(&X) -> f64 + Sync,
{
    let pairs = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = generator.derive(i as u64).rng();
            let x = draw(&mut rng)?;
            Ok((log_weight(&x), h(&x)))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let log_w: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let shift = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::DegenerateWeights);
    }
    let weights: Vec<f64> = log_w.iter().map(|l| (l - shift).exp()).collect();
    let values: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut est = importance_estimate(&weights, &values)?;
    let scale = shift.exp();
    est.normalizer *= scale;
    est.normalizer_standard_error *= scale;
    Ok(est)
}

/// Log of the mean weight, for weights given on the log scale.
pub fn log_importance_normalizer(log_weights: &[f64]) -> Result<LogNormalizer> {
    if log_weights.len() < 2 {
        return Err(Error::InvalidInput("importance sampling needs at least 2 draws".into()));
    }
    if let Some(index) = log_weights.iter().position(|l| l.is_nan() || *l == f64::INFINITY) {
        return Err(Error::NonFinite { index, context: "log importance weight".into() });
    }
    let n = log_weights.len() as f64;
    let lse = log_sum_exp(log_weights);
    if lse == f64::NEG_INFINITY {
        return Err(Error::DegenerateWeights);
    }
    let log_mean = lse - n.ln();
    let rel: Vec<f64> = log_weights.iter().map(|l| (l - log_mean).exp()).collect();
    let var = rel.iter().map(|r| (r - 1.0).powi(2)).sum::<f64>() / (n - 1.0);
    let sum: f64 = rel.iter().sum();
    let sum_sq: f64 = rel.iter().map(|r| r * r).sum();
    Ok(LogNormalizer { log_mean, relative_error: (var / n).sqrt(), effective_sample_size: sum * sum / sum_sq })
}

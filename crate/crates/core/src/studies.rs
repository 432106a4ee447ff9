//! Sensitivity of combined evidence to the pool weights, and simulation
//! checks of the large-sample limits on finite models.

use rayon::prelude::*;
use serde::Serialize;

use crate::context2::{condition_star_weights, normalize_log_weights, ConditionStarSpec};
use crate::distributions::{Density, FiniteDensity, FiniteModel, Support};
use crate::evidence::{linear_evidence, summarize, Verdict};
use crate::numerics::{log_sum_exp, sample, DistributionSpec, Draw, SeededGenerator};
use crate::pooling::{pool_priors, pooled_posterior, Degree, PoolSpec};
use crate::{check_simplex, Error, InferenceBase, Result};

/// Equal-width binned counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lower: f64,
    pub upper: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_values(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        let finite: Vec<f64> = values.iter().cloned().filter(|v| v.is_finite()).collect();
        let lower = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        let upper = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut counts = vec![0; bins];
        if finite.is_empty() {
            return Self { lower: 0.0, upper: 0.0, counts };
        }
        let width = (upper - lower) / bins as f64;
        for v in &finite {
            let k = if width > 0.0 { (((v - lower) / width) as usize).min(bins - 1) } else { 0 };
            counts[k] += 1;
        }
        Self { lower, upper, counts }
    }

    pub fn bin_width(&self) -> f64 {
        (self.upper - self.lower) / self.counts.len() as f64
    }
}

/// One Dirichlet draw of the pool weights and what it implies at `ψ₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessDraw {
    pub alpha: Vec<f64>,
    pub verdict: Verdict,
    pub strength: f64,
    /// Coordinate of the estimate, or its index on unordered supports.
    pub estimate: Option<f64>,
    pub prior_content: f64,
    pub posterior_content: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub alpha0: Vec<f64>,
    pub concentration: f64,
    pub baseline_verdict: Verdict,
    pub baseline_strength: f64,
    pub draws: Vec<RobustnessDraw>,
    /// Proportions of favor, against and neutral verdicts.
    pub proportions: [f64; 3],
    /// Proportion of draws whose verdict matches the `α₀` verdict.
    pub agreement: f64,
    pub estimates: Histogram,
    pub prior_contents: Histogram,
    pub posterior_contents: Histogram,
}

const HISTOGRAM_BINS: usize = 20;

fn linear_verdict<D: Density<Scalar = f64>>(
    bases: &[InferenceBase<D>],
    alpha: &[f64],
    psi0: usize,
    epsilon: f64,
) -> Result<RobustnessDraw> {
    let rb = linear_evidence(bases, alpha, epsilon)?;
    let spec = PoolSpec::new(Degree::linear(), alpha.to_vec())?;
    let priors: Vec<D> = bases.iter().map(|b| b.prior().clone()).collect();
    let prior = pool_priors(&priors, &spec)?.density;
    let posterior = pooled_posterior(bases, &spec)?;
    let summary = summarize(&rb, &prior, &posterior, Some(psi0))?;
    let support = rb.support();
    Ok(RobustnessDraw {
        alpha: alpha.to_vec(),
        verdict: rb.verdict(psi0),
        strength: summary.strength.unwrap_or(f64::NAN),
        estimate: summary.estimate.map(|j| support.coordinate(j).unwrap_or(j as f64)),
        prior_content: summary.prior_content,
        posterior_content: summary.posterior_content,
    })
}

/// Evidence at `ψ₀` under pool weights drawn from a Dirichlet with mode
/// `α₀`, parameterized as `1 + c·α₀`.
pub fn weight_robustness<D: Density<Scalar = f64>>(
    bases: &[InferenceBase<D>],
    alpha0: &[f64],
    concentration: f64,
    replicates: usize,
    psi0: usize,
    seed: u64,
    epsilon: f64,
) -> Result<RobustnessReport> {
    check_simplex(alpha0)?;
    if alpha0.iter().any(|a| *a <= 0.0) {
        return Err(Error::InvalidInput("alpha0 must lie in the interior of the simplex".into()));
    }
    if !(concentration > 0.0 && concentration.is_finite()) {
        return Err(Error::InvalidInput(format!("concentration must be positive, got {concentration}")));
    }
    if replicates == 0 {
        return Err(Error::InvalidInput("at least one replicate is required".into()));
    }
    if bases.is_empty() || psi0 >= bases[0].prior().len() {
        return Err(Error::InvalidInput(format!("psi0 index {psi0} out of range")));
    }
    let baseline = linear_verdict(bases, alpha0, psi0, epsilon)?;
    let dirichlet = DistributionSpec::Dirichlet { alpha: alpha0.iter().map(|a| 1.0 + concentration * a).collect() };
    let generator = SeededGenerator::new(seed);
    let draws = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = generator.derive(r as u64).rng();
            let alpha = match sample(&dirichlet, &mut rng)? {
                Draw::Vector(v) => crate::normalize(&v)?,
                _ => return Err(Error::InvalidInput("expected a vector draw".into())),
            };
            linear_verdict(bases, &alpha, psi0, epsilon)
        })
        .collect::<Result<Vec<_>>>()?;
    let share = |v: Verdict| draws.iter().filter(|d| d.verdict == v).count() as f64 / replicates as f64;
    let column = |f: fn(&RobustnessDraw) -> f64| {
        Histogram::from_values(&draws.iter().map(f).collect::<Vec<_>>(), HISTOGRAM_BINS)
    };
    Ok(RobustnessReport {
        alpha0: alpha0.to_vec(),
        concentration,
        baseline_verdict: baseline.verdict,
        baseline_strength: baseline.strength,
        proportions: [share(Verdict::Favor), share(Verdict::Against), share(Verdict::Neutral)],
        agreement: share(baseline.verdict),
        estimates: column(|d| d.estimate.unwrap_or(f64::NAN)),
        prior_contents: column(|d| d.prior_content),
        posterior_contents: column(|d| d.posterior_content),
        draws,
    })
}

/// Values tracked along one simulated sample path, one entry per `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    pub weights: Vec<Vec<f64>>,
    /// Combined relative belief at the tracked interest value.
    pub rb: Vec<f64>,
    /// Posterior mass of the true interest value.
    pub posterior_mass: Vec<f64>,
    /// Strength at the tracked value; Context I only.
    pub strength: Vec<f64>,
    /// `m_{1,α}/m_{t,α}`; Context I only.
    pub predictive_ratio: Vec<f64>,
}

/// Declared `n → ∞` limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Limits {
    pub weights: Vec<f64>,
    pub rb: f64,
    pub posterior_mass: f64,
    pub strength: Option<f64>,
    pub predictive_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrajectory {
    pub schedule: Vec<u64>,
    /// Indices of the models that contain the true distribution.
    pub true_models: Vec<usize>,
    pub paths: Vec<SamplePath>,
    pub limits: Limits,
}

/// Share of replicates whose final value lies within `tol` of each limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerminalCheck {
    pub weights: f64,
    pub rb: f64,
    pub posterior_mass: f64,
    pub strength: Option<f64>,
    pub predictive_ratio: Option<f64>,
}

impl TerminalCheck {
    /// The smallest pass rate over all tracked quantities.
    pub fn worst(&self) -> f64 {
        [Some(self.weights), Some(self.rb), Some(self.posterior_mass), self.strength, self.predictive_ratio]
            .into_iter()
            .flatten()
            .fold(1.0, f64::min)
    }
}

impl ConvergenceTrajectory {
    pub fn terminal_check(&self, tol: f64) -> TerminalCheck {
        let count = self.paths.len() as f64;
        let rate = |hit: &dyn Fn(&SamplePath) -> bool| self.paths.iter().filter(|p| hit(p)).count() as f64 / count;
        let near = |v: Option<&f64>, limit: f64| v.is_some_and(|v| (v - limit).abs() <= tol);
        TerminalCheck {
            weights: rate(&|p| {
                p.weights.last().is_some_and(|w| w.iter().zip(&self.limits.weights).all(|(a, b)| (a - b).abs() <= tol))
            }),
            rb: rate(&|p| near(p.rb.last(), self.limits.rb)),
            posterior_mass: rate(&|p| near(p.posterior_mass.last(), self.limits.posterior_mass)),
            strength: self.limits.strength.map(|l| rate(&|p| near(p.strength.last(), l))),
            predictive_ratio: self.limits.predictive_ratio.map(|l| rate(&|p| near(p.predictive_ratio.last(), l))),
        }
    }
}

/// Finite-parameter model with a prior per base and an interest map.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBase {
    pub model: FiniteModel<f64>,
    pub prior: FiniteDensity<f64>,
    /// Interest index of each parameter point.
    pub interest: Vec<usize>,
}

impl FiniteBase {
    fn validate(&self, interest_len: usize) -> Result<()> {
        if self.prior.len() != self.model.parameters().len() || self.interest.len() != self.prior.len() {
            return Err(Error::SupportMismatch("prior, model and interest map disagree on the parameter space".into()));
        }
        if self.prior.masses().iter().any(|p| *p <= 0.0) {
            return Err(Error::InvalidInput("priors must be positive at every parameter point".into()));
        }
        if self.interest.iter().any(|&k| k >= interest_len) {
            return Err(Error::InvalidInput("interest index out of range".into()));
        }
        Ok(())
    }

    /// `(log m(x), π(·|x))` from counts, computed on the log scale.
    fn update(&self, counts: &[u64]) -> Result<(f64, Vec<f64>)> {
        let ll = self.model.log_likelihood_counts(counts)?;
        let joint: Vec<f64> = ll.iter().zip(self.prior.masses()).map(|(l, p)| l + p.ln()).collect();
        let log_m = log_sum_exp(&joint);
        if log_m == f64::NEG_INFINITY {
            return Err(Error::NotNormalizable("data have probability zero under every parameter".into()));
        }
        Ok((log_m, joint.iter().map(|j| (j - log_m).exp()).collect()))
    }

    fn push_interest(&self, masses: &[f64], interest_len: usize) -> Vec<f64> {
        let mut out = vec![0.0; interest_len];
        for (k, m) in self.interest.iter().zip(masses) {
            out[*k] += m;
        }
        out
    }

    /// Index of the parameter point whose row equals `truth`, if any.
    fn true_parameter(&self, truth: &[f64]) -> Option<usize> {
        (0..self.prior.len()).find(|&t| self.model.row(t).iter().zip(truth).all(|(a, b)| (a - b).abs() <= 1e-12))
    }
}

fn cumulative_counts(truth: &[f64], schedule: &[u64], generator: SeededGenerator) -> Result<Vec<Vec<u64>>> {
    let mut rng = generator.rng();
    let mut counts = vec![0u64; truth.len()];
    let mut previous = 0;
    let mut out = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let spec = DistributionSpec::Multinomial { trials: n - previous, probs: truth.to_vec() };
        match sample(&spec, &mut rng)? {
            Draw::Counts(c) => counts.iter_mut().zip(c).for_each(|(a, b)| *a += b),
            _ => return Err(Error::InvalidInput("expected a count draw".into())),
        }
        previous = n;
        out.push(counts.clone());
    }
    Ok(out)
}

fn check_schedule(schedule: &[u64], replicates: usize) -> Result<()> {
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("the n schedule must be positive and strictly increasing".into()));
    }
    if replicates == 0 {
        return Err(Error::InvalidInput("at least one replicate is required".into()));
    }
    Ok(())
}

/// Powers of two `1, 2, 4, …, 2^k`.
pub fn doubling_schedule(max_exponent: u32) -> Vec<u64> {
    (0..=max_exponent).map(|k| 1u64 << k).collect()
}

/// Context I: several priors on one finite model.
#[derive(Debug, Clone, PartialEq)]
pub struct Context1Study {
    pub model: FiniteModel<f64>,
    pub priors: Vec<FiniteDensity<f64>>,
    pub alpha: Vec<f64>,
    pub interest: Vec<usize>,
    pub interest_len: usize,
    pub theta_true: usize,
    /// Tracked interest value.
    pub psi0: usize,
    /// Degree compared with the linear pool in the predictive ratio.
    pub degree: Degree<f64>,
}

/// Simulates samples from `θ_true` and tracks the linear-pool weights,
/// evidence at `ψ₀`, its strength, and `m_{1,α}/m_{t,α}`.
pub fn asymptotics_context1(
    study: &Context1Study,
    schedule: &[u64],
    replicates: usize,
    seed: u64,
) -> Result<ConvergenceTrajectory> {
    check_schedule(schedule, replicates)?;
    check_simplex(&study.alpha)?;
    if study.priors.len() != study.alpha.len() {
        return Err(Error::InvalidInput("one prior weight per prior is required".into()));
    }
    if study.theta_true >= study.model.parameters().len() {
        return Err(Error::InvalidInput(format!(
            "theta_true index {} is not in the parameter space",
            study.theta_true
        )));
    }
    if study.psi0 >= study.interest_len {
        return Err(Error::InvalidInput("psi0 out of range".into()));
    }
    let bases: Vec<FiniteBase> = study
        .priors
        .iter()
        .map(|p| FiniteBase { model: study.model.clone(), prior: p.clone(), interest: study.interest.clone() })
        .collect();
    for b in &bases {
        b.validate(study.interest_len)?;
    }
    let linear = pool_priors(&study.priors, &PoolSpec::new(Degree::linear(), study.alpha.clone())?)?.density;
    let pooled = pool_priors(&study.priors, &PoolSpec::new(study.degree.clone(), study.alpha.clone())?)?.density;
    let prior_interest = bases[0].push_interest(linear.masses(), study.interest_len);
    let psi_true = study.interest[study.theta_true];
    let theta = study.theta_true;
    let limits = Limits {
        weights: study
            .alpha
            .iter()
            .zip(&study.priors)
            .map(|(a, p)| a * p.masses()[theta] / linear.masses()[theta])
            .collect(),
        rb: if study.psi0 == psi_true { 1.0 / prior_interest[study.psi0] } else { 0.0 },
        posterior_mass: 1.0,
        strength: Some(if study.psi0 == psi_true { 1.0 } else { 0.0 }),
        predictive_ratio: Some(linear.masses()[theta] / pooled.masses()[theta]),
    };
    let truth = study.model.row(theta).to_vec();
    let generator = SeededGenerator::new(seed);
    let paths = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut path = SamplePath {
                weights: vec![],
                rb: vec![],
                posterior_mass: vec![],
                strength: vec![],
                predictive_ratio: vec![],
            };
            for counts in cumulative_counts(&truth, schedule, generator.derive(r as u64))? {
                let updates = bases.iter().map(|b| b.update(&counts)).collect::<Result<Vec<_>>>()?;
                let log_m: Vec<f64> = updates.iter().map(|u| u.0).collect();
                let w = normalize_log_weights(&study.alpha, &log_m)?;
                let mut post = vec![0.0; study.interest_len];
                for ((b, (_, p)), wi) in bases.iter().zip(&updates).zip(&w) {
                    for (k, v) in b.push_interest(p, study.interest_len).iter().enumerate() {
                        post[k] += wi * v;
                    }
                }
                let rb: Vec<f64> = post.iter().zip(&prior_interest).map(|(q, p)| q / p).collect();
                let strength = post.iter().zip(&rb).filter(|(_, r)| **r <= rb[study.psi0]).map(|(q, _)| q).sum();
                let ll = study.model.log_likelihood_counts(&counts)?;
                let lm = |prior: &FiniteDensity<f64>| {
                    log_sum_exp(&ll.iter().zip(prior.masses()).map(|(l, p)| l + p.ln()).collect::<Vec<_>>())
                };
                path.predictive_ratio.push((lm(&linear) - lm(&pooled)).exp());
                path.rb.push(rb[study.psi0]);
                path.strength.push(strength);
                path.posterior_mass.push(post[psi_true]);
                path.weights.push(w);
            }
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTrajectory { schedule: schedule.to_vec(), true_models: (0..bases.len()).collect(), paths, limits })
}

/// How Context II weights are formed.
#[derive(Debug, Clone, PartialEq)]
pub enum Context2Weighting {
    /// `∝ α_i m_i(x)`.
    Predictive { alpha: Vec<f64> },
    /// `∝ (α*_i / f_i(n̆)) m_i(x)` with cells given per sample point.
    ConditionStar { cells: Vec<usize>, alpha_star: Vec<f64> },
}

/// Context II: different finite models on one sample space.
#[derive(Debug, Clone, PartialEq)]
pub struct Context2Study {
    pub bases: Vec<FiniteBase>,
    pub interest_len: usize,
    /// Data-generating distribution over the sample space.
    pub truth: Vec<f64>,
    pub weighting: Context2Weighting,
}

impl Context2Study {
    /// Per-model cell probabilities, required not to depend on the
    /// parameter.
    fn cell_probabilities(&self, cells: &[usize]) -> Result<Vec<Vec<f64>>> {
        let m = cells.iter().max().map_or(0, |c| c + 1);
        self.bases
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let rows: Vec<Vec<f64>> = (0..b.prior.len())
                    .map(|t| {
                        let mut p = vec![0.0; m];
                        for (x, c) in cells.iter().enumerate() {
                            p[*c] += b.model.row(t)[x];
                        }
                        p
                    })
                    .collect();
                if rows.iter().any(|r| r.iter().zip(&rows[0]).any(|(a, b)| (a - b).abs() > 1e-12)) {
                    return Err(Error::InvalidInput(format!(
                        "cell probabilities of model {i} depend on the parameter"
                    )));
                }
                Ok(rows[0].clone())
            })
            .collect()
    }
}

/// Simulates samples from the true distribution and tracks the Context II
/// weights, `RB*` and the Jeffrey-posterior mass at `ψ_true`.
pub fn asymptotics_context2(
    study: &Context2Study,
    schedule: &[u64],
    replicates: usize,
    seed: u64,
) -> Result<ConvergenceTrajectory> {
    check_schedule(schedule, replicates)?;
    check_simplex(&study.truth)?;
    let k = study.bases.len();
    for b in &study.bases {
        b.validate(study.interest_len)?;
        if b.model.samples().len() != study.truth.len() {
            return Err(Error::SupportMismatch("models use different sample spaces".into()));
        }
    }
    let (alpha, cells) = match &study.weighting {
        Context2Weighting::Predictive { alpha } => (alpha.clone(), None),
        Context2Weighting::ConditionStar { cells, alpha_star } => {
            if cells.len() != study.truth.len() {
                return Err(Error::InvalidInput("one cell per sample point is required".into()));
            }
            (alpha_star.clone(), Some((cells.clone(), study.cell_probabilities(cells)?)))
        }
    };
    if alpha.len() != k {
        return Err(Error::InvalidInput(format!("{k} models but {} weights", alpha.len())));
    }
    check_simplex(&alpha)?;
    let true_points: Vec<Option<usize>> = study.bases.iter().map(|b| b.true_parameter(&study.truth)).collect();
    let true_models: Vec<usize> = (0..k).filter(|&i| true_points[i].is_some()).collect();
    if true_models.is_empty() {
        return Err(Error::InvalidInput("no model contains the true distribution".into()));
    }
    let psi_true = study.bases[true_models[0]].interest[true_points[true_models[0]].unwrap_or_default()];
    if true_models.iter().any(|&i| true_points[i].is_some_and(|t| study.bases[i].interest[t] != psi_true)) {
        return Err(Error::InvalidInput("models containing the truth disagree on the true interest value".into()));
    }
    let priors_interest: Vec<Vec<f64>> =
        study.bases.iter().map(|b| b.push_interest(b.prior.masses(), study.interest_len)).collect();
    let raw: Vec<f64> =
        (0..k).map(|i| true_points[i].map_or(0.0, |t| alpha[i] * study.bases[i].prior.masses()[t])).collect();
    let limit_weights = crate::normalize(&raw)?;
    let limits = Limits {
        rb: true_models.iter().map(|&i| limit_weights[i] / priors_interest[i][psi_true]).sum(),
        weights: limit_weights,
        posterior_mass: 1.0,
        strength: None,
        predictive_ratio: None,
    };
    let generator = SeededGenerator::new(seed);
    let paths = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut path = SamplePath {
                weights: vec![],
                rb: vec![],
                posterior_mass: vec![],
                strength: vec![],
                predictive_ratio: vec![],
            };
            for counts in cumulative_counts(&study.truth, schedule, generator.derive(r as u64))? {
                let updates = study.bases.iter().map(|b| b.update(&counts)).collect::<Result<Vec<_>>>()?;
                let log_m: Vec<f64> = updates.iter().map(|u| u.0).collect();
                let w = match &cells {
                    None => normalize_log_weights(&alpha, &log_m)?,
                    Some((cells, probs)) => {
                        let m = probs[0].len();
                        let mut cell_counts = vec![0u64; m];
                        for (x, c) in cells.iter().enumerate() {
                            cell_counts[*c] += counts[x];
                        }
                        let spec = ConditionStarSpec {
                            cell_probabilities: probs.clone(),
                            counts: cell_counts,
                            alpha_star: alpha.clone(),
                        };
                        condition_star_weights(&spec, &log_m)?
                    }
                };
                let mut post = vec![0.0; study.interest_len];
                let mut rb_true = 0.0;
                for (i, (b, (_, p))) in study.bases.iter().zip(&updates).enumerate() {
                    let pi = b.push_interest(p, study.interest_len);
                    for (kk, v) in pi.iter().enumerate() {
                        post[kk] += w[i] * v;
                    }
                    rb_true += w[i] * pi[psi_true] / priors_interest[i][psi_true];
                }
                path.rb.push(rb_true);
                path.posterior_mass.push(post[psi_true]);
                path.weights.push(w);
            }
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTrajectory { schedule: schedule.to_vec(), true_models, paths, limits })
}

/// Models and calibration used by the large-sample checks.
pub mod fixtures {
    use super::*;
    use crate::distributions::Labels;

    /// Terminal tolerance on every tracked quantity.
    pub const TERMINAL_TOLERANCE: f64 = 0.05;
    /// Required share of replicates within tolerance.
    pub const PASS_RATE: f64 = 0.9;
    pub const REPLICATES: usize = 50;
    /// `n` runs up to `2¹²`.
    pub const MAX_EXPONENT: u32 = 12;

    fn model(rows: Vec<Vec<f64>>) -> FiniteModel<f64> {
        let params = Labels::numbered("theta", rows.len()).expect("labels");
        let samples = Labels::numbered("x", rows[0].len()).expect("labels");
        FiniteModel::new(params, samples, rows).expect("valid fixture model")
    }

    fn prior(masses: Vec<f64>) -> FiniteDensity<f64> {
        FiniteDensity::new(Labels::numbered("theta", masses.len()).expect("labels"), masses)
            .expect("valid fixture prior")
    }

    /// Three parameter points, two priors, `Ψ` merging the last two points.
    pub fn context1(degree: Degree<f64>) -> Context1Study {
        Context1Study {
            model: model(vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.5, 0.3], vec![0.1, 0.3, 0.6]]),
            priors: vec![prior(vec![0.5, 0.3, 0.2]), prior(vec![0.2, 0.2, 0.6])],
            alpha: vec![0.4, 0.6],
            interest: vec![0, 1, 1],
            interest_len: 2,
            theta_true: 1,
            psi0: 1,
            degree,
        }
    }

    /// Sample space of four points; cells `{0,1}` and `{2,3}`.
    const CELLS: [usize; 4] = [0, 0, 1, 1];

    /// Rows with cell probabilities `(c, 1 − c)` and within-cell splits
    /// `(s, 1 − s)` and `(u, 1 − u)`.
    fn celled(c: f64, splits: &[(f64, f64)]) -> FiniteModel<f64> {
        model(splits.iter().map(|&(s, u)| vec![c * s, c * (1.0 - s), (1.0 - c) * u, (1.0 - c) * (1.0 - u)]).collect())
    }

    fn truth() -> Vec<f64> {
        vec![0.5 * 0.3, 0.5 * 0.7, 0.5 * 0.6, 0.5 * 0.4]
    }

    fn two_models(second_cell: f64, second_splits: &[(f64, f64)], weighting: Context2Weighting) -> Context2Study {
        Context2Study {
            bases: vec![
                FiniteBase {
                    model: celled(0.5, &[(0.3, 0.6), (0.8, 0.2), (0.5, 0.5)]),
                    prior: prior(vec![0.3, 0.3, 0.4]),
                    interest: vec![0, 1, 2],
                },
                FiniteBase {
                    model: celled(second_cell, second_splits),
                    prior: prior(vec![0.5, 0.5]),
                    interest: vec![0, 2],
                },
            ],
            interest_len: 3,
            truth: truth(),
            weighting,
        }
    }

    /// The truth lies in the first model only.
    pub fn one_true_model() -> Context2Study {
        two_models(0.5, &[(0.7, 0.3), (0.5, 0.5)], Context2Weighting::Predictive { alpha: vec![0.5, 0.5] })
    }

    /// The truth lies in both models.
    pub fn two_true_models() -> Context2Study {
        two_models(0.5, &[(0.3, 0.6), (0.9, 0.1)], Context2Weighting::Predictive { alpha: vec![0.3, 0.7] })
    }

    /// Condition-★ weighting with model-specific cell probabilities; the
    /// truth lies in the first model only, and no point of the second
    /// model shares its within-cell conditionals.
    pub fn condition_star_one_true() -> Context2Study {
        condition_star_with_second(&[(0.5, 0.4), (0.6, 0.2)])
    }

    /// As [`condition_star_one_true`], with the second model's points given
    /// as within-cell splits.
    pub fn condition_star_with_second(splits: &[(f64, f64)]) -> Context2Study {
        two_models(0.3, splits, Context2Weighting::ConditionStar { cells: CELLS.to_vec(), alpha_star: vec![0.4, 0.6] })
    }

    /// Condition-★ weighting with the truth in both models.
    pub fn condition_star_two_true() -> Context2Study {
        two_models(
            0.5,
            &[(0.3, 0.6), (0.9, 0.1)],
            Context2Weighting::ConditionStar { cells: CELLS.to_vec(), alpha_star: vec![0.25, 0.75] },
        )
    }
}

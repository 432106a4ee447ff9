//! Random finite Context I instances and the invariant checks run on them.

use evcomb::{
    base_evidence, consensus_audit, linear_evidence, pool_priors, pooled_base, posterior_weights, summarize, Degree,
    Density, FiniteDensity, InferenceBase, InterestMapping, Labels, PoolSpec, Verdict, DEFAULT_EPSILON,
};
use rand::Rng;

pub const DEGREES: [f64; 5] = [-2.0, 0.0, 0.5, 1.0, 2.0];
const REL_TOL: f64 = 1e-10;

/// Priors, likelihood at the observed data, pooling weights, an interest
/// map, an event and a hypothesis, all on a common finite Θ.
#[derive(Debug, Clone)]
pub struct Instance {
    pub priors: Vec<Vec<f64>>,
    pub likelihood: Vec<f64>,
    pub alpha: Vec<f64>,
    pub assignment: Vec<usize>,
    pub event: Vec<bool>,
    pub theta0: usize,
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    v.iter().map(|x| x / total).collect()
}

/// Relabels `raw` so its image is `0..m` with every label hit.
fn compress(raw: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    raw.iter()
        .map(|r| match seen.iter().position(|s| s == r) {
            Some(p) => p,
            None => {
                seen.push(*r);
                seen.len() - 1
            }
        })
        .collect()
}

impl Instance {
    pub fn new(
        priors: Vec<Vec<f64>>,
        likelihood: Vec<f64>,
        alpha: Vec<f64>,
        assignment: Vec<usize>,
        event: Vec<bool>,
        theta0: usize,
    ) -> Self {
        Self {
            priors: priors.iter().map(|p| normalized(p)).collect(),
            likelihood,
            alpha: normalized(&alpha),
            assignment: compress(&assignment),
            event,
            theta0,
        }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let k = rng.random_range(2..=4);
        let n = rng.random_range(2..=6);
        let priors = (0..k).map(|_| (0..n).map(|_| rng.random_range(0.01..1.0)).collect()).collect();
        let likelihood = (0..n).map(|_| rng.random_range(0.001..1.0)).collect();
        let alpha = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let assignment = (0..n).map(|_| rng.random_range(0..n)).collect();
        let event = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let theta0 = rng.random_range(0..n);
        Self::new(priors, likelihood, alpha, assignment, event, theta0)
    }

    fn labels(&self) -> Labels {
        Labels::numbered("theta", self.likelihood.len()).unwrap()
    }

    pub fn bases(&self) -> Vec<InferenceBase<FiniteDensity<f64>>> {
        let labels = self.labels();
        self.priors
            .iter()
            .map(|p| {
                InferenceBase::new(FiniteDensity::new(labels.clone(), p.clone()).unwrap(), self.likelihood.clone())
                    .unwrap()
            })
            .collect()
    }

    fn spec(&self, degree: Degree<f64>) -> PoolSpec<f64> {
        PoolSpec::new(degree, self.alpha.clone()).unwrap()
    }
}

/// Outcome of every invariant on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    pub predictive_inequality: bool,
    pub mixture_measure: bool,
    pub marginal_commutation: bool,
    pub scaling_identity: bool,
    pub consensus: bool,
    pub argmax: bool,
    pub consensus_subset: bool,
    pub content_sandwich: bool,
    pub pooled_region_sandwich: bool,
    pub event_sets: bool,
}

impl Checks {
    pub fn entries(&self) -> [(&'static str, bool); 10] {
        [
            ("predictive inequality", self.predictive_inequality),
            ("mixture measure", self.mixture_measure),
            ("marginal commutation", self.marginal_commutation),
            ("scaling identity", self.scaling_identity),
            ("consensus preservation", self.consensus),
            ("argmax equality", self.argmax),
            ("consensus subset", self.consensus_subset),
            ("content sandwich", self.content_sandwich),
            ("pooled-region sandwich", self.pooled_region_sandwich),
            ("event-set identity", self.event_sets),
        ]
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1e-300)
}

fn all_degrees() -> Vec<Degree<f64>> {
    let mut d = vec![Degree::NegInf];
    d.extend(DEGREES.iter().map(|&t| Degree::Finite(t)));
    d.push(Degree::PosInf);
    d
}

/// Direct `π_t(·|x)/π_t(·)` for the pooled prior of degree `t`.
fn direct_rb(bases: &[InferenceBase<FiniteDensity<f64>>], spec: &PoolSpec<f64>) -> (Vec<f64>, f64) {
    let pooled = pooled_base(bases, spec).unwrap();
    let posterior = pooled.posterior().unwrap();
    let rb = posterior.masses().iter().zip(pooled.prior().masses()).map(|(q, p)| q / p).collect();
    (rb, *pooled.predictive())
}

fn argmax(values: &[f64]) -> usize {
    (0..values.len()).fold(0, |best, j| if values[j] > values[best] { j } else { best })
}

fn mass(values: &[f64], keep: impl Fn(usize) -> bool) -> f64 {
    values.iter().enumerate().filter(|(j, _)| keep(*j)).map(|(_, v)| v).sum()
}

pub fn check(inst: &Instance) -> Checks {
    let bases = inst.bases();
    let k = bases.len();
    let n = inst.likelihood.len();
    let linear = inst.spec(Degree::linear());
    let m: Vec<f64> = bases.iter().map(|b| *b.predictive()).collect();
    let m1: f64 = inst.alpha.iter().zip(&m).map(|(a, mi)| a * mi).sum();
    let rb1: Vec<f64> = inst.likelihood.iter().map(|f| f / m1).collect();
    let posteriors: Vec<Vec<f64>> = bases.iter().map(|b| b.posterior().unwrap().masses().to_vec()).collect();
    let w = posterior_weights(&bases, &inst.alpha).unwrap();

    // m_{t,α}/c_t is the integral of the unnormalized power mean against f
    let priors: Vec<FiniteDensity<f64>> = bases.iter().map(|b| b.prior().clone()).collect();
    let predictive_inequality = DEGREES.iter().all(|&t| {
        let pooled = pool_priors(&priors, &inst.spec(Degree::Finite(t))).unwrap();
        let unnormalized = pooled.normalizer * pooled_base(&bases, &inst.spec(Degree::Finite(t))).unwrap().predictive();
        if t <= 1.0 {
            unnormalized <= m1 * (1.0 + 1e-12)
        } else {
            unnormalized >= m1 * (1.0 - 1e-12)
        }
    });

    let pooled_linear = pooled_base(&bases, &linear).unwrap();
    let pooled_post = pooled_linear.posterior().unwrap();
    let in_event = |j: usize| inst.event[j];
    let prior_mix: f64 = (0..k).map(|i| inst.alpha[i] * mass(&inst.priors[i], in_event)).sum();
    let post_mix: f64 = (0..k).map(|i| w[i] * mass(&posteriors[i], in_event)).sum();
    let mixture_measure = (pooled_linear.prior().mass_where(in_event) - prior_mix).abs() < 1e-12
        && (pooled_post.mass_where(in_event) - post_mix).abs() < 1e-12;

    let interest_len = inst.assignment.iter().max().unwrap() + 1;
    let mapping =
        InterestMapping::new(Labels::numbered("psi", interest_len).unwrap(), inst.assignment.clone()).unwrap();
    let pooled_marginal = mapping.pushforward(pooled_linear.prior()).unwrap();
    let marginals: Vec<FiniteDensity<f64>> = priors.iter().map(|p| mapping.pushforward(p).unwrap()).collect();
    let marginal_pool = pool_priors(&marginals, &linear).unwrap().density;
    let marginal_commutation =
        pooled_marginal.masses().iter().zip(marginal_pool.masses()).all(|(a, b)| (a - b).abs() < 1e-12);

    let direct: Vec<(Vec<f64>, f64)> = all_degrees().into_iter().map(|d| direct_rb(&bases, &inst.spec(d))).collect();
    let scaling_identity = direct.iter().all(|(rb, mt)| rb.iter().zip(&rb1).all(|(r, r1)| close(*r, m1 / mt * r1)));

    let inputs: Vec<_> = bases.iter().map(|b| base_evidence(b, DEFAULT_EPSILON).unwrap()).collect();
    let combined = linear_evidence(&bases, &inst.alpha, DEFAULT_EPSILON).unwrap();
    let consensus = consensus_audit(&inputs, &combined).unwrap().passed;

    // ties in RB_1 make any maximizer acceptable
    let top = rb1[argmax(&rb1)];
    let argmax = direct.iter().all(|(rb, _)| close(rb1[argmax(rb)], top));

    let regions: Vec<Vec<usize>> = inputs
        .iter()
        .zip(&bases)
        .map(|(e, b)| summarize(e, b.prior(), &b.posterior().unwrap(), None).unwrap().plausible)
        .collect();
    let pooled_summary = summarize(&combined, pooled_linear.prior(), &pooled_post, None).unwrap();
    let consensus_subset = (0..n)
        .filter(|&j| inputs.iter().all(|e| e.verdict(j) == Verdict::Favor))
        .all(|j| pooled_summary.plausible.contains(&j));
    let own: Vec<f64> = (0..k).map(|i| mass(&posteriors[i], |j| regions[i].contains(&j))).collect();
    let lo = own.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = own.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let content = pooled_summary.posterior_content;
    let content_sandwich = content >= lo - 1e-12 && content <= hi + 1e-12;
    let on_pooled: Vec<f64> = (0..k).map(|i| mass(&posteriors[i], |j| pooled_summary.plausible.contains(&j))).collect();
    let pooled_region_sandwich = content >= on_pooled.iter().cloned().fold(f64::INFINITY, f64::min) - 1e-12
        && content <= on_pooled.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1e-12;

    // points within rounding of the threshold are ties; skip them
    let threshold1 = rb1[inst.theta0];
    let event_sets = direct.iter().all(|(rb, _)| {
        (0..n).filter(|&j| !close(rb1[j], threshold1)).all(|j| (rb[j] <= rb[inst.theta0]) == (rb1[j] <= threshold1))
    });

    Checks {
        predictive_inequality,
        mixture_measure,
        marginal_commutation,
        scaling_identity,
        consensus,
        argmax,
        consensus_subset,
        content_sandwich,
        pooled_region_sandwich,
        event_sets,
    }
}

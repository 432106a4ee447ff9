//! Relative belief ratios, the evidence classification they induce, and
//! combination of evidence across inference bases.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::base::{check_context_one, InferenceBase};
use crate::distributions::{Density, Support};
use crate::pooling::{pooled_base, posterior_weights, PoolSpec};
use crate::{check_simplex, Error, Result, Scalar};

/// Default half-width of the band around 1 treated as "no evidence".
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Favor,
    Against,
    Neutral,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Favor => "favor",
            Verdict::Against => "against",
            Verdict::Neutral => "neutral",
        })
    }
}

/// Relative belief ratio over a support, with the tolerance used to
/// classify its values.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceFunction<D: Density> {
    support: D::Support,
    rb: Vec<D::Scalar>,
    epsilon: D::Scalar,
}

impl<D: Density> EvidenceFunction<D> {
    pub fn new(support: D::Support, rb: Vec<D::Scalar>, epsilon: D::Scalar) -> Result<Self> {
        if rb.len() != support.len() {
            return Err(Error::SupportMismatch(format!("{} ratios for {} points", rb.len(), support.len())));
        }
        if let Some(index) = rb.iter().position(|v| !v.is_finite_value() || *v < D::Scalar::zero()) {
            return Err(Error::NonFinite { index, context: "relative belief ratio".into() });
        }
        if epsilon < D::Scalar::zero() {
            return Err(Error::InvalidInput("epsilon must be non-negative".into()));
        }
        Ok(Self { support, rb, epsilon })
    }

    pub fn support(&self) -> &D::Support {
        &self.support
    }

    pub fn values(&self) -> &[D::Scalar] {
        &self.rb
    }

    pub fn epsilon(&self) -> &D::Scalar {
        &self.epsilon
    }

    pub fn verdict(&self, j: usize) -> Verdict {
        classify(&self.rb[j], &self.epsilon)
    }

    pub fn verdicts(&self) -> Vec<Verdict> {
        (0..self.rb.len()).map(|j| self.verdict(j)).collect()
    }

    /// Index of the largest ratio; ties go to the smallest index.
    pub fn argmax(&self) -> usize {
        self.rb.iter().enumerate().fold(0, |best, (j, v)| if *v > self.rb[best] { j } else { best })
    }

    pub fn is_constant_one(&self) -> bool {
        (0..self.rb.len()).all(|j| self.verdict(j) == Verdict::Neutral)
    }
}

fn classify<S: Scalar>(rb: &S, epsilon: &S) -> Verdict {
    if *rb > S::one() + epsilon.clone() {
        Verdict::Favor
    } else if *rb < S::one() - epsilon.clone() {
        Verdict::Against
    } else {
        Verdict::Neutral
    }
}

/// `posterior / prior`. Points where both vanish get ratio 1.
pub fn relative_belief<D: Density>(prior: &D, posterior: &D, epsilon: D::Scalar) -> Result<EvidenceFunction<D>> {
    prior.check_same_support(posterior)?;
    let rb = prior
        .values()
        .iter()
        .zip(posterior.values())
        .enumerate()
        .map(|(index, (p, q))| {
            if p.is_zero() {
                if q.is_zero() {
                    Ok(D::Scalar::one())
                } else {
                    Err(Error::ZeroPrior { index })
                }
            } else {
                Ok(q.clone() / p.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EvidenceFunction::new(prior.support().clone(), rb, epsilon)
}

/// `f_θ(x)/m(x)`, the base's relative belief ratio, defined at every point.
pub fn base_evidence<D: Density>(base: &InferenceBase<D>, epsilon: D::Scalar) -> Result<EvidenceFunction<D>> {
    let rb = base.likelihood().iter().map(|f| f.clone() / base.predictive().clone()).collect();
    EvidenceFunction::new(base.prior().support().clone(), rb, epsilon)
}

/// Pointwise `Σ w_i RB_i`.
pub fn combine_evidence_linear<D: Density>(
    functions: &[EvidenceFunction<D>],
    weights: &[D::Scalar],
) -> Result<EvidenceFunction<D>> {
    if functions.is_empty() || functions.len() != weights.len() {
        return Err(Error::InvalidInput(format!(
            "{} evidence functions but {} weights",
            functions.len(),
            weights.len()
        )));
    }
    check_simplex(weights)?;
    let first = &functions[0];
    if functions.iter().any(|f| f.support != first.support) {
        return Err(Error::SupportMismatch("evidence functions are on different supports".into()));
    }
    let rb = (0..first.rb.len())
        .map(|j| functions.iter().zip(weights).fold(D::Scalar::zero(), |acc, (f, w)| acc + w.clone() * f.rb[j].clone()))
        .collect();
    EvidenceFunction::new(first.support.clone(), rb, first.epsilon.clone())
}

/// Relative belief for the degree-`t` pooled prior, computed as
/// `(m_{1,α}/m_{t,α}) · RB_{1,α}` and cross-checked against the direct
/// posterior/prior ratio wherever the pooled prior is positive.
pub fn rb_power_mean<D: Density>(
    bases: &[InferenceBase<D>],
    spec: &PoolSpec<D::Scalar>,
    epsilon: D::Scalar,
) -> Result<EvidenceFunction<D>> {
    check_context_one(bases)?;
    let linear = linear_evidence(bases, spec.weights(), epsilon.clone())?;
    let m_linear = pooled_base(bases, &spec.with_degree(crate::Degree::linear()))?.predictive().clone();
    let pooled = pooled_base(bases, spec)?;
    let factor = m_linear / pooled.predictive().clone();
    let rb: Vec<D::Scalar> = linear.rb.iter().map(|v| factor.clone() * v.clone()).collect();

    let posterior = pooled.posterior()?;
    let tol = cross_check_tolerance::<D::Scalar>();
    for (j, (p, q)) in pooled.prior().values().iter().zip(posterior.values()).enumerate() {
        if p.is_zero() {
            continue;
        }
        let direct = q.clone() / p.clone();
        if (direct.clone() - rb[j].clone()).abs() > tol.clone() * (D::Scalar::one() + direct) {
            return Err(Error::InvalidInput(format!(
                "scaling identity and direct ratio disagree at {}",
                pooled.prior().support().label(j)
            )));
        }
    }
    EvidenceFunction::new(linear.support, rb, epsilon)
}

fn cross_check_tolerance<S: Scalar>() -> S {
    if S::mass_tolerance().is_zero() {
        S::zero()
    } else {
        S::lit(1e-9)
    }
}

/// Linear-pool evidence `Σ_i (α_i m_i / m_{1,α}) RB_i`.
pub fn linear_evidence<D: Density>(
    bases: &[InferenceBase<D>],
    alpha: &[D::Scalar],
    epsilon: D::Scalar,
) -> Result<EvidenceFunction<D>> {
    let weights = posterior_weights(bases, alpha)?;
    let functions = bases.iter().map(|b| base_evidence(b, epsilon.clone())).collect::<Result<Vec<_>>>()?;
    combine_evidence_linear(&functions, &weights)
}

/// Estimate, plausible region and related summaries of an evidence
/// function.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceSummary<S> {
    /// Index of the relative belief estimate; `None` when the data are
    /// uninformative.
    pub estimate: Option<usize>,
    pub uninformative: bool,
    /// Indices with evidence in favor.
    pub plausible: Vec<usize>,
    /// Maximal runs of consecutive plausible indices, inclusive.
    pub runs: Vec<(usize, usize)>,
    pub prior_content: S,
    pub posterior_content: S,
    /// `Π(RB ≤ RB(ψ0) | x)` when `ψ0` was given.
    pub strength: Option<S>,
    pub verdicts: Vec<Verdict>,
}

impl<S: Scalar> EvidenceSummary<S> {
    /// Plausible runs as coordinate intervals on a grid.
    pub fn intervals<P: Support>(&self, support: &P) -> Vec<(f64, f64)> {
        self.runs.iter().filter_map(|&(a, b)| Some((support.coordinate(a)?, support.coordinate(b)?))).collect()
    }
}

/// Summarizes `evidence`, with contents taken under `prior` and `posterior`.
pub fn summarize<D: Density>(
    evidence: &EvidenceFunction<D>,
    prior: &D,
    posterior: &D,
    psi0: Option<usize>,
) -> Result<EvidenceSummary<D::Scalar>> {
    if prior.support() != &evidence.support || posterior.support() != &evidence.support {
        return Err(Error::SupportMismatch("evidence, prior and posterior must share a support".into()));
    }
    if let Some(p) = psi0 {
        if p >= evidence.rb.len() {
            return Err(Error::InvalidInput(format!("hypothesis index {p} out of range")));
        }
    }
    let verdicts = evidence.verdicts();
    let uninformative = evidence.is_constant_one();
    let plausible: Vec<usize> = (0..verdicts.len()).filter(|&j| verdicts[j] == Verdict::Favor).collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &j in &plausible {
        match runs.last_mut() {
            Some((_, end)) if *end + 1 == j => *end = j,
            _ => runs.push((j, j)),
        }
    }
    let in_region = |j: usize| verdicts[j] == Verdict::Favor;
    let strength = psi0.map(|p| {
        let threshold = evidence.rb[p].clone();
        posterior.mass_where(|j| evidence.rb[j] <= threshold)
    });
    Ok(EvidenceSummary {
        estimate: (!uninformative).then(|| evidence.argmax()),
        uninformative,
        prior_content: prior.mass_where(in_region),
        posterior_content: posterior.mass_where(in_region),
        plausible,
        runs,
        strength,
        verdicts,
    })
}

/// Pattern of per-base verdicts at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsensusPattern {
    /// Some base finds evidence in favor and none against.
    Favor,
    /// Some base finds evidence against and none in favor.
    Against,
    /// No base finds evidence either way.
    Agnostic,
    /// Bases disagree; nothing to preserve.
    Mixed,
}

impl fmt::Display for ConsensusPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConsensusPattern::Favor => "favor",
            ConsensusPattern::Against => "against",
            ConsensusPattern::Agnostic => "agnostic",
            ConsensusPattern::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelAudit {
    pub label: String,
    pub pattern: ConsensusPattern,
    pub combined: Verdict,
    pub preserved: bool,
    /// The combined verdict points the opposite way from the consensus.
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusAudit {
    pub labels: Vec<LabelAudit>,
    pub passed: bool,
}

impl ConsensusAudit {
    pub fn violations(&self) -> impl Iterator<Item = &LabelAudit> {
        self.labels.iter().filter(|l| !l.preserved)
    }

    pub fn reversals(&self) -> impl Iterator<Item = &LabelAudit> {
        self.labels.iter().filter(|l| l.reversed)
    }
}

/// Checks, point by point, whether `combined` keeps every consensus among
/// the input evidence functions.
pub fn consensus_audit<D: Density>(
    inputs: &[EvidenceFunction<D>],
    combined: &EvidenceFunction<D>,
) -> Result<ConsensusAudit> {
    if inputs.is_empty() {
        return Err(Error::InvalidInput("no evidence functions to audit".into()));
    }
    if inputs.iter().any(|f| f.support != combined.support) {
        return Err(Error::SupportMismatch("audited functions are on different supports".into()));
    }
    let labels: Vec<LabelAudit> = (0..combined.rb.len())
        .map(|j| {
            let favor = inputs.iter().any(|f| f.verdict(j) == Verdict::Favor);
            let against = inputs.iter().any(|f| f.verdict(j) == Verdict::Against);
            let pattern = match (favor, against) {
                (true, false) => ConsensusPattern::Favor,
                (false, true) => ConsensusPattern::Against,
                (false, false) => ConsensusPattern::Agnostic,
                (true, true) => ConsensusPattern::Mixed,
            };
            let verdict = combined.verdict(j);
            let preserved = match pattern {
                ConsensusPattern::Favor => verdict == Verdict::Favor,
                ConsensusPattern::Against => verdict == Verdict::Against,
                ConsensusPattern::Agnostic => verdict == Verdict::Neutral,
                ConsensusPattern::Mixed => true,
            };
            let reversed = matches!(
                (pattern, verdict),
                (ConsensusPattern::Favor, Verdict::Against) | (ConsensusPattern::Against, Verdict::Favor)
            );
            LabelAudit { label: combined.support.label(j), pattern, combined: verdict, preserved, reversed }
        })
        .collect();
    let passed = labels.iter().all(|l| l.preserved);
    Ok(ConsensusAudit { labels, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{FiniteDensity, Labels};
    use crate::parse_rational;
    use crate::pooling::Degree;
    use num_rational::BigRational;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn eps() -> BigRational {
        q("1e-9")
    }

    fn bases() -> Vec<InferenceBase<FiniteDensity<BigRational>>> {
        let labels = Labels::new(["a", "b"]).unwrap();
        [("1/4", "3/4"), ("1", "0")]
            .iter()
            .map(|(a, b)| {
                InferenceBase::new(
                    FiniteDensity::new(labels.clone(), vec![q(a), q(b)]).unwrap(),
                    vec![q("1/4"), q("1/3")],
                )
                .unwrap()
            })
            .collect()
    }

    fn half(t: Degree<BigRational>) -> PoolSpec<BigRational> {
        PoolSpec::new(t, vec![q("1/2"), q("1/2")]).unwrap()
    }

    #[test]
    fn two_prior_ratios() {
        let b = bases();
        let rb1 = relative_belief(b[0].prior(), &b[0].posterior().unwrap(), eps()).unwrap();
        assert_eq!(rb1.values()[0], q("4/5"));
        assert_eq!(rb1.verdict(0), Verdict::Against);
        let rb2 = base_evidence(&b[1], eps()).unwrap();
        assert_eq!(rb2.values()[0], q("1"));
        let lin = linear_evidence(&b, &[q("1/2"), q("1/2")], eps()).unwrap();
        assert_eq!(lin.values()[0], q("8/9"));
        assert_eq!(rb_power_mean(&b, &half(Degree::linear()), eps()).unwrap(), lin);
        assert_eq!(rb_power_mean(&b, &half(Degree::geometric()), eps()).unwrap().values()[0], q("1"));
        assert_eq!(rb_power_mean(&b, &half(Degree::NegInf), eps()).unwrap().values()[0], q("1"));
    }

    #[test]
    fn two_prior_audits() {
        let b = bases();
        let inputs: Vec<_> = b.iter().map(|x| base_evidence(x, eps()).unwrap()).collect();
        let lin = rb_power_mean(&b, &half(Degree::linear()), eps()).unwrap();
        assert!(consensus_audit(&inputs, &lin).unwrap().passed);
        for t in [Degree::geometric(), Degree::NegInf] {
            let audit = consensus_audit(&inputs, &rb_power_mean(&b, &half(t), eps()).unwrap()).unwrap();
            assert!(!audit.passed);
            let a = &audit.labels[0];
            assert_eq!((a.pattern, a.combined, a.reversed), (ConsensusPattern::Against, Verdict::Neutral, false));
            // b carries no prior mass under base 2 or the pool; f/m still favors it
            assert_eq!(audit.labels[1].pattern, ConsensusPattern::Favor);
            assert!(audit.labels[1].preserved);
        }
    }

    #[test]
    fn no_update_is_neutral() {
        let d = FiniteDensity::new(Labels::numbered("t", 3).unwrap(), vec![0.2, 0.3, 0.5]).unwrap();
        let rb = relative_belief(&d, &d, DEFAULT_EPSILON).unwrap();
        assert!(rb.values().iter().all(|v| *v == 1.0));
        let s = summarize(&rb, &d, &d, Some(0)).unwrap();
        assert!(s.uninformative && s.plausible.is_empty() && s.estimate.is_none());
        assert_eq!(s.strength, Some(1.0));
    }

    #[test]
    fn zero_prior_with_posterior_mass_rejected() {
        let l = Labels::numbered("t", 2).unwrap();
        let prior = FiniteDensity::new(l.clone(), vec![1.0, 0.0]).unwrap();
        let post = FiniteDensity::new(l, vec![0.5, 0.5]).unwrap();
        assert_eq!(relative_belief(&prior, &post, DEFAULT_EPSILON).unwrap_err(), Error::ZeroPrior { index: 1 });
    }

    #[test]
    fn singleton_and_identical_combinations() {
        let b = bases();
        let f = base_evidence(&b[0], eps()).unwrap();
        assert_eq!(combine_evidence_linear(std::slice::from_ref(&f), &[q("1")]).unwrap(), f);
        assert_eq!(combine_evidence_linear(&[f.clone(), f.clone()], &[q("1/3"), q("2/3")]).unwrap(), f);
        assert!(combine_evidence_linear(&[f.clone(), f], &[q("1")]).is_err());
    }

    #[test]
    fn argmax_ties_go_left() {
        let l = Labels::numbered("t", 4).unwrap();
        let f = EvidenceFunction::<FiniteDensity<f64>>::new(l, vec![0.5, 2.0, 2.0, 0.1], DEFAULT_EPSILON).unwrap();
        assert_eq!(f.argmax(), 1);
    }

    #[test]
    fn runs_split_on_gaps() {
        let l = Labels::numbered("t", 5).unwrap();
        let prior = FiniteDensity::uniform(l.clone()).unwrap();
        let post = FiniteDensity::new(l, vec![0.3, 0.3, 0.0, 0.4, 0.0]).unwrap();
        let rb = relative_belief(&prior, &post, DEFAULT_EPSILON).unwrap();
        let s = summarize(&rb, &prior, &post, Some(1)).unwrap();
        assert_eq!(s.runs, vec![(0, 1), (3, 3)]);
        assert_eq!(s.estimate, Some(3));
        assert!((s.posterior_content - 1.0).abs() < 1e-15);
        assert!((s.prior_content - 0.6).abs() < 1e-15);
        assert!((s.strength.unwrap() - 0.6).abs() < 1e-15);
    }
}

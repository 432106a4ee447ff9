use super::{Density, FiniteDensity, Labels, Support};
use crate::base::InferenceBase;
use crate::{Error, Result, Scalar};

/// Onto map `Ψ: Θ → interest labels`, with optional conditional priors
/// `Π(·|ψ)` over Θ.
#[derive(Debug, Clone, PartialEq)]
pub struct InterestMapping<S> {
    interest: Labels,
    assignment: Vec<usize>,
    conditionals: Option<Vec<FiniteDensity<S>>>,
}

impl<S: Scalar> InterestMapping<S> {
    /// `assignment[j]` is the interest index of parameter point `j`.
    pub fn new(interest: Labels, assignment: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = assignment.iter().find(|&&a| a >= interest.len()) {
            return Err(Error::InvalidInput(format!("interest index {bad} out of range")));
        }
        let mut hit = vec![false; interest.len()];
        assignment.iter().for_each(|&a| hit[a] = true);
        if let Some(miss) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidInput(format!("interest label {:?} has no preimage", interest.label(miss))));
        }
        Ok(Self { interest, assignment, conditionals: None })
    }

    /// The identity mapping on `parameters`.
    pub fn identity(parameters: &Labels) -> Self {
        Self { interest: parameters.clone(), assignment: (0..parameters.len()).collect(), conditionals: None }
    }

    /// Attaches explicit conditional priors, one per interest label, each a
    /// density over Θ supported on that label's preimage.
    pub fn with_conditionals(mut self, conditionals: Vec<FiniteDensity<S>>) -> Result<Self> {
        if conditionals.len() != self.interest.len() {
            return Err(Error::InvalidInput("one conditional prior per interest label is required".into()));
        }
        for (psi, c) in conditionals.iter().enumerate() {
            if c.len() != self.assignment.len() {
                return Err(Error::SupportMismatch("conditional prior is not over Θ".into()));
            }
            if let Some(j) = (0..c.len()).find(|&j| self.assignment[j] != psi && !c.masses()[j].is_zero()) {
                return Err(Error::InvalidInput(format!(
                    "conditional prior for {:?} charges a point outside its preimage (index {j})",
                    self.interest.label(psi)
                )));
            }
        }
        self.conditionals = Some(conditionals);
        Ok(self)
    }

    pub fn interest(&self) -> &Labels {
        &self.interest
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Image of a density over Θ.
    pub fn pushforward(&self, density: &FiniteDensity<S>) -> Result<FiniteDensity<S>> {
        self.check_domain(density.len())?;
        let mut out = vec![S::zero(); self.interest.len()];
        for (j, m) in density.masses().iter().enumerate() {
            out[self.assignment[j]] = out[self.assignment[j]].clone() + m.clone();
        }
        FiniteDensity::new(self.interest.clone(), out)
    }

    fn check_domain(&self, len: usize) -> Result<()> {
        if len != self.assignment.len() {
            return Err(Error::InvalidInput(format!(
                "mapping covers {} parameter points but the base has {len}",
                self.assignment.len()
            )));
        }
        Ok(())
    }
}

/// Integrates out the nuisance part of θ: the returned base has prior
/// `π_Ψ` and likelihood `m_ψ(x) = E_{Π(·|ψ)}[f_θ(x)]`.
pub fn marginalize<S: Scalar>(
    base: &InferenceBase<FiniteDensity<S>>,
    mapping: &InterestMapping<S>,
) -> Result<InferenceBase<FiniteDensity<S>>> {
    mapping.check_domain(base.prior().len())?;
    let prior_psi = mapping.pushforward(base.prior())?;
    let k = mapping.interest.len();
    let mut likelihood = vec![S::zero(); k];
    match &mapping.conditionals {
        Some(conditionals) => {
            for (psi, c) in conditionals.iter().enumerate() {
                for (j, prior_j) in base.prior().masses().iter().enumerate() {
                    if mapping.assignment[j] != psi {
                        continue;
                    }
                    let implied = prior_psi.masses()[psi].clone() * c.masses()[j].clone();
                    if (implied - prior_j.clone()).abs() > S::mass_tolerance() {
                        return Err(Error::InvalidInput(format!(
                            "conditional prior for {:?} is inconsistent with the base prior",
                            mapping.interest.label(psi)
                        )));
                    }
                    likelihood[psi] = likelihood[psi].clone() + c.masses()[j].clone() * base.likelihood()[j].clone();
                }
            }
        }
        None => {
            let mut fiber_size = vec![0usize; k];
            mapping.assignment.iter().for_each(|&a| fiber_size[a] += 1);
            for (j, prior_j) in base.prior().masses().iter().enumerate() {
                let psi = mapping.assignment[j];
                let mass = prior_psi.masses()[psi].clone();
                // a null fiber gets the plain average; it carries no prior mass anyway
                let weight = if mass.is_zero() {
                    S::one() / S::from_usize(fiber_size[psi]).expect("fiber size")
                } else {
                    prior_j.clone() / mass
                };
                likelihood[psi] = likelihood[psi].clone() + weight * base.likelihood()[j].clone();
            }
        }
    }
    InferenceBase::new(prior_psi, likelihood)
}

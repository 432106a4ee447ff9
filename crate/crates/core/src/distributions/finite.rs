use std::collections::HashSet;
use std::sync::Arc;

use super::{Density, Support};
use crate::{check_simplex, Error, Result, Scalar};

/// Distinct point names of a finite parameter space.
#[derive(Debug, Clone, Eq)]
pub struct Labels(Arc<Vec<String>>);

impl Labels {
    pub fn new<I, T>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidInput("a finite support needs at least one label".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidInput(format!("duplicate label {dup:?}")));
        }
        Ok(Self(Arc::new(labels)))
    }

    /// Labels `prefix0, prefix1, …`.
    pub fn numbered(prefix: &str, count: usize) -> Result<Self> {
        Self::new((0..count).map(|j| format!("{prefix}{j}")))
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }
}

impl PartialEq for Labels {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Support for Labels {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn label(&self, j: usize) -> String {
        self.0[j].clone()
    }

    fn coordinate(&self, _j: usize) -> Option<f64> {
        None
    }
}

/// Probability mass function on a finite labelled set.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDensity<S> {
    labels: Labels,
    masses: Vec<S>,
}

impl<S: Scalar> FiniteDensity<S> {
    pub fn new(labels: Labels, masses: Vec<S>) -> Result<Self> {
        if labels.len() != masses.len() {
            return Err(Error::SupportMismatch(format!("{} masses for {} labels", masses.len(), labels.len())));
        }
        if let Some(j) = masses.iter().position(|m| *m > S::one() + S::mass_tolerance()) {
            return Err(Error::InvalidInput(format!("mass at {:?} exceeds 1", labels.label(j))));
        }
        check_simplex(&masses)?;
        Ok(Self { labels, masses })
    }

    /// Convenience constructor from string labels.
    pub fn from_pairs<T: Into<String>>(pairs: impl IntoIterator<Item = (T, S)>) -> Result<Self> {
        let (labels, masses): (Vec<String>, Vec<S>) = pairs.into_iter().map(|(l, m)| (l.into(), m)).unzip();
        Self::new(Labels::new(labels)?, masses)
    }

    /// Uniform mass on `labels`.
    pub fn uniform(labels: Labels) -> Result<Self> {
        let k = S::from_usize(labels.len()).ok_or_else(|| Error::InvalidInput("too many labels".into()))?;
        let masses = vec![S::one() / k; labels.len()];
        Self::new(labels, masses)
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn masses(&self) -> &[S] {
        &self.masses
    }

    pub fn mass_of(&self, label: &str) -> Option<&S> {
        self.labels.position(label).map(|j| &self.masses[j])
    }

    /// Probability of a set of points.
    pub fn probability(&self, event: &[usize]) -> S {
        event.iter().fold(S::zero(), |acc, &j| acc + self.masses[j].clone())
    }
}

impl<S: Scalar> Density for FiniteDensity<S> {
    type Scalar = S;
    type Support = Labels;

    fn support(&self) -> &Labels {
        &self.labels
    }

    fn values(&self) -> &[S] {
        &self.masses
    }

    fn weight_on(_support: &Labels, _j: usize) -> S {
        S::one()
    }

    fn from_parts(support: Labels, values: Vec<S>) -> Result<Self> {
        Self::new(support, values)
    }
}

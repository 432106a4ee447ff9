use super::{Density, FiniteDensity};
use crate::{Result, Scalar};

/// Kullback-Leibler divergence, which is infinite when `p` charges a point
/// that `q` does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn value(&self) -> f64 {
        match self {
            Divergence::Finite(v) => *v,
            Divergence::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Divergence::Infinite)
    }
}

/// `Σ p log(p/q)`.
pub fn kl_divergence<S: Scalar>(p: &FiniteDensity<S>, q: &FiniteDensity<S>) -> Result<Divergence> {
    p.check_same_support(q)?;
    let mut total = 0.0;
    for (pi, qi) in p.masses().iter().zip(q.masses()) {
        if pi.is_zero() {
            continue;
        }
        if qi.is_zero() {
            return Ok(Divergence::Infinite);
        }
        let (pf, qf) = (pi.to_f64_lossy(), qi.to_f64_lossy());
        total += pf * (pf / qf).ln();
    }
    Ok(Divergence::Finite(total.max(0.0)))
}

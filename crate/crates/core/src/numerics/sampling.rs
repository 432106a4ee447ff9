use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Cauchy, Distribution, Gamma, Normal, StudentT};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Counter-based seeded generator. A `(seed, stream)` pair identifies a
/// ChaCha stream, so every derived sub-stream is reproducible no matter how
/// work is scheduled across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededGenerator {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededGenerator {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Independent child generator for sub-task `index`.
    pub fn derive(&self, index: u64) -> Self {
        Self { seed: splitmix(self.seed ^ splitmix(self.stream)), stream: index }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Distributions the library knows how to draw from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Gamma with shape and rate parameters.
    GammaRate {
        shape: f64,
        rate: f64,
    },
    StudentT {
        location: f64,
        scale: f64,
        df: f64,
    },
    Cauchy {
        location: f64,
        scale: f64,
    },
    Dirichlet {
        alpha: Vec<f64>,
    },
    Multinomial {
        trials: u64,
        probs: Vec<f64>,
    },
    Categorical {
        probs: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Draw {
    Scalar(f64),
    Vector(Vec<f64>),
    Counts(Vec<u64>),
    Index(usize),
}

impl Draw {
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Draw::Scalar(x) => Some(*x),
            _ => None,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

fn probabilities(probs: &[f64]) -> Result<()> {
    if probs.is_empty() || probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::NotSimplex("probabilities must be non-negative and finite".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotSimplex(format!("probabilities sum to {total}")));
    }
    Ok(())
}

fn categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
}

fn binomial<R: Rng + ?Sized>(trials: u64, p: f64, rng: &mut R) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    rand_distr::Binomial::new(trials, p).map(|b| b.sample(rng)).unwrap_or(0)
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::Normal { mean, sd } => {
                positive("sd", *sd)?;
                if !mean.is_finite() {
                    return Err(Error::InvalidInput("mean must be finite".into()));
                }
            }
            DistributionSpec::GammaRate { shape, rate } => {
                positive("shape", *shape)?;
                positive("rate", *rate)?;
            }
            DistributionSpec::StudentT { scale, df, .. } => {
                positive("scale", *scale)?;
                positive("df", *df)?;
            }
            DistributionSpec::Cauchy { scale, .. } => positive("scale", *scale)?,
            DistributionSpec::Dirichlet { alpha } => {
                if alpha.len() < 2 {
                    return Err(Error::InvalidInput("dirichlet needs at least 2 components".into()));
                }
                for a in alpha {
                    positive("dirichlet alpha", *a)?;
                }
            }
            DistributionSpec::Multinomial { probs, .. } | DistributionSpec::Categorical { probs } => {
                probabilities(probs)?
            }
        }
        Ok(())
    }

    /// Log density of a univariate spec.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        use std::f64::consts::PI;
        self.validate()?;
        Ok(match self {
            DistributionSpec::Normal { mean, sd } => {
                let z = (x - mean) / sd;
                -0.5 * z * z - sd.ln() - 0.5 * (2.0 * PI).ln()
            }
            DistributionSpec::GammaRate { shape, rate } => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    shape * rate.ln() - super::special::ln_gamma(*shape) + (shape - 1.0) * x.ln() - rate * x
                }
            }
            DistributionSpec::StudentT { location, scale, df } => {
                super::special::student_t_ln_pdf((x - location) / scale, *df) - scale.ln()
            }
            DistributionSpec::Cauchy { location, scale } => {
                let z = (x - location) / scale;
                -(PI * scale * (1.0 + z * z)).ln()
            }
            _ => return Err(Error::InvalidInput("log_pdf requires a univariate distribution".into())),
        })
    }
}

/// One draw from `spec`.
pub fn sample<R: Rng + ?Sized>(spec: &DistributionSpec, rng: &mut R) -> Result<Draw> {
    spec.validate()?;
    let bad = |e: &dyn std::fmt::Display| Error::InvalidInput(e.to_string());
    Ok(match spec {
        DistributionSpec::Normal { mean, sd } => {
            Draw::Scalar(Normal::new(*mean, *sd).map_err(|e| bad(&e))?.sample(rng))
        }
        DistributionSpec::GammaRate { shape, rate } => {
            Draw::Scalar(Gamma::new(*shape, 1.0 / rate).map_err(|e| bad(&e))?.sample(rng))
        }
        DistributionSpec::StudentT { location, scale, df } => {
            Draw::Scalar(location + scale * StudentT::new(*df).map_err(|e| bad(&e))?.sample(rng))
        }
        DistributionSpec::Cauchy { location, scale } => {
            Draw::Scalar(Cauchy::new(*location, *scale).map_err(|e| bad(&e))?.sample(rng))
        }
        DistributionSpec::Dirichlet { alpha } => {
            let mut g = alpha
                .iter()
                .map(|a| Gamma::new(*a, 1.0).map(|d| d.sample(rng)).map_err(|e| bad(&e)))
                .collect::<Result<Vec<f64>>>()?;
            let total: f64 = g.iter().sum();
            if total <= 0.0 {
                // every gamma underflowed; fall back to the largest parameter
                let k = alpha.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|p| p.0).unwrap_or(0);
                g.iter_mut().enumerate().for_each(|(i, v)| *v = if i == k { 1.0 } else { 0.0 });
            } else {
                g.iter_mut().for_each(|v| *v /= total);
            }
            Draw::Vector(g)
        }
        DistributionSpec::Multinomial { trials, probs } => {
            let mut remaining = *trials;
            let mut mass_left = 1.0;
            let mut counts = Vec::with_capacity(probs.len());
            for (i, p) in probs.iter().enumerate() {
                let c = if i + 1 == probs.len() {
                    remaining
                } else {
                    binomial(remaining, (p / mass_left).clamp(0.0, 1.0), rng)
                };
                counts.push(c);
                remaining -= c;
                mass_left -= p;
            }
            Draw::Counts(counts)
        }
        DistributionSpec::Categorical { probs } => Draw::Index(categorical(probs, rng)),
    })
}

/// `n` draws, the `i`-th from sub-stream `i` of `generator`.
pub fn sample_n(generator: SeededGenerator, spec: &DistributionSpec, n: usize) -> Result<Vec<Draw>> {
    if n == 0 {
        return Err(Error::InvalidInput("at least one draw is required".into()));
    }
    spec.validate()?;
    (0..n).map(|i| sample(spec, &mut generator.derive(i as u64).rng())).collect()
}

use super::{Labels, Support};
use crate::{check_simplex, Error, Result, Scalar};

/// Statistical model on finite parameter and sample spaces: one probability
/// row `f_θ(·)` per parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteModel<S> {
    parameters: Labels,
    samples: Labels,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> FiniteModel<S> {
    pub fn new(parameters: Labels, samples: Labels, rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.len() != parameters.len() {
            return Err(Error::SupportMismatch(format!(
                "{} likelihood rows for {} parameter points",
                rows.len(),
                parameters.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != samples.len() {
                return Err(Error::SupportMismatch(format!(
                    "row {:?} has {} entries for {} sample points",
                    parameters.label(i),
                    row.len(),
                    samples.len()
                )));
            }
            check_simplex(row).map_err(|e| Error::InvalidInput(format!("row {:?}: {e}", parameters.label(i))))?;
        }
        Ok(Self { parameters, samples, rows })
    }

    pub fn parameters(&self) -> &Labels {
        &self.parameters
    }

    pub fn samples(&self) -> &Labels {
        &self.samples
    }

    /// `f_θ(x)` for every θ, at sample point `x`.
    pub fn likelihood(&self, x: usize) -> Result<Vec<S>> {
        if x >= self.samples.len() {
            return Err(Error::InvalidInput(format!("sample index {x} out of range")));
        }
        Ok(self.rows.iter().map(|row| row[x].clone()).collect())
    }

    pub fn likelihood_of(&self, sample_label: &str) -> Result<Vec<S>> {
        let x = self
            .samples
            .position(sample_label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown sample point {sample_label:?}")))?;
        self.likelihood(x)
    }

    /// The probability row of parameter point `theta`.
    pub fn row(&self, theta: usize) -> &[S] {
        &self.rows[theta]
    }

    /// Log-likelihood of an i.i.d. sample summarized by its counts over the
    /// sample space.
    pub fn log_likelihood_counts(&self, counts: &[u64]) -> Result<Vec<f64>> {
        if counts.len() != self.samples.len() {
            return Err(Error::SupportMismatch("count vector does not match the sample space".into()));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter().zip(counts).fold(
                    0.0,
                    |acc, (p, &c)| {
                        if c == 0 {
                            acc
                        } else {
                            acc + c as f64 * p.to_f64_lossy().ln()
                        }
                    },
                )
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin() -> FiniteModel<f64> {
        FiniteModel::new(
            Labels::new(["a", "b"]).unwrap(),
            Labels::new(["0", "1"]).unwrap(),
            vec![vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0]],
        )
        .unwrap()
    }

    #[test]
    fn likelihood_columns() {
        assert_eq!(coin().likelihood_of("0").unwrap(), vec![0.25, 1.0 / 3.0]);
        assert!(coin().likelihood(2).is_err());
    }

    #[test]
    fn rows_must_be_probabilities() {
        let bad = FiniteModel::new(Labels::new(["a"]).unwrap(), Labels::new(["0", "1"]).unwrap(), vec![vec![0.5, 0.6]]);
        assert!(bad.is_err());
    }

    #[test]
    fn count_log_likelihood() {
        let ll = coin().log_likelihood_counts(&[2, 1]).unwrap();
        assert!((ll[0] - (2.0 * 0.25f64.ln() + 0.75f64.ln())).abs() < 1e-14);
    }
}

//! Run configuration: a TOML document with one section per input kind.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use evcomb::context2::{ConditionStarSpec, LimitWeights};
use evcomb::elicitation::{ElicitationInput, QuantileConvention};
use evcomb::regression::Proposal;
use evcomb::{check_simplex, parse_rational, Degree, Scalar};
use num_rational::BigRational;
use serde::Deserialize;
use toml::Spanned;

use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Pool,
    Evidence,
    Combine,
    Predict,
    Elicit,
    Regress,
    Robustness,
    Asymptotics,
}

impl FromStr for Subcommand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as clap::ValueEnum>::from_str(s, true)
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = clap::ValueEnum::to_possible_value(self).expect("no skipped variants");
        f.write_str(value.get_name())
    }
}

/// A decimal, a ratio such as `"1/4"`, or `±inf` for degrees.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Float(x) => format!("{x}"),
            Number::Text(s) => s.trim().to_string(),
        }
    }

    pub fn exact(&self) -> Option<BigRational> {
        parse_rational(&self.text())
    }

    pub fn float(&self) -> Option<f64> {
        match self {
            Number::Float(x) => x.is_finite().then_some(*x),
            Number::Text(s) => parse_rational(s).and_then(|q| q.to_f64_lossy().is_finite().then(|| q.to_f64_lossy())),
        }
    }

    pub fn degree<S: Scalar>(&self, parse: impl Fn(&Number) -> Option<S>) -> Option<Degree<S>> {
        match self {
            Number::Float(x) if x.is_infinite() => Some(if *x > 0.0 { Degree::PosInf } else { Degree::NegInf }),
            Number::Float(x) if x.is_nan() => None,
            other => Degree::parse_with(&other.text(), |_| parse(other)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: Option<Spanned<String>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub finite: Option<FiniteSection>,
    pub normal: Option<NormalSection>,
    pub context2: Option<Context2Section>,
    pub location: Option<LocationSection>,
    pub elicit: Option<ElicitSection>,
    pub regress: Option<RegressSection>,
    pub robustness: Option<RobustnessSection>,
    pub asymptotics: Option<AsymptoticsSection>,
}

/// Context I bases on a finite parameter space: one likelihood at the
/// observed data, one prior per base.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSection {
    pub parameters: Spanned<Vec<String>>,
    pub likelihood: Spanned<Vec<Number>>,
    pub priors: Spanned<Vec<Vec<Number>>>,
    pub alpha: Spanned<Vec<Number>>,
    pub degrees: Option<Spanned<Vec<Number>>>,
    #[serde(default)]
    pub exact: bool,
    pub hypothesis: Option<Spanned<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    8193
}

impl Default for GridSection {
    fn default() -> Self {
        Self { lower: None, upper: None, points: default_points() }
    }
}

/// Context I normal-location bases `N(μ, σ0²)` with `N(μ_i, τ_i²)` priors,
/// evaluated for one or more `(n, x̄)` data summaries.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalSection {
    /// `(prior mean, prior variance)` per base.
    pub priors: Spanned<Vec<(f64, f64)>>,
    pub sampling_variance: f64,
    /// `(n, x̄)` rows.
    pub data: Spanned<Vec<(u64, f64)>>,
    pub alpha: Spanned<Vec<Number>>,
    #[serde(default)]
    pub grid: GridSection,
    pub degrees: Option<Spanned<Vec<Number>>>,
    pub hypothesis: Option<f64>,
    /// True mean for the `n → ∞` prediction row.
    pub limit_mu: Option<f64>,
    #[serde(default)]
    pub limit_weights: LimitWeights,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Context2Base {
    pub name: Option<String>,
    pub prior: Spanned<Vec<Number>>,
    /// `m_i(x|ψ)` at the observed data.
    pub likelihood: Spanned<Vec<Number>>,
}

/// Bases with their own models over a common interest support.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Context2Section {
    pub interest: Spanned<Vec<String>>,
    pub alpha: Spanned<Vec<Number>>,
    pub bases: Vec<Context2Base>,
    pub hypothesis: Option<Spanned<String>>,
    pub condition_star: Option<ConditionStarSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum LocationBase {
    Normal {
        prior_mean: f64,
        prior_variance: f64,
        sampling_variance: f64,
    },
    /// `sigma0` fixes the Cauchy scale through the one-sigma coverage.
    Cauchy {
        prior_mean: f64,
        prior_variance: f64,
        sigma0: f64,
    },
}

/// Location models compared through the ancillary `x − x̄1`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocationSection {
    pub sample: Vec<f64>,
    pub alpha: Spanned<Vec<Number>>,
    pub bases: Vec<LocationBase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElicitSection {
    pub gamma: f64,
    pub m0: f64,
    pub s1: f64,
    pub s2: f64,
    pub zeta0: f64,
    #[serde(default)]
    pub convention: QuantileConvention,
}

impl ElicitSection {
    pub fn input(&self) -> ElicitationInput {
        ElicitationInput { gamma: self.gamma, m0: self.m0, s1: self.s1, s2: self.s2, zeta0: self.zeta0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeSection {
    pub lower: f64,
    pub upper: f64,
    #[serde(default = "default_slope_points")]
    pub points: usize,
    pub hypothesis: Option<f64>,
    /// Degrees of freedom of the error family; normal errors when absent.
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressSection {
    /// CSV with `year,income,investment` columns, relative to the config.
    pub data: Spanned<PathBuf>,
    pub center: [f64; 2],
    pub lambdas: Spanned<Vec<f64>>,
    pub alpha: Option<Spanned<Vec<Number>>>,
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default = "default_ess_floor")]
    pub ess_floor: f64,
    #[serde(default)]
    pub proposal: Proposal,
    pub slope: Option<SlopeSection>,
}

/// Each slope node costs a pass over every draw, so the default is coarse.
fn default_slope_points() -> usize {
    201
}

fn default_draws() -> usize {
    100_000
}

fn default_ess_floor() -> f64 {
    500.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleSource {
    Finite,
    Normal,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobustnessSection {
    pub source: EnsembleSource,
    pub concentration: f64,
    pub replicates: usize,
    /// Data row of the normal section to use.
    #[serde(default)]
    pub row: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    Context1,
    OneTrue,
    TwoTrue,
    StarOneTrue,
    StarTwoTrue,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsSection {
    pub study: Study,
    pub degree: Option<Spanned<Number>>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_max_exponent")]
    pub max_exponent: u32,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_replicates() -> usize {
    evcomb::studies::fixtures::REPLICATES
}

fn default_max_exponent() -> u32 {
    evcomb::studies::fixtures::MAX_EXPONENT
}

fn default_tolerance() -> f64 {
    evcomb::studies::fixtures::TERMINAL_TOLERANCE
}

/// A parsed configuration with its source text, for line-anchored
/// diagnostics.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub source: String,
    pub dir: PathBuf,
}

impl Loaded {
    pub fn parse(source: String, dir: PathBuf) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(&source).map_err(|e| {
            let line = e.span().map(|s| line_of(&source, s.start));
            ConfigError { line, message: e.message().trim().to_string() }
        })?;
        Ok(Self { config, source, dir })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = std::fs::read_to_string(path).map_err(|e| ConfigError::new(format!("cannot read config: {e}")))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(source, dir)
    }

    pub fn line<T>(&self, value: &Spanned<T>) -> usize {
        line_of(&self.source, value.span().start)
    }

    pub fn error<T>(&self, value: &Spanned<T>, message: impl Into<String>) -> ConfigError {
        ConfigError::at(self.line(value), message)
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.dir.join(path)
        }
    }

    /// Parses every entry with `parse`, reporting the first bad one.
    pub fn numbers<S>(
        &self,
        values: &Spanned<Vec<Number>>,
        what: &str,
        parse: impl Fn(&Number) -> Option<S>,
    ) -> Result<Vec<S>, ConfigError> {
        values
            .get_ref()
            .iter()
            .enumerate()
            .map(|(i, v)| parse(v).ok_or_else(|| self.error(values, format!("{what}[{i}] = {v:?} is not a number"))))
            .collect()
    }

    /// Weights that must lie in the simplex.
    pub fn simplex<S: Scalar>(
        &self,
        values: &Spanned<Vec<Number>>,
        what: &str,
        parse: impl Fn(&Number) -> Option<S>,
    ) -> Result<Vec<S>, ConfigError> {
        let weights = self.numbers(values, what, parse)?;
        check_simplex(&weights).map_err(|e| self.error(values, format!("{what}: {e}")))?;
        Ok(weights)
    }

    pub fn degrees<S: Scalar>(
        &self,
        values: Option<&Spanned<Vec<Number>>>,
        parse: impl Fn(&Number) -> Option<S> + Copy,
    ) -> Result<Vec<Degree<S>>, ConfigError> {
        let Some(values) = values else {
            return Ok(vec![Degree::linear()]);
        };
        if values.get_ref().is_empty() {
            return Err(self.error(values, "degrees must not be empty"));
        }
        values
            .get_ref()
            .iter()
            .map(|v| {
                v.degree(parse)
                    .ok_or_else(|| self.error(values, format!("{v:?} is not a degree (a number, \"inf\" or \"-inf\")")))
            })
            .collect()
    }
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Loaded, ConfigError> {
        Loaded::parse(text.to_string(), PathBuf::new())
    }

    #[test]
    fn numbers_accept_ratios_and_decimals() {
        assert_eq!(Number::Text("1/4".into()).float(), Some(0.25));
        assert_eq!(Number::Float(0.1).exact(), parse_rational("1/10"));
        assert_eq!(Number::Text("-inf".into()).degree(Number::float), Some(Degree::NegInf));
        assert_eq!(Number::Float(f64::INFINITY).degree(Number::float), Some(Degree::PosInf));
        assert_eq!(Number::Float(0.5).degree(Number::exact), Some(Degree::Finite(parse_rational("1/2").unwrap())));
        assert_eq!(Number::Text("x".into()).float(), None);
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = load("seed = 1\nout = \n").unwrap_err();
        assert_eq!(err.line, Some(2));
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = load("seed = 1\n\nsead = 2\n").unwrap_err();
        assert_eq!(err.line, Some(3));
    }

    #[test]
    fn simplex_violation_points_at_alpha() {
        let text = "[finite]\nparameters = [\"a\", \"b\"]\nlikelihood = [0.25, 0.5]\npriors = [[0.5, 0.5]]\nalpha = [0.5, 0.6]\n";
        let loaded = load(text).unwrap();
        let section = loaded.config.finite.as_ref().unwrap();
        let err = loaded.simplex(&section.alpha, "alpha", Number::float).unwrap_err();
        assert_eq!(err.line, Some(5));
    }

    #[test]
    fn subcommand_names() {
        assert_eq!("robustness".parse::<Subcommand>(), Ok(Subcommand::Robustness));
        assert_eq!(Subcommand::Asymptotics.to_string(), "asymptotics");
        assert!("frobnicate".parse::<Subcommand>().is_err());
    }
}

//! Normal-location bases on a grid: pooling, evidence with interval summaries,
//! and prediction of a future observation.

use evcomb::context2::{predict as predict_future, prediction_grid, PredictionMode};
use evcomb::{
    pool_priors, pooled_base, posterior_weights, rb_power_mean, summarize, Degree, Density, EvidenceSummary, Grid,
    GridBase, GridDensity, InferenceBase, NormalConjugateSpec, PoolSpec,
};

use super::{summary_cells, SUMMARY_HEADER};
use crate::config::{GridSection, NormalSection, Number, Subcommand};
use crate::table::{num, Table};
use crate::{CliError, ConfigError, During, Output, Run};

/// Grid half-width in prior-predictive standard deviations.
const GRID_WIDTH_SD: f64 = 8.0;

pub(super) struct NormalEnsemble {
    pub priors: Vec<(f64, f64)>,
    pub sampling_variance: f64,
    pub data: Vec<(u64, f64)>,
    pub alpha: Vec<f64>,
    pub grid: GridSection,
    pub degrees: Vec<Degree<f64>>,
    pub hypothesis: Option<f64>,
}

impl NormalEnsemble {
    pub fn load(run: &Run, section: &NormalSection) -> Result<Self, CliError> {
        let loaded = &run.loaded;
        let priors = section.priors.get_ref().clone();
        if priors.is_empty() {
            return Err(run.bad(loaded.error(&section.priors, "at least one prior is required")));
        }
        if let Some(i) = priors.iter().position(|(m, v)| !(m.is_finite() && *v > 0.0 && v.is_finite())) {
            return Err(run.bad(
                loaded.error(&section.priors, format!("prior {} needs a finite mean and a positive variance", i + 1)),
            ));
        }
        if !(section.sampling_variance > 0.0 && section.sampling_variance.is_finite()) {
            return Err(run.bad(ConfigError::new("sampling_variance must be positive")));
        }
        let data = section.data.get_ref().clone();
        if data.is_empty() || data.iter().any(|(n, x)| *n == 0 || !x.is_finite()) {
            return Err(run.bad(loaded.error(&section.data, "data rows are (n >= 1, finite mean) pairs")));
        }
        let alpha = run.check(loaded.simplex(&section.alpha, "alpha", Number::float))?;
        if alpha.len() != priors.len() {
            return Err(
                run.bad(loaded.error(&section.alpha, format!("{} weights for {} priors", alpha.len(), priors.len())))
            );
        }
        let degrees = run.check(loaded.degrees(section.degrees.as_ref(), Number::float))?;
        if section.grid.lower.is_some() != section.grid.upper.is_some() {
            return Err(run.bad(ConfigError::new("grid needs both lower and upper, or neither")));
        }
        Ok(Self {
            priors,
            sampling_variance: section.sampling_variance,
            data,
            alpha,
            grid: section.grid,
            degrees,
            hypothesis: section.hypothesis,
        })
    }

    pub fn specs(&self, n: u64, xbar: f64) -> Vec<NormalConjugateSpec> {
        self.priors
            .iter()
            .map(|&(m, v)| NormalConjugateSpec {
                prior_mean: m,
                prior_variance: v,
                sampling_variance: self.sampling_variance,
                n,
                xbar,
            })
            .collect()
    }

    /// The configured grid, or one covering every prior by
    /// [`GRID_WIDTH_SD`] standard deviations.
    pub fn parameter_grid(&self) -> Result<Grid<f64>, CliError> {
        match (self.grid.lower, self.grid.upper) {
            (Some(lo), Some(hi)) => Grid::new(lo, hi, self.grid.points).during("building the grid"),
            _ => {
                let ranges: Vec<(f64, f64)> = self.priors.iter().map(|&(m, v)| (m, v.sqrt())).collect();
                Grid::covering(&ranges, GRID_WIDTH_SD, self.grid.points).during("building the grid")
            }
        }
    }

    pub fn bases(&self, n: u64, xbar: f64, grid: Grid<f64>) -> Result<Vec<GridBase>, CliError> {
        self.specs(n, xbar)
            .iter()
            .map(|s| InferenceBase::normal_conjugate(s, grid))
            .collect::<evcomb::Result<Vec<_>>>()
            .during("discretizing the normal bases")
    }

    pub fn psi0(&self, grid: &Grid<f64>) -> Option<usize> {
        self.hypothesis.map(|h| grid.nearest(h))
    }

    fn spec(&self, degree: &Degree<f64>) -> Result<PoolSpec<f64>, CliError> {
        PoolSpec::new(degree.clone(), self.alpha.clone()).during("building a pooling spec")
    }
}

fn indexed(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (1..=k).map(move |i| format!("{prefix}_{i}"))
}

/// Span of the plausible region: first and last plausible nodes.
fn span(summary: &EvidenceSummary<f64>, grid: &Grid<f64>) -> [String; 2] {
    match (summary.plausible.first(), summary.plausible.last()) {
        (Some(&a), Some(&b)) => [num(grid.node(a)), num(grid.node(b))],
        _ => [String::new(), String::new()],
    }
}

fn per_base_header(k: usize) -> Vec<String> {
    (1..=k).flat_map(|i| [format!("base{i}_lower"), format!("base{i}_upper"), format!("base{i}_content")]).collect()
}

fn per_base_cells(bases: &[GridBase], epsilon: f64, grid: &Grid<f64>) -> Result<Vec<String>, CliError> {
    let mut cells = Vec::new();
    for b in bases {
        let rb = evcomb::base_evidence(b, epsilon).during("base evidence")?;
        let s =
            summarize(&rb, b.prior(), &b.posterior().during("base posterior")?, None).during("summarizing evidence")?;
        cells.extend(span(&s, grid));
        cells.push(num(s.posterior_content));
    }
    Ok(cells)
}

pub(super) fn pool_or_evidence(run: &Run, section: &NormalSection) -> Result<Vec<Output>, CliError> {
    let ensemble = NormalEnsemble::load(run, section)?;
    match run.subcommand {
        Subcommand::Pool => pool(&ensemble),
        _ => evidence(run, &ensemble),
    }
}

fn pool(ens: &NormalEnsemble) -> Result<Vec<Output>, CliError> {
    let k = ens.priors.len();
    let grid = ens.parameter_grid()?;
    let mut summary = Table::new(["n", "xbar", "degree", "normalizer", "predictive", "predictive_ratio"]);
    let mut outputs = Vec::new();
    for (row, &(n, xbar)) in ens.data.iter().enumerate() {
        let bases = ens.bases(n, xbar, grid)?;
        let priors: Vec<GridDensity<f64>> = bases.iter().map(|b| b.prior().clone()).collect();
        let m_linear = *pooled_base(&bases, &ens.spec(&Degree::linear())?).during("linear pooling")?.predictive();
        let mut header: Vec<String> = vec!["mu".into()];
        header.extend(indexed("prior", k));
        let mut columns: Vec<Vec<f64>> = priors.iter().map(|p| p.values().to_vec()).collect();
        for degree in &ens.degrees {
            let spec = ens.spec(degree)?;
            let pooled = pool_priors(&priors, &spec).during("pooling priors")?;
            let base = pooled_base(&bases, &spec).during("pooling priors")?;
            let posterior = base.posterior().during("pooled posterior")?;
            summary.push([
                n.to_string(),
                num(xbar),
                degree.to_string(),
                num(pooled.normalizer),
                num(*base.predictive()),
                num(m_linear / base.predictive()),
            ]);
            header.extend([format!("pooled_prior_t={degree}"), format!("pooled_posterior_t={degree}")]);
            columns.extend([base.prior().values().to_vec(), posterior.values().to_vec()]);
        }
        outputs.push(Output::new(format!("normal_pool_plot_{}", row + 1), plot(&grid, header, &columns)));
    }
    outputs.insert(0, Output::new("normal_pool_summary", summary));
    Ok(outputs)
}

fn plot(grid: &Grid<f64>, header: Vec<String>, columns: &[Vec<f64>]) -> Table {
    let mut table = Table::new(header);
    for (j, x) in grid.nodes().enumerate() {
        let mut row = vec![num(x)];
        row.extend(columns.iter().map(|c| num(c[j])));
        table.push(row);
    }
    table
}

fn evidence(run: &Run, ens: &NormalEnsemble) -> Result<Vec<Output>, CliError> {
    let k = ens.priors.len();
    let grid = ens.parameter_grid()?;
    let psi0 = ens.psi0(&grid);
    let mut header: Vec<String> = ["n", "xbar", "degree"].map(String::from).to_vec();
    header.extend(indexed("weight", k));
    header.push("predictive".into());
    header.extend(SUMMARY_HEADER.map(String::from));
    header.extend(["lower".into(), "upper".into()]);
    header.extend(per_base_header(k));
    let mut summary = Table::new(header);
    let mut outputs = Vec::new();
    for (row, &(n, xbar)) in ens.data.iter().enumerate() {
        let bases = ens.bases(n, xbar, grid)?;
        let weights = posterior_weights(&bases, &ens.alpha).during("posterior weights")?;
        let per_base = per_base_cells(&bases, run.epsilon, &grid)?;
        let mut plot_header: Vec<String> = vec!["mu".into()];
        plot_header.extend(indexed("rb", k));
        let mut columns = bases
            .iter()
            .map(|b| Ok(evcomb::base_evidence(b, run.epsilon)?.values().to_vec()))
            .collect::<evcomb::Result<Vec<_>>>()
            .during("base evidence")?;
        for degree in &ens.degrees {
            let spec = ens.spec(degree)?;
            let rb = rb_power_mean(&bases, &spec, run.epsilon).during("pooled evidence")?;
            let pooled = pooled_base(&bases, &spec).during("pooling priors")?;
            let posterior = pooled.posterior().during("pooled posterior")?;
            let s = summarize(&rb, pooled.prior(), &posterior, psi0).during("summarizing evidence")?;
            let mut cells = vec![n.to_string(), num(xbar), degree.to_string()];
            cells.extend(weights.iter().map(|w| num(*w)));
            cells.push(num(*pooled.predictive()));
            cells.extend(summary_cells::<GridDensity<f64>>(&s, &grid));
            cells.extend(span(&s, &grid));
            cells.extend(per_base.iter().cloned());
            summary.push(cells);
            plot_header.extend([
                format!("prior_t={degree}"),
                format!("posterior_t={degree}"),
                format!("rb_t={degree}"),
            ]);
            columns.extend([pooled.prior().values().to_vec(), posterior.values().to_vec(), rb.values().to_vec()]);
        }
        outputs.push(Output::new(format!("normal_plot_{}", row + 1), plot(&grid, plot_header, &columns)));
    }
    outputs.insert(0, Output::new("normal_summary", summary));
    Ok(outputs)
}

pub(super) fn predict(run: &Run, section: &NormalSection) -> Result<Vec<Output>, CliError> {
    let ens = NormalEnsemble::load(run, section)?;
    let k = ens.priors.len();
    let mut header: Vec<String> = vec!["n".into(), "xbar".into()];
    header.extend(indexed("weight", k));
    header.extend(SUMMARY_HEADER.map(String::from));
    header.extend(["lower".into(), "upper".into()]);
    header.extend(per_base_header(k));
    let mut summary = Table::new(header);
    let mut outputs = Vec::new();

    let mut rows: Vec<(String, String, Vec<NormalConjugateSpec>, PredictionMode)> = ens
        .data
        .iter()
        .map(|&(n, xbar)| (n.to_string(), num(xbar), ens.specs(n, xbar), PredictionMode::FiniteN))
        .collect();
    if let Some(mu) = section.limit_mu {
        let mode = PredictionMode::Limit { mu, weights: section.limit_weights };
        rows.push(("inf".into(), String::new(), ens.specs(1, mu), mode));
    }
    for (index, (n, xbar, specs, mode)) in rows.into_iter().enumerate() {
        let grid = match (ens.grid.lower, ens.grid.upper) {
            (Some(lo), Some(hi)) => Grid::new(lo, hi, ens.grid.points).during("building the grid")?,
            _ => prediction_grid(&specs, ens.grid.points).during("building the grid")?,
        };
        let p = predict_future(&specs, &ens.alpha, mode, grid, run.epsilon).during("prediction")?;
        let mut cells = vec![n, xbar];
        cells.extend(p.weights.iter().map(|w| num(*w)));
        cells.extend(summary_cells::<GridDensity<f64>>(&p.summary, &grid));
        cells.extend(span(&p.summary, &grid));
        for (_, s) in &p.per_base {
            cells.extend(span(s, &grid));
            cells.push(num(s.posterior_content));
        }
        summary.push(cells);

        let mut plot_header: Vec<String> = ["y", "prior", "posterior", "rb"].map(String::from).to_vec();
        plot_header.extend(indexed("rb", k));
        let mut columns = vec![p.prior.values().to_vec(), p.posterior.values().to_vec(), p.evidence.values().to_vec()];
        columns.extend(p.per_base.iter().map(|(rb, _)| rb.values().to_vec()));
        outputs.push(Output::new(format!("predict_plot_{}", index + 1), plot(&grid, plot_header, &columns)));
    }
    outputs.insert(0, Output::new("predict_summary", summary));
    Ok(outputs)
}

//! Simulation studies: sensitivity to the pool weights, and large-sample
//! behaviour of the combined evidence.

use evcomb::studies::{
    asymptotics_context1, asymptotics_context2, doubling_schedule, fixtures, weight_robustness, ConvergenceTrajectory,
    Histogram, RobustnessReport, SamplePath,
};
use evcomb::Degree;

use super::finite::Finite;
use super::normal::NormalEnsemble;
use crate::config::{AsymptoticsSection, EnsembleSource, Number, RobustnessSection, Study};
use crate::table::{num, opt, Table};
use crate::{CliError, ConfigError, During, Output, Run};

pub(super) fn robustness(run: &Run, section: &RobustnessSection) -> Result<Vec<Output>, CliError> {
    let config = run.config();
    let report = match section.source {
        EnsembleSource::Finite => {
            let finite = config
                .finite
                .as_ref()
                .ok_or_else(|| run.bad(ConfigError::new("source = \"finite\" needs a [finite] section")))?;
            let ensemble = Finite::<f64>::load(run, finite, Number::float)?;
            let psi0 = ensemble.psi0.ok_or_else(|| run.bad(ConfigError::new("robustness needs finite.hypothesis")))?;
            weight_robustness(
                &ensemble.bases,
                &ensemble.alpha,
                section.concentration,
                section.replicates,
                psi0,
                run.seed,
                run.epsilon,
            )
        }
        EnsembleSource::Normal => {
            let normal = config
                .normal
                .as_ref()
                .ok_or_else(|| run.bad(ConfigError::new("source = \"normal\" needs a [normal] section")))?;
            let ensemble = NormalEnsemble::load(run, normal)?;
            let &(n, xbar) = ensemble.data.get(section.row).ok_or_else(|| {
                run.bad(ConfigError::new(format!(
                    "row {} is out of range for {} data rows",
                    section.row,
                    ensemble.data.len()
                )))
            })?;
            let grid = ensemble.parameter_grid()?;
            let psi0 =
                ensemble.psi0(&grid).ok_or_else(|| run.bad(ConfigError::new("robustness needs normal.hypothesis")))?;
            let bases = ensemble.bases(n, xbar, grid)?;
            weight_robustness(
                &bases,
                &ensemble.alpha,
                section.concentration,
                section.replicates,
                psi0,
                run.seed,
                run.epsilon,
            )
        }
    }
    .during("weight robustness")?;
    Ok(robustness_tables(&report))
}

fn robustness_tables(report: &RobustnessReport) -> Vec<Output> {
    let mut summary = Table::new([
        "concentration",
        "replicates",
        "baseline_verdict",
        "baseline_strength",
        "favor",
        "against",
        "neutral",
        "agreement",
    ]);
    let [favor, against, neutral] = report.proportions;
    summary.push([
        num(report.concentration),
        report.draws.len().to_string(),
        report.baseline_verdict.to_string(),
        num(report.baseline_strength),
        num(favor),
        num(against),
        num(neutral),
        num(report.agreement),
    ]);

    let k = report.alpha0.len();
    let mut header = vec!["replicate".to_string()];
    header.extend((1..=k).map(|i| format!("alpha_{i}")));
    header.extend(["verdict", "strength", "estimate", "prior_content", "posterior_content"].map(String::from));
    let mut draws = Table::new(header);
    for (r, d) in report.draws.iter().enumerate() {
        let mut row = vec![(r + 1).to_string()];
        row.extend(d.alpha.iter().map(|a| num(*a)));
        row.extend([
            d.verdict.to_string(),
            num(d.strength),
            opt(d.estimate),
            num(d.prior_content),
            num(d.posterior_content),
        ]);
        draws.push(row);
    }

    let mut histograms = Table::new(["quantity", "bin", "lower", "upper", "count"]);
    for (name, h) in [
        ("estimate", &report.estimates),
        ("prior_content", &report.prior_contents),
        ("posterior_content", &report.posterior_contents),
    ] {
        push_histogram(&mut histograms, name, h);
    }
    vec![
        Output::new("robustness_summary", summary),
        Output::new("robustness_draws", draws),
        Output::new("robustness_histograms", histograms),
    ]
}

fn push_histogram(table: &mut Table, name: &str, h: &Histogram) {
    let width = h.bin_width();
    for (b, count) in h.counts.iter().enumerate() {
        let lower = h.lower + width * b as f64;
        table.push([name.to_string(), (b + 1).to_string(), num(lower), num(lower + width), count.to_string()]);
    }
}

pub(super) fn asymptotics(run: &Run, section: &AsymptoticsSection) -> Result<Vec<Output>, CliError> {
    let degree = match &section.degree {
        Some(d) => {
            if section.study != Study::Context1 {
                return Err(run.bad(run.loaded.error(d, "degree applies only to study = \"context1\"")));
            }
            d.get_ref()
                .degree(Number::float)
                .ok_or_else(|| run.bad(run.loaded.error(d, "not a degree (a number, \"inf\" or \"-inf\")")))?
        }
        None => Degree::linear(),
    };
    if section.max_exponent > 30 {
        return Err(run.bad(ConfigError::new("max_exponent above 30 is not supported")));
    }
    let schedule = doubling_schedule(section.max_exponent);
    let trajectory = match section.study {
        Study::Context1 => asymptotics_context1(&fixtures::context1(degree), &schedule, section.replicates, run.seed),
        Study::OneTrue => asymptotics_context2(&fixtures::one_true_model(), &schedule, section.replicates, run.seed),
        Study::TwoTrue => asymptotics_context2(&fixtures::two_true_models(), &schedule, section.replicates, run.seed),
        Study::StarOneTrue => {
            asymptotics_context2(&fixtures::condition_star_one_true(), &schedule, section.replicates, run.seed)
        }
        Study::StarTwoTrue => {
            asymptotics_context2(&fixtures::condition_star_two_true(), &schedule, section.replicates, run.seed)
        }
    }
    .during("asymptotics")?;
    Ok(asymptotics_tables(&trajectory, section.tolerance))
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (total, count) = values.fold((0.0, 0usize), |(t, c), v| (t + v, c + 1));
    (count > 0).then(|| total / count as f64)
}

fn asymptotics_tables(trajectory: &ConvergenceTrajectory, tolerance: f64) -> Vec<Output> {
    let limits = &trajectory.limits;
    let check = trajectory.terminal_check(tolerance);
    let mut terminal = Table::new(["quantity", "limit", "pass_rate", "tolerance"]);
    let weights_limit = limits.weights.iter().map(|w| num(*w)).collect::<Vec<_>>().join(";");
    terminal.push(["weights".to_string(), weights_limit, num(check.weights), num(tolerance)]);
    terminal.push(["rb".to_string(), num(limits.rb), num(check.rb), num(tolerance)]);
    terminal.push([
        "posterior_mass".to_string(),
        num(limits.posterior_mass),
        num(check.posterior_mass),
        num(tolerance),
    ]);
    if let (Some(l), Some(r)) = (limits.strength, check.strength) {
        terminal.push(["strength".to_string(), num(l), num(r), num(tolerance)]);
    }
    if let (Some(l), Some(r)) = (limits.predictive_ratio, check.predictive_ratio) {
        terminal.push(["predictive_ratio".to_string(), num(l), num(r), num(tolerance)]);
    }

    let k = limits.weights.len();
    let mut header = vec!["n".to_string()];
    header.extend((1..=k).map(|i| format!("weight_{i}")));
    header.extend(["rb", "posterior_mass", "strength", "predictive_ratio"].map(String::from));
    let mut means = Table::new(header);
    let paths = &trajectory.paths;
    for (step, n) in trajectory.schedule.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend((0..k).map(|i| opt(mean(paths.iter().filter_map(|p| p.weights.get(step).map(|w| w[i]))))));
        let columns: [fn(&SamplePath) -> &[f64]; 4] =
            [|p| &p.rb, |p| &p.posterior_mass, |p| &p.strength, |p| &p.predictive_ratio];
        for column in columns {
            row.push(opt(mean(paths.iter().filter_map(|p| column(p).get(step).copied()))));
        }
        means.push(row);
    }
    vec![Output::new("asymptotics_terminal", terminal), Output::new("asymptotics_trajectory", means)]
}

mod combine;
mod elicit;
mod finite;
mod normal;
mod regress;
mod studies;

use evcomb::{Density, EvidenceSummary, Scalar, Support};

use crate::config::Subcommand;
use crate::table::num;
use crate::{CliError, Output, Run};

pub(crate) fn dispatch(run: &Run) -> Result<Vec<Output>, CliError> {
    let config = run.config();
    let mut outputs = Vec::new();
    match run.subcommand {
        Subcommand::Pool | Subcommand::Evidence => {
            if config.finite.is_none() && config.normal.is_none() {
                return Err(run.missing("finite] or [normal"));
            }
            if let Some(section) = &config.finite {
                outputs.extend(finite::run(run, section)?);
            }
            if let Some(section) = &config.normal {
                outputs.extend(normal::pool_or_evidence(run, section)?);
            }
        }
        Subcommand::Combine => {
            if config.context2.is_none() && config.location.is_none() {
                return Err(run.missing("context2] or [location"));
            }
            if let Some(section) = &config.context2 {
                outputs.extend(combine::mixture(run, section)?);
            }
            if let Some(section) = &config.location {
                outputs.extend(combine::location(run, section)?);
            }
        }
        Subcommand::Predict => {
            let section = config.normal.as_ref().ok_or_else(|| run.missing("normal"))?;
            outputs.extend(normal::predict(run, section)?);
        }
        Subcommand::Elicit => {
            let section = config.elicit.as_ref().ok_or_else(|| run.missing("elicit"))?;
            outputs.extend(elicit::run(section)?);
        }
        Subcommand::Regress => {
            let section = config.regress.as_ref().ok_or_else(|| run.missing("regress"))?;
            let elicitation = config.elicit.as_ref().ok_or_else(|| run.missing("elicit"))?;
            outputs.extend(regress::run(run, section, elicitation)?);
        }
        Subcommand::Robustness => {
            let section = config.robustness.as_ref().ok_or_else(|| run.missing("robustness"))?;
            outputs.extend(studies::robustness(run, section)?);
        }
        Subcommand::Asymptotics => {
            let section = config.asymptotics.as_ref().ok_or_else(|| run.missing("asymptotics"))?;
            outputs.extend(studies::asymptotics(run, section)?);
        }
    }
    Ok(outputs)
}

/// Header cells matching [`summary_cells`].
const SUMMARY_HEADER: [&str; 5] = ["estimate", "plausible", "prior_content", "posterior_content", "strength"];

/// Estimate, plausible region, contents and strength. Regions on grids are
/// written as `lower:upper` runs, on finite supports as labels, both
/// separated by `;`.
fn summary_cells<D: Density>(summary: &EvidenceSummary<D::Scalar>, support: &D::Support) -> Vec<String> {
    let plausible: Vec<String> = if support.coordinate(0).is_some() {
        summary.intervals(support).iter().map(|(a, b)| format!("{}:{}", num(*a), num(*b))).collect()
    } else {
        summary.plausible.iter().map(|&j| support.label(j)).collect()
    };
    vec![
        summary.estimate.map(|j| support.label(j)).unwrap_or_default(),
        plausible.join(";"),
        num(summary.prior_content.to_f64_lossy()),
        num(summary.posterior_content.to_f64_lossy()),
        summary.strength.as_ref().map(|s| num(s.to_f64_lossy())).unwrap_or_default(),
    ]
}

fn value<S: Scalar>(x: &S) -> String {
    num(x.to_f64_lossy())
}

//! Error-family weights for a simple linear regression, and optionally the
//! evidence for its slope.

use evcomb::regression::{
    beta2_evidence, model_weights_regression, read_income_investment, ErrorFamily, MonteCarlo, RegressionData,
};
use evcomb::{Density, Grid, GridDensity};

use super::{elicit, summary_cells, SUMMARY_HEADER};
use crate::config::{ElicitSection, Number, RegressSection};
use crate::table::{num, Table};
use crate::{CliError, During, Output, Run};

pub(super) fn run(run: &Run, section: &RegressSection, elicitation: &ElicitSection) -> Result<Vec<Output>, CliError> {
    let loaded = &run.loaded;
    let path = loaded.resolve(section.data.get_ref());
    let file = std::fs::File::open(&path)
        .map_err(|e| run.bad(loaded.error(&section.data, format!("cannot open {}: {e}", path.display()))))?;
    let (income, investment) =
        read_income_investment(file).map_err(|e| run.bad(loaded.error(&section.data, e.to_string())))?;
    let data =
        RegressionData::preprocess(&income, &investment, section.center).during("preparing the regression data")?;

    let lambdas = section.lambdas.get_ref();
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 2.0 && l.is_finite())) {
        return Err(run.bad(loaded.error(&section.lambdas, "lambdas must be finite and greater than 2")));
    }
    let alpha = match &section.alpha {
        Some(a) => {
            let alpha = run.check(loaded.simplex(a, "alpha", Number::float))?;
            if alpha.len() != 2 {
                return Err(run.bad(loaded.error(a, "alpha weighs the normal and the t family, so it needs 2 entries")));
            }
            alpha
        }
        None => vec![0.5, 0.5],
    };
    let prior = elicit::prior(elicitation)?;
    let mc =
        MonteCarlo { draws: section.draws, seed: run.seed, ess_floor: section.ess_floor, proposal: section.proposal };

    let mut table = Table::new([
        "lambda",
        "weight_normal",
        "weight_t",
        "se_normal",
        "se_t",
        "log_marginal_normal",
        "log_marginal_t",
        "log_ancillary_normal",
        "log_ancillary_t",
        "ess_normal",
        "ess_t",
    ]);
    for &lambda in lambdas {
        let families = [ErrorFamily::Normal, ErrorFamily::Student { lambda }];
        let w = model_weights_regression(&data, &prior, &families, &alpha, &mc).during("model weights")?;
        table.push([
            num(lambda),
            num(w.weights[0]),
            num(w.weights[1]),
            num(w.standard_errors[0]),
            num(w.standard_errors[1]),
            num(w.log_marginals[0]),
            num(w.log_marginals[1]),
            num(w.log_ancillary[0]),
            num(w.log_ancillary[1]),
            num(w.effective_sample_sizes[0]),
            num(w.effective_sample_sizes[1]),
        ]);
    }
    let mut outputs = vec![Output::new("regress_weights", table)];

    if let Some(slope) = &section.slope {
        let family = match slope.lambda {
            Some(lambda) => ErrorFamily::Student { lambda },
            None => ErrorFamily::Normal,
        };
        let grid = Grid::new(slope.lower, slope.upper, slope.points).during("building the slope grid")?;
        let e =
            beta2_evidence(&data, &prior, family, grid, &mc, slope.hypothesis, run.epsilon).during("slope evidence")?;
        let mut header = vec!["family"];
        header.extend(SUMMARY_HEADER);
        let mut summary = Table::new(header);
        let mut row = vec![family.label()];
        row.extend(summary_cells::<GridDensity<f64>>(&e.summary, &grid));
        summary.push(row);
        let mut plot = Table::new(["beta2", "prior", "posterior", "rb"]);
        for (j, b) in grid.nodes().enumerate() {
            plot.push([num(b), num(e.prior.values()[j]), num(e.posterior.values()[j]), num(e.evidence.values()[j])]);
        }
        outputs.push(Output::new("regress_slope_summary", summary));
        outputs.push(Output::new("regress_slope_plot", plot));
    }
    Ok(outputs)
}

//! Prior elicitation for the regression coefficients and error scale.

use evcomb::elicitation::{elicit_gamma, elicit_tau0, QuantileConvention, RegressionPrior};

use crate::config::ElicitSection;
use crate::table::{num, Table};
use crate::{CliError, During, Output};

/// Residual tolerance for the gamma equations.
const TOLERANCE: f64 = 1e-8;

pub(super) fn prior(section: &ElicitSection) -> Result<RegressionPrior, CliError> {
    let input = section.input();
    let tau0 = elicit_tau0(&input).during("eliciting tau0")?;
    let (alpha1, alpha2) = elicit_gamma(&input, section.convention, TOLERANCE).during("eliciting the gamma prior")?;
    Ok(RegressionPrior { tau0, alpha1, alpha2 })
}

pub(super) fn run(section: &ElicitSection) -> Result<Vec<Output>, CliError> {
    let p = prior(section)?;
    let z = section.convention.z(section.gamma).during("normal quantile")?;
    let convention = match section.convention {
        QuantileConvention::TwoSided => "two_sided",
        QuantileConvention::Standard => "standard",
    };
    let mut table = Table::new(["tau0", "alpha1", "alpha2", "z", "convention"]);
    table.push([num(p.tau0), num(p.alpha1), num(p.alpha2), num(z), convention.to_string()]);
    Ok(vec![Output::new("elicit", table)])
}

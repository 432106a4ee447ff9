//! Bases under different models, combined through the weighted mixture of
//! their relative belief ratios.

use evcomb::context2::{
    ancillary_weights, condition_star_weights, jeffrey_posterior, summarize_ensemble, CauchyLocationBase,
    ConditionalPredictive, HeterogeneousEnsemble, NormalLocationBase,
};
use evcomb::{
    base_evidence, cauchy_location_scale, consensus_audit, Density, FiniteDensity, InferenceBase, Labels, Support,
};

use super::{summary_cells, SUMMARY_HEADER};
use crate::config::{Context2Section, LocationBase, LocationSection, Number};
use crate::table::{num, Table};
use crate::{CliError, During, Output, Run};

pub(super) fn mixture(run: &Run, section: &Context2Section) -> Result<Vec<Output>, CliError> {
    let loaded = &run.loaded;
    let labels = Labels::new(section.interest.get_ref().clone())
        .map_err(|e| run.bad(loaded.error(&section.interest, e.to_string())))?;
    let alpha = run.check(loaded.simplex(&section.alpha, "alpha", Number::float))?;
    if alpha.len() != section.bases.len() {
        return Err(
            run.bad(loaded.error(&section.alpha, format!("{} weights for {} bases", alpha.len(), section.bases.len())))
        );
    }
    let names: Vec<String> = section
        .bases
        .iter()
        .enumerate()
        .map(|(i, b)| b.name.clone().unwrap_or_else(|| format!("base{}", i + 1)))
        .collect();
    let bases = section
        .bases
        .iter()
        .zip(&names)
        .map(|(b, name)| {
            let prior = run.check(loaded.numbers(&b.prior, "prior", Number::float))?;
            let likelihood = run.check(loaded.numbers(&b.likelihood, "likelihood", Number::float))?;
            if prior.len() != labels.len() || likelihood.len() != labels.len() {
                return Err(run.bad(
                    loaded.error(&b.prior, format!("{name}: prior and likelihood need {} entries", labels.len())),
                ));
            }
            let prior = FiniteDensity::new(labels.clone(), prior)
                .map_err(|e| run.bad(loaded.error(&b.prior, format!("{name}: {e}"))))?;
            InferenceBase::new(prior, likelihood).during("building an inference base")
        })
        .collect::<Result<Vec<_>, _>>()?;
    let psi0 = section
        .hypothesis
        .as_ref()
        .map(|h| {
            labels
                .position(h.get_ref())
                .ok_or_else(|| run.bad(loaded.error(h, format!("unknown value {:?}", h.get_ref()))))
        })
        .transpose()?;

    let predictives: Vec<f64> = bases.iter().map(|b| *b.predictive()).collect();
    let ensemble = match &section.condition_star {
        Some(star) => {
            let logs: Vec<f64> = predictives.iter().map(|m| m.ln()).collect();
            let weights = condition_star_weights(star, &logs).during("condition-star weights")?;
            HeterogeneousEnsemble::with_weights(bases, alpha, weights)
        }
        None => HeterogeneousEnsemble::new(bases, alpha),
    }
    .during("building the ensemble")?;

    let inputs = ensemble
        .bases()
        .iter()
        .map(|b| base_evidence(b, run.epsilon))
        .collect::<evcomb::Result<Vec<_>>>()
        .during("base evidence")?;
    let (rb, summary) = summarize_ensemble(&ensemble, run.epsilon, psi0).during("mixture evidence")?;
    let prior = ensemble.prior_mixture().during("prior mixture")?;
    let posterior = jeffrey_posterior(&ensemble).during("Jeffrey posterior")?;

    let mut weights = Table::new(["base", "alpha", "predictive", "weight"]);
    for (i, name) in names.iter().enumerate() {
        weights.push([name.clone(), num(ensemble.alpha()[i]), num(predictives[i]), num(ensemble.weights()[i])]);
    }

    let mut header: Vec<String> = vec!["value".into()];
    header.extend(names.iter().map(|n| format!("rb_{n}")));
    header.extend(["prior_mixture", "jeffrey_posterior", "rb", "verdict"].map(String::from));
    let mut evidence = Table::new(header);
    for j in 0..labels.len() {
        let mut row = vec![labels.label(j)];
        row.extend(inputs.iter().map(|f| num(f.values()[j])));
        row.extend([
            num(prior.values()[j]),
            num(posterior.values()[j]),
            num(rb.values()[j]),
            rb.verdict(j).to_string(),
        ]);
        evidence.push(row);
    }

    let mut table = Table::new(SUMMARY_HEADER);
    table.push(summary_cells::<FiniteDensity<f64>>(&summary, &labels));

    let mut audit = Table::new(["value", "pattern", "combined", "preserved", "reversed"]);
    for label in consensus_audit(&inputs, &rb).during("consensus audit")?.labels {
        audit.push([
            label.label,
            label.pattern.to_string(),
            label.combined.to_string(),
            label.preserved.to_string(),
            label.reversed.to_string(),
        ]);
    }
    Ok(vec![
        Output::new("combine_weights", weights),
        Output::new("combine_evidence", evidence),
        Output::new("combine_summary", table),
        Output::new("combine_audit", audit),
    ])
}

enum Location {
    Normal(NormalLocationBase),
    Cauchy(CauchyLocationBase),
}

impl Location {
    fn predictive(&self) -> &dyn ConditionalPredictive {
        match self {
            Location::Normal(b) => b,
            Location::Cauchy(b) => b,
        }
    }
}

pub(super) fn location(run: &Run, section: &LocationSection) -> Result<Vec<Output>, CliError> {
    let loaded = &run.loaded;
    let alpha = run.check(loaded.simplex(&section.alpha, "alpha", Number::float))?;
    if alpha.len() != section.bases.len() {
        return Err(
            run.bad(loaded.error(&section.alpha, format!("{} weights for {} bases", alpha.len(), section.bases.len())))
        );
    }
    let models = section
        .bases
        .iter()
        .map(|b| match *b {
            LocationBase::Normal { prior_mean, prior_variance, sampling_variance } => {
                Ok(Location::Normal(NormalLocationBase { prior_mean, prior_variance, sampling_variance }))
            }
            LocationBase::Cauchy { prior_mean, prior_variance, sigma0 } => {
                let scale = cauchy_location_scale(sigma0).during("Cauchy scale")?;
                Ok(Location::Cauchy(CauchyLocationBase { prior_mean, prior_variance, scale }))
            }
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let dyns: Vec<&dyn ConditionalPredictive> = models.iter().map(Location::predictive).collect();
    let weights = ancillary_weights(&alpha, &dyns, &section.sample).during("ancillary weights")?;

    let mut table = Table::new(["base", "family", "scale", "log_conditional_predictive", "weight"]);
    for (i, (model, base)) in models.iter().zip(&dyns).enumerate() {
        let (family, scale) = match model {
            Location::Normal(b) => ("normal", b.sampling_variance.sqrt()),
            Location::Cauchy(b) => ("cauchy", b.scale),
        };
        let log_m = base.log_conditional_predictive(&section.sample).during("conditional predictive")?;
        table.push([format!("base{}", i + 1), family.into(), num(scale), num(log_m), num(weights[i])]);
    }
    Ok(vec![Output::new("location_weights", table)])
}

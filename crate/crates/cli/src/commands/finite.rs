//! Pooling and evidence for Context I bases on a finite parameter space.

use evcomb::{
    base_evidence, consensus_audit, pool_priors, pooled_base, posterior_weights, rb_power_mean, summarize, Degree,
    EvidenceFunction, FiniteDensity, InferenceBase, Labels, PoolSpec, Scalar, Support,
};
use num_rational::BigRational;

use super::{summary_cells, value, SUMMARY_HEADER};
use crate::config::{FiniteSection, Number, Subcommand};
use crate::table::Table;
use crate::{CliError, During, Output, Run};

type Base<S> = InferenceBase<FiniteDensity<S>>;

pub(super) fn run(run: &Run, section: &FiniteSection) -> Result<Vec<Output>, CliError> {
    if section.exact {
        Finite::<BigRational>::load(run, section, Number::exact)?.outputs(run)
    } else {
        Finite::<f64>::load(run, section, Number::float)?.outputs(run)
    }
}

pub(super) struct Finite<S: Scalar> {
    pub bases: Vec<Base<S>>,
    pub alpha: Vec<S>,
    degrees: Vec<Degree<S>>,
    pub psi0: Option<usize>,
    epsilon: S,
    exact: bool,
}

impl<S: Scalar> Finite<S> {
    pub fn load(run: &Run, section: &FiniteSection, parse: fn(&Number) -> Option<S>) -> Result<Self, CliError> {
        let loaded = &run.loaded;
        let labels = Labels::new(section.parameters.get_ref().clone())
            .map_err(|e| run.bad(loaded.error(&section.parameters, e.to_string())))?;
        let likelihood = run.check(loaded.numbers(&section.likelihood, "likelihood", parse))?;
        if likelihood.len() != labels.len() {
            return Err(run.bad(loaded.error(
                &section.likelihood,
                format!("{} likelihood values for {} parameters", likelihood.len(), labels.len()),
            )));
        }
        let alpha = run.check(loaded.simplex(&section.alpha, "alpha", parse))?;
        if alpha.len() != section.priors.get_ref().len() {
            return Err(run.bad(loaded.error(
                &section.alpha,
                format!("{} weights for {} priors", alpha.len(), section.priors.get_ref().len()),
            )));
        }
        let bases = section
            .priors
            .get_ref()
            .iter()
            .enumerate()
            .map(|(i, raw)| {
                let masses = raw
                    .iter()
                    .map(|v| {
                        parse(v).ok_or_else(|| {
                            run.bad(loaded.error(&section.priors, format!("prior {}: {v:?} is not a number", i + 1)))
                        })
                    })
                    .collect::<Result<Vec<S>, _>>()?;
                let prior = FiniteDensity::new(labels.clone(), masses)
                    .map_err(|e| run.bad(loaded.error(&section.priors, format!("prior {}: {e}", i + 1))))?;
                InferenceBase::new(prior, likelihood.clone()).during("building an inference base")
            })
            .collect::<Result<Vec<_>, _>>()?;
        let degrees = run.check(loaded.degrees(section.degrees.as_ref(), parse))?;
        let psi0 = section
            .hypothesis
            .as_ref()
            .map(|h| {
                labels
                    .position(h.get_ref())
                    .ok_or_else(|| run.bad(loaded.error(h, format!("unknown parameter {:?}", h.get_ref()))))
            })
            .transpose()?;
        let epsilon =
            S::from_f64(run.epsilon).ok_or_else(|| run.bad(crate::ConfigError::new("epsilon is not representable")))?;
        Ok(Self { bases, alpha, degrees, psi0, epsilon, exact: section.exact })
    }

    fn spec(&self, degree: &Degree<S>) -> Result<PoolSpec<S>, CliError> {
        PoolSpec::new(degree.clone(), self.alpha.clone()).during("building a pooling spec")
    }

    fn outputs(&self, run: &Run) -> Result<Vec<Output>, CliError> {
        match run.subcommand {
            Subcommand::Pool => self.pool(),
            _ => self.evidence(),
        }
    }

    fn labels(&self) -> &Labels {
        self.bases[0].prior().labels()
    }

    fn pool(&self) -> Result<Vec<Output>, CliError> {
        let k = self.bases.len();
        let mut header: Vec<String> = vec!["degree".into(), "parameter".into()];
        header.extend((1..=k).map(|i| format!("prior_{i}")));
        header.extend(["pooled_prior".into(), "pooled_posterior".into()]);
        if self.exact {
            header.extend(["pooled_prior_exact".into(), "pooled_posterior_exact".into()]);
        }
        let mut densities = Table::new(header);
        let mut summary = Table::new(["degree", "normalizer", "predictive", "predictive_ratio"]);
        let priors: Vec<FiniteDensity<S>> = self.bases.iter().map(|b| b.prior().clone()).collect();
        let linear = pooled_base(&self.bases, &self.spec(&Degree::linear())?).during("linear pooling")?;
        for degree in &self.degrees {
            let spec = self.spec(degree)?;
            let pooled = pool_priors(&priors, &spec).during("pooling priors")?;
            let base = pooled_base(&self.bases, &spec).during("pooling priors")?;
            let posterior = base.posterior().during("pooled posterior")?;
            for j in 0..self.labels().len() {
                let mut row = vec![degree.to_string(), self.labels().label(j)];
                row.extend(priors.iter().map(|p| value(&p.masses()[j])));
                row.extend([value(&base.prior().masses()[j]), value(&posterior.masses()[j])]);
                if self.exact {
                    row.extend([base.prior().masses()[j].to_string(), posterior.masses()[j].to_string()]);
                }
                densities.push(row);
            }
            let ratio = linear.predictive().clone() / base.predictive().clone();
            summary.push([degree.to_string(), value(&pooled.normalizer), value(base.predictive()), value(&ratio)]);
        }
        Ok(vec![Output::new("finite_pool", densities), Output::new("finite_pool_summary", summary)])
    }

    fn evidence(&self) -> Result<Vec<Output>, CliError> {
        let mut header = vec!["source", "degree", "parameter", "prior", "posterior", "rb", "verdict"];
        if self.exact {
            header.push("rb_exact");
        }
        let mut evidence = Table::new(header);
        let mut summary_header = vec!["source", "degree", "weight", "predictive"];
        summary_header.extend(SUMMARY_HEADER);
        let mut summary = Table::new(summary_header);
        let mut audit = Table::new(["degree", "parameter", "pattern", "combined", "preserved", "reversed"]);

        let weights = posterior_weights(&self.bases, &self.alpha).during("posterior weights")?;
        let inputs = self
            .bases
            .iter()
            .map(|b| base_evidence(b, self.epsilon.clone()))
            .collect::<evcomb::Result<Vec<_>>>()
            .during("base evidence")?;
        for (i, (base, rb)) in self.bases.iter().zip(&inputs).enumerate() {
            let source = format!("base{}", i + 1);
            let posterior = base.posterior().during("base posterior")?;
            self.push_evidence(&mut evidence, &source, "", base.prior(), &posterior, rb);
            let s = summarize(rb, base.prior(), &posterior, self.psi0).during("summarizing evidence")?;
            let mut row = vec![source, String::new(), value(&weights[i]), value(base.predictive())];
            row.extend(summary_cells::<FiniteDensity<S>>(&s, self.labels()));
            summary.push(row);
        }
        for degree in &self.degrees {
            let spec = self.spec(degree)?;
            let rb = rb_power_mean(&self.bases, &spec, self.epsilon.clone()).during("pooled evidence")?;
            let pooled = pooled_base(&self.bases, &spec).during("pooling priors")?;
            let posterior = pooled.posterior().during("pooled posterior")?;
            let t = degree.to_string();
            self.push_evidence(&mut evidence, "pool", &t, pooled.prior(), &posterior, &rb);
            let s = summarize(&rb, pooled.prior(), &posterior, self.psi0).during("summarizing evidence")?;
            let mut row = vec!["pool".to_string(), t.clone(), String::new(), value(pooled.predictive())];
            row.extend(summary_cells::<FiniteDensity<S>>(&s, self.labels()));
            summary.push(row);
            let report = consensus_audit(&inputs, &rb).during("consensus audit")?;
            for label in &report.labels {
                audit.push([
                    t.clone(),
                    label.label.clone(),
                    label.pattern.to_string(),
                    label.combined.to_string(),
                    label.preserved.to_string(),
                    label.reversed.to_string(),
                ]);
            }
        }
        Ok(vec![
            Output::new("finite_evidence", evidence),
            Output::new("finite_summary", summary),
            Output::new("finite_audit", audit),
        ])
    }

    fn push_evidence(
        &self,
        table: &mut Table,
        source: &str,
        degree: &str,
        prior: &FiniteDensity<S>,
        posterior: &FiniteDensity<S>,
        evidence: &EvidenceFunction<FiniteDensity<S>>,
    ) {
        for (j, rb) in evidence.values().iter().enumerate() {
            let mut row = vec![
                source.to_string(),
                degree.to_string(),
                self.labels().label(j),
                value(&prior.masses()[j]),
                value(&posterior.masses()[j]),
                value(rb),
                evidence.verdict(j).to_string(),
            ];
            if self.exact {
                row.push(rb.to_string());
            }
            table.push(row);
        }
    }
}

//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 2, 5 and 6 contain published values or claims that a faithful
//! implementation does not reproduce. They are checked as stated and
//! reported, but only an unexpected failure makes the run exit nonzero.

mod common;

use std::process::ExitCode;

use evcomb::context2::{
    ancillary_weights, mixture_rb, predict, prediction_grid, ConditionalPredictive, HeterogeneousEnsemble,
    LimitWeights, NormalLocationBase, PredictionMode,
};
use evcomb::elicitation::{elicit, ElicitationInput, QuantileConvention};
use evcomb::regression::{model_weights_regression, read_income_investment, ErrorFamily, MonteCarlo, RegressionData};
use evcomb::special::gamma_cdf;
use evcomb::studies::{asymptotics_context1, asymptotics_context2, doubling_schedule, fixtures};
use evcomb::{
    base_evidence, consensus_audit, linear_evidence, parse_rational, pooled_base, posterior_weights, rb_power_mean,
    summarize, Degree, ExactBase, ExactDensity, Grid, InferenceBase, Labels, NormalConjugateSpec, PoolSpec,
};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const EXPECTED_FAILURES: [usize; 3] = [2, 5, 6];

/// Named sub-checks of one criterion.
#[derive(Default)]
struct Outcome {
    checks: Vec<(String, bool)>,
}

impl Outcome {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    fn near(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        self.check(format!("{name}: {got:.4} vs {} ± {tol}", (want * 1e4).round() / 1e4), (got - want).abs() <= tol);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn two_prior_bases() -> Vec<ExactBase> {
    let labels = Labels::new(["a", "b"]).unwrap();
    [("1/4", "3/4"), ("1", "0")]
        .iter()
        .map(|(a, b)| {
            let prior = ExactDensity::new(labels.clone(), vec![q(a), q(b)]).unwrap();
            InferenceBase::new(prior, vec![q("1/4"), q("1/3")]).unwrap()
        })
        .collect()
}

fn half(degree: Degree<BigRational>) -> PoolSpec<BigRational> {
    PoolSpec::new(degree, vec![q("1/2"), q("1/2")]).unwrap()
}

fn criterion_1() -> Outcome {
    let bases = two_prior_bases();
    let eps = BigRational::from_integer(0.into());
    let mut out = Outcome::default();
    let exact = |out: &mut Outcome, name: &str, got: &BigRational, want: &str| {
        out.check(format!("{name} = {got} (want {want})"), *got == q(want));
    };
    exact(&mut out, "RB_1(a|0)", &base_evidence(&bases[0], eps.clone()).unwrap().values()[0], "4/5");
    exact(&mut out, "RB_2(a|0)", &base_evidence(&bases[1], eps.clone()).unwrap().values()[0], "1");
    exact(&mut out, "m_{1,1/2}(0)", pooled_base(&bases, &half(Degree::linear())).unwrap().predictive(), "9/32");
    for (name, degree, want) in [
        ("RB_{1,1/2}(a|0)", Degree::linear(), "8/9"),
        ("RB_{0,1/2}(a|0)", Degree::geometric(), "1"),
        ("RB_{-inf,1/2}(a|0)", Degree::NegInf, "1"),
    ] {
        exact(&mut out, name, &rb_power_mean(&bases, &half(degree), eps.clone()).unwrap().values()[0], want);
    }
    out
}

struct NormalRow {
    n: u64,
    xbar: f64,
    weights: [f64; 3],
    interval: (f64, f64),
    content: f64,
}

const NORMAL_ROWS: [NormalRow; 4] = [
    NormalRow { n: 5, xbar: 10.92, weights: [0.431, 0.164, 0.406], interval: (10.0, 11.7), content: 0.93 },
    NormalRow { n: 10, xbar: 9.87, weights: [0.176, 0.507, 0.317], interval: (9.3, 10.5), content: 0.95 },
    NormalRow { n: 25, xbar: 9.96, weights: [0.192, 0.478, 0.330], interval: (9.5, 10.4), content: 0.97 },
    NormalRow { n: 100, xbar: 10.12, weights: [0.229, 0.418, 0.354], interval: (9.9, 10.4), content: 0.99 },
];

const PRIORS: [(f64, f64); 3] = [(12.0, 2.0), (9.0, 1.0), (11.0, 4.0)];
const THIRDS: [f64; 3] = [1.0 / 3.0; 3];

fn specs(n: u64, xbar: f64) -> Vec<NormalConjugateSpec> {
    PRIORS
        .iter()
        .map(|&(m, v)| NormalConjugateSpec { prior_mean: m, prior_variance: v, sampling_variance: 1.0, n, xbar })
        .collect()
}

fn single_run(intervals: &[(f64, f64)]) -> (f64, f64) {
    match intervals {
        [only] => *only,
        _ => (f64::NAN, f64::NAN),
    }
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::default();
    let grid = Grid::new(0.0, 22.0, 44_001).unwrap();
    for row in &NORMAL_ROWS {
        let bases: Vec<_> =
            specs(row.n, row.xbar).iter().map(|s| InferenceBase::normal_conjugate(s, grid).unwrap()).collect();
        let w = posterior_weights(&bases, &THIRDS).unwrap();
        for (i, (got, want)) in w.iter().zip(&row.weights).enumerate() {
            out.near(&format!("n={} weight {}", row.n, i + 1), *got, *want, 0.002);
        }
        let evidence = linear_evidence(&bases, &THIRDS, 1e-9).unwrap();
        let pooled = pooled_base(&bases, &PoolSpec::new(Degree::linear(), THIRDS.to_vec()).unwrap()).unwrap();
        let summary = summarize(&evidence, pooled.prior(), &pooled.posterior().unwrap(), None).unwrap();
        let (lo, hi) = single_run(&summary.intervals(&grid));
        out.near(&format!("n={} lower", row.n), lo, row.interval.0, 0.05);
        out.near(&format!("n={} upper", row.n), hi, row.interval.1, 0.05);
        out.near(&format!("n={} content", row.n), summary.posterior_content, row.content, 0.01);
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::default();
    type Row = (Option<(u64, f64)>, (f64, f64), f64);
    let rows: [Row; 5] = [
        (Some((5, 10.92)), (9.2, 13.7), 0.94),
        (Some((10, 9.87)), (7.7, 11.8), 0.94),
        (Some((25, 9.96)), (7.9, 11.9), 0.95),
        (Some((100, 10.12)), (8.1, 12.2), 0.96),
        (None, (8.0, 12.0), 0.96),
    ];
    for (data, interval, content) in rows {
        let (specs, mode, label) = match data {
            Some((n, xbar)) => (specs(n, xbar), PredictionMode::FiniteN, format!("n={n}")),
            None => {
                (specs(1, 10.0), PredictionMode::Limit { mu: 10.0, weights: LimitWeights::Derived }, "n=inf".into())
            }
        };
        let grid = prediction_grid(&specs, 8193).unwrap();
        let p = predict(&specs, &THIRDS, mode, grid, 1e-9).unwrap();
        let (lo, hi) = single_run(&p.summary.intervals(&grid));
        out.near(&format!("{label} lower"), lo, interval.0, 0.1);
        out.near(&format!("{label} upper"), hi, interval.1, 0.1);
        out.near(&format!("{label} content"), p.summary.posterior_content, content, 0.01);
    }
    out
}

fn elicitation_input() -> ElicitationInput {
    ElicitationInput { gamma: 0.99, m0: 30.0, s1: 10.0, s2: 40.0, zeta0: std::f64::consts::SQRT_2 }
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::default();
    let input = elicitation_input();
    let prior = elicit(&input, 1e-12).unwrap();
    out.near("tau0", prior.tau0, 0.54, 0.02);
    out.near("alpha1", prior.alpha1, 4.05, 0.05);
    out.near("alpha2", prior.alpha2, 140.39, 1.0);
    let z = QuantileConvention::TwoSided.z(input.gamma).unwrap();
    let upper = gamma_cdf(prior.alpha1, 1.0, prior.alpha2 * z * z / (input.s1 * input.s1)).unwrap();
    let lower = gamma_cdf(prior.alpha1, 1.0, prior.alpha2 * z * z / (input.s2 * input.s2)).unwrap();
    let tail = (1.0 - input.gamma) / 2.0;
    out.check(
        format!("upper gamma equation residual {:.1e}", upper - (1.0 - tail)),
        (upper - (1.0 - tail)).abs() <= 1e-8,
    );
    out.check(format!("lower gamma equation residual {:.1e}", lower - tail), (lower - tail).abs() <= 1e-8);
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::default();
    let file = std::fs::File::open(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/investment.csv")).unwrap();
    let (income, investment) = read_income_investment(file).unwrap();
    let data = RegressionData::preprocess(&income, &investment, [340.0, 3.0]).unwrap();
    let prior = elicit(&elicitation_input(), 1e-10).unwrap();
    for (lambda, want, tol) in [(3.0, 1.000, 0.005), (5.0, 0.998, 0.01), (10.0, 0.928, 0.05), (100.0, 0.556, 0.05)] {
        let families = [ErrorFamily::Normal, ErrorFamily::Student { lambda }];
        let w = model_weights_regression(&data, &prior, &families, &[0.5, 0.5], &MonteCarlo::default()).unwrap();
        out.near(&format!("lambda={lambda} normal weight"), w.weights[0], want, tol);
        out.near(&format!("lambda={lambda} t weight"), w.weights[1], 1.0 - want, tol);
    }
    out
}

fn criterion_6() -> Outcome {
    const INSTANCES: usize = 1000;
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let mut violations = [0usize; 10];
    let mut names = [""; 10];
    for _ in 0..INSTANCES {
        let inst = common::instances::Instance::random(&mut rng);
        for (slot, (name, ok)) in common::instances::check(&inst).entries().into_iter().enumerate() {
            names[slot] = name;
            violations[slot] += usize::from(!ok);
        }
    }
    let mut out = Outcome::default();
    for (name, count) in names.iter().zip(violations) {
        out.check(format!("{name}: {count}/{INSTANCES} violations"), count == 0);
    }
    out
}

fn criterion_7() -> Outcome {
    let bases = two_prior_bases();
    let eps = BigRational::from_integer(0.into());
    let inputs: Vec<_> = bases.iter().map(|b| base_evidence(b, eps.clone()).unwrap()).collect();
    let mut out = Outcome::default();
    for (name, degree, flagged) in
        [("t=1", Degree::linear(), false), ("t=0", Degree::geometric(), true), ("t=-inf", Degree::NegInf, true)]
    {
        let combined = rb_power_mean(&bases, &half(degree), eps.clone()).unwrap();
        let audit = consensus_audit(&inputs, &combined).unwrap();
        let labels: Vec<String> = audit.violations().map(|v| v.label.clone()).collect();
        let expected = if flagged { vec!["a".to_string()] } else { Vec::new() };
        out.check(format!("{name} violations {labels:?}"), labels == expected && audit.passed != flagged);
    }
    out
}

fn criterion_8() -> Outcome {
    let schedule = doubling_schedule(fixtures::MAX_EXPONENT);
    let mut out = Outcome::default();
    let degrees = [
        Degree::NegInf,
        Degree::Finite(-2.0),
        Degree::geometric(),
        Degree::Finite(0.5),
        Degree::linear(),
        Degree::Finite(2.0),
        Degree::PosInf,
    ];
    for degree in degrees {
        let label = format!("context I t={degree}");
        let t = asymptotics_context1(&fixtures::context1(degree), &schedule, fixtures::REPLICATES, 1).unwrap();
        let rate = t.terminal_check(fixtures::TERMINAL_TOLERANCE).worst();
        out.check(format!("{label}: pass rate {rate:.2}"), rate >= fixtures::PASS_RATE);
    }
    for (label, study) in [
        ("one true model", fixtures::one_true_model()),
        ("two true models", fixtures::two_true_models()),
        ("condition star, one true", fixtures::condition_star_one_true()),
        ("condition star, two true", fixtures::condition_star_two_true()),
    ] {
        let t = asymptotics_context2(&study, &schedule, fixtures::REPLICATES, 1).unwrap();
        let rate = t.terminal_check(fixtures::TERMINAL_TOLERANCE).worst();
        out.check(format!("{label}: pass rate {rate:.2}"), rate >= fixtures::PASS_RATE);
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::default();
    for (i, (base, sample)) in common::cauchy::fixtures().iter().enumerate() {
        let quad = base.log_conditional_predictive(sample).unwrap();
        let (mc, se) = common::cauchy::mc_oracle(base, sample, 100 + i as u64);
        out.check(format!("cauchy fixture {i}: {quad:.4} vs {mc:.4} ± 3×{se:.4}"), (quad - mc).abs() <= 3.0 * se);
    }

    let (cauchy, sample) = common::cauchy::fixtures().swap_remove(1);
    let normals: Vec<NormalLocationBase> = PRIORS[1..]
        .iter()
        .map(|&(m, v)| NormalLocationBase { prior_mean: m, prior_variance: v, sampling_variance: 1.0 })
        .collect();
    let mixed: [&dyn ConditionalPredictive; 3] = [&cauchy, &normals[0], &normals[1]];
    let w = ancillary_weights(&THIRDS, &mixed, &sample).unwrap();
    let total: f64 = w.iter().sum();
    out.check(format!("weights sum to {total}"), (total - 1.0).abs() <= 1e-12);

    // one shared model: the conditional weights and mixture evidence are
    // the Context I ones
    let row = &NORMAL_ROWS[1];
    let offsets = [-0.7, 0.3, 1.1, -0.2, -0.5, 0.4, 0.9, -1.3, 0.6, -0.6];
    let data: Vec<f64> = offsets.iter().map(|d| row.xbar + d).collect();
    let normal_bases: Vec<NormalLocationBase> = PRIORS
        .iter()
        .map(|&(m, v)| NormalLocationBase { prior_mean: m, prior_variance: v, sampling_variance: 1.0 })
        .collect();
    let refs: Vec<&dyn ConditionalPredictive> = normal_bases.iter().map(|b| b as &dyn ConditionalPredictive).collect();
    let conditional = ancillary_weights(&THIRDS, &refs, &data).unwrap();
    let xbar = data.iter().sum::<f64>() / data.len() as f64;
    let grid = prediction_grid(&specs(row.n, xbar), 4097).unwrap();
    let bases: Vec<_> = specs(row.n, xbar).iter().map(|s| InferenceBase::normal_conjugate(s, grid).unwrap()).collect();
    let context_one = posterior_weights(&bases, &THIRDS).unwrap();
    let weight_gap = conditional.iter().zip(&context_one).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out.check(format!("ancillary weights vs Context I: max gap {weight_gap:.1e}"), weight_gap <= 1e-12);
    let ensemble = HeterogeneousEnsemble::with_weights(bases.clone(), THIRDS.to_vec(), conditional).unwrap();
    let mixture = mixture_rb(&ensemble, 1e-9).unwrap();
    let linear = linear_evidence(&bases, &THIRDS, 1e-9).unwrap();
    let rb_gap =
        mixture.values().iter().zip(linear.values()).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max);
    out.check(format!("mixture evidence vs linear pool: max gap {rb_gap:.1e}"), rb_gap <= 1e-12);
    out
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (number, run) in criteria {
        let outcome = run();
        let passed = outcome.passed();
        println!("criterion {number}: {}", if passed { "PASS" } else { "FAIL" });
        for (name, ok) in &outcome.checks {
            println!("    [{}] {name}", if *ok { "ok" } else { "x " });
        }
        if !passed && !EXPECTED_FAILURES.contains(&number) {
            unexpected.push(number);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}

use evcomb::elicitation::{elicit, ElicitationInput};
use evcomb::regression::{model_weights_regression, read_income_investment, ErrorFamily, MonteCarlo, RegressionData};

fn main() {
    let file = std::fs::File::open(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/investment.csv")).unwrap();
    let (income, investment) = read_income_investment(file).unwrap();
    let data = RegressionData::preprocess(&income, &investment, [340.0, 3.0]).unwrap();
    let input = ElicitationInput { gamma: 0.99, m0: 30.0, s1: 10.0, s2: 40.0, zeta0: std::f64::consts::SQRT_2 };
    let prior = elicit(&input, 1e-10).unwrap();
    for lambda in [100.0, 50.0, 20.0, 10.0, 5.0, 3.0] {
        let t = std::time::Instant::now();
        let w = model_weights_regression(
            &data,
            &prior,
            &[ErrorFamily::Normal, ErrorFamily::Student { lambda }],
            &[0.5, 0.5],
            &MonteCarlo::default(),
        )
        .unwrap();
        println!(
            "lambda={lambda:>5}: normal {:.3} (se {:.4}) t {:.3}  ess {:?}  {:?}",
            w.weights[0],
            w.standard_errors[0],
            w.weights[1],
            w.effective_sample_sizes.iter().map(|e| *e as u64).collect::<Vec<_>>(),
            t.elapsed()
        );
    }
}

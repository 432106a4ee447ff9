//! Independent Monte Carlo oracle for the Cauchy conditional predictive.

use evcomb::cauchy_location_scale;
use evcomb::context2::{location_ancillary, CauchyLocationBase};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Cauchy, Distribution, Normal};

pub const DRAWS: usize = 400_000;

fn log_g(scale: f64, z: f64) -> f64 {
    -(std::f64::consts::PI * scale).ln() - (z / scale).powi(2).ln_1p()
}

/// Mean and variance of the mean of `values`.
fn mean_and_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var / n)
}

/// Monte Carlo `log m(x̄ | a)` and its standard error: the numerator
/// averages the likelihood over prior draws of μ, the denominator is an
/// importance estimate of `∫ Π g(u + a_j) du` under a Cauchy proposal.
pub fn mc_oracle(base: &CauchyLocationBase, sample: &[f64], seed: u64) -> (f64, f64) {
    let (xbar, a) = location_ancillary(sample).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let joint = |u: f64| a.iter().map(|aj| log_g(base.scale, u + aj)).sum::<f64>();

    let prior = Normal::new(base.prior_mean, base.prior_variance.sqrt()).unwrap();
    let log_num: Vec<f64> = (0..DRAWS).map(|_| joint(xbar - prior.sample(&mut rng))).collect();
    let shift_num = log_num.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let num: Vec<f64> = log_num.iter().map(|l| (l - shift_num).exp()).collect();

    let n = sample.len() as f64;
    let proposal_scale = base.scale / n.sqrt();
    let proposal = Cauchy::new(0.0, proposal_scale).unwrap();
    let log_den: Vec<f64> = (0..DRAWS)
        .map(|_| {
            let u = proposal.sample(&mut rng);
            joint(u) - log_g(proposal_scale, u)
        })
        .collect();
    let shift_den = log_den.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let den: Vec<f64> = log_den.iter().map(|l| (l - shift_den).exp()).collect();

    let (mn, vn) = mean_and_var(&num);
    let (md, vd) = mean_and_var(&den);
    let estimate = mn.ln() + shift_num - md.ln() - shift_den;
    (estimate, (vn / (mn * mn) + vd / (md * md)).sqrt())
}

pub fn synthetic_sample(n: usize, location: f64, scale: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let c = Cauchy::new(location, scale).unwrap();
    (0..n).map(|_| c.sample(&mut rng)).collect()
}

/// Bases and samples on which the quadrature is checked.
pub fn fixtures() -> Vec<(CauchyLocationBase, Vec<f64>)> {
    let eta = cauchy_location_scale(1.0).unwrap();
    vec![
        (CauchyLocationBase { prior_mean: 10.0, prior_variance: 2.0, scale: eta }, synthetic_sample(5, 10.4, eta, 11)),
        (CauchyLocationBase { prior_mean: 9.0, prior_variance: 1.0, scale: eta }, synthetic_sample(12, 10.0, eta, 12)),
        (CauchyLocationBase { prior_mean: 0.0, prior_variance: 9.0, scale: 2.0 }, synthetic_sample(3, 1.5, 2.0, 13)),
    ]
}

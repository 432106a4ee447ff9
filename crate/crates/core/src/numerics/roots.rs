use num_traits::Float;

use crate::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 400;

/// Bisection on a bracket where `f` changes sign.
///
/// Stops when the bracket is narrower than `tol`, when `|f(mid)|` is below
/// `tol * 1e-3`, or when the bracket can no longer be split in floating
/// point.
pub fn find_root_monotone<F, Func>(f: Func, lo: F, hi: F, tol: F) -> Result<F>
where
    F: Float,
    Func: Fn(F) -> F,
{
    if !(tol > F::zero()) {
        return Err(Error::InvalidInput("root tolerance must be positive".into()));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::InvalidInput("function is NaN at a bracket endpoint".into()));
    }
    if f_lo == F::zero() {
        return Ok(lo);
    }
    if f_hi == F::zero() {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::SameSignBracket {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
            f_lo: f_lo.to_f64().unwrap_or(f64::NAN),
            f_hi: f_hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = F::one() + F::one();
    let f_tol = tol * F::from(1e-3).unwrap();
    for _ in 0..MAX_ITERATIONS {
        let mid = lo + (hi - lo) / two;
        if hi - lo < tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid.abs() < f_tol {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { operation: "find_root_monotone", iterations: MAX_ITERATIONS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_root() {
        let r = find_root_monotone(|x: f64| x - 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let r = find_root_monotone(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-10).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn same_sign_bracket_is_rejected() {
        let err = find_root_monotone(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::SameSignBracket { .. }));
    }

    #[test]
    fn decreasing_functions_work() {
        let r = find_root_monotone(|x: f64| 3.0 - x, 0.0, 10.0, 1e-12).unwrap();
        assert!((r - 3.0).abs() < 1e-11);
    }

    /// Lower regularized gamma: power series below `shape + 1`, Lentz
    /// continued fraction above.
    fn gamma_p_oracle(a: f64, x: f64) -> f64 {
        let log_prefix = a * x.ln() - x - crate::numerics::special::ln_gamma(a);
        if x < a + 1.0 {
            let (mut term, mut total) = (1.0 / a, 1.0 / a);
            for k in 1..1000 {
                term *= x / (a + k as f64);
                total += term;
            }
            return log_prefix.exp() * total;
        }
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            d = if d.abs() < tiny { tiny } else { d };
            c = b + an / c;
            c = if c.abs() < tiny { tiny } else { c };
            d = 1.0 / d;
            h *= d * c;
        }
        1.0 - log_prefix.exp() * h
    }

    #[test]
    fn gamma_quantile_equation() {
        let z = find_root_monotone(
            |z: f64| crate::numerics::special::gamma_cdf(4.05, 1.0, z).unwrap() - 0.995,
            0.0,
            50.0,
            1e-12,
        )
        .unwrap();
        let oracle = find_root_monotone(|z: f64| gamma_p_oracle(4.05, z) - 0.995, 0.0, 50.0, 1e-12).unwrap();
        assert!((z - oracle).abs() < 1e-8, "{z} vs {oracle}");
        assert!((gamma_p_oracle(4.05, z) - 0.995).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn cubic_roots_within_tol(root in -5.0f64..5.0, scale in 0.1f64..10.0) {
            // strictly increasing cubic with a single real root at `root`
            let f = |x: f64| scale * ((x - root).powi(3) + (x - root));
            let r = find_root_monotone(f, -10.0, 10.0, 1e-10).unwrap();
            prop_assert!((r - root).abs() < 1e-9);
        }
    }
}

//! Scalar abstraction shared by the finite-support code paths.
//!
//! Everything that only needs field arithmetic and ordering (linear pools,
//! relative belief ratios, consensus audits, mixture weights) is written
//! against [`Scalar`], so the same code runs in `f32`, `f64` or exact
//! [`BigRational`] arithmetic. Power means of non-integer degree use
//! [`Scalar::checked_pow`], which in the exact case succeeds only when the
//! result is rational.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Tolerance for "sums to one" checks on finite masses.
    fn mass_tolerance() -> Self;

    /// `self` raised to `exponent`, or `None` when the result is not
    /// representable (negative base, zero to a negative power, or an
    /// irrational result in exact arithmetic).
    fn checked_pow(&self, exponent: &Self) -> Option<Self>;

    fn is_finite_value(&self) -> bool;

    /// Converts an `f64` literal. Panics only on NaN/infinite input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn mass_tolerance() -> Self {
                $tol
            }

            fn checked_pow(&self, exponent: &Self) -> Option<Self> {
                if *self < 0.0 {
                    return None;
                }
                if *self == 0.0 && *exponent < 0.0 {
                    return None;
                }
                Some(self.powf(*exponent))
            }

            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-5);

impl Scalar for BigRational {
    fn mass_tolerance() -> Self {
        BigRational::zero()
    }

    fn checked_pow(&self, exponent: &Self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return if exponent.is_positive() {
                Some(BigRational::zero())
            } else if exponent.is_zero() {
                Some(BigRational::one())
            } else {
                None
            };
        }
        let p = exponent.numer().to_i32()?;
        let q = exponent.denom().to_u32()?;
        let raised = num_traits::Pow::pow(self, p);
        let numer = exact_root(raised.numer(), q)?;
        let denom = exact_root(raised.denom(), q)?;
        Some(BigRational::new(numer, denom))
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

fn exact_root(value: &BigInt, q: u32) -> Option<BigInt> {
    if q == 1 {
        return Some(value.clone());
    }
    let root = value.nth_root(q);
    (num_traits::Pow::pow(&root, q) == *value).then_some(root)
}

/// Parses a decimal (`"0.25"`, `"-3"`, `"1e-3"`) or ratio (`"1/4"`) literal
/// exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        return (!d.is_zero()).then(|| n / d);
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(digits, num_traits::Pow::pow(&ten, (-scale) as u32))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Sums a slice of scalars.
pub fn sum<S: Scalar>(values: &[S]) -> S {
    values.iter().cloned().fold(S::zero(), |acc, v| acc + v)
}

/// Checks that `weights` lie in the probability simplex.
pub fn check_simplex<S: Scalar>(weights: &[S]) -> crate::Result<()> {
    if weights.is_empty() {
        return Err(crate::Error::NotSimplex("empty weight vector".into()));
    }
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| **w < S::zero() || !w.is_finite_value()) {
        return Err(crate::Error::NotSimplex(format!("component {i} is {w}")));
    }
    let total = sum(weights);
    if (total.clone() - S::one()).abs() > S::mass_tolerance() {
        return Err(crate::Error::NotSimplex(format!("components sum to {total}")));
    }
    Ok(())
}

/// Normalizes non-negative values to sum to one.
pub fn normalize<S: Scalar>(values: &[S]) -> crate::Result<Vec<S>> {
    let total = sum(values);
    if !(total > S::zero()) || !total.is_finite_value() {
        return Err(crate::Error::NotNormalizable(format!("total mass {total}")));
    }
    Ok(values.iter().map(|v| v.clone() / total.clone()).collect())
}

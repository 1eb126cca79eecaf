//! Ornstein-Uhlenbeck evolution in Mehler form and contraction checks.

use crate::error::{Error, Result};
use crate::measure1d::{apply_affine, convolve_gaussian, realize, GridMeasure, MeasureSpec};
use crate::metrics::{levy_prokhorov, tv, w1};
use crate::scalar::Real;

/// Law of `e^{-T/2} Z + sqrt(1 - e^{-T}) G`.
pub fn ou_evolve<T: Real>(m: &GridMeasure<T>, time: T) -> Result<GridMeasure<T>> {
    if !(time >= T::zero()) || !time.is_finite() {
        return Err(Error::InvalidParameter(format!("OU time must be finite and >= 0, got {time}")));
    }
    if time == T::zero() {
        return Ok(m.clone());
    }
    let scaled = apply_affine(m, (-time * T::c(0.5)).exp(), T::zero())?;
    convolve_gaussian(&scaled, (-(-time).exp_m1()).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct OUFlow<T> {
    pub time: T,
    pub input: GridMeasure<T>,
    pub output: GridMeasure<T>,
}

impl<T: Real> OUFlow<T> {
    pub fn new(input: GridMeasure<T>, time: T) -> Result<Self> {
        let output = ou_evolve(&input, time)?;
        Ok(Self { time, input, output })
    }
}

/// `(W1(G_T a, G_T b), e^{-T/2} W1(a, b))`.
pub fn check_w1_contraction<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>, time: T) -> Result<(T, T)> {
    let lhs = w1(&ou_evolve(a, time)?, &ou_evolve(b, time)?)?;
    let rhs = (-time * T::c(0.5)).exp() * w1(a, b)?;
    Ok((lhs, rhs))
}

/// `(d_TV(G_T a, G_T b), e^{-T/2} W1(a, b) / sqrt(2 pi (1 - e^{-T})))`.
pub fn check_tv_w1_contraction<T: Real>(a: &GridMeasure<T>, b: &GridMeasure<T>, time: T) -> Result<(T, T)> {
    if !(time > T::zero()) {
        return Err(Error::InvalidParameter(format!("TV-W1 bound needs T > 0, got {time}")));
    }
    let lhs = tv(&ou_evolve(a, time)?, &ou_evolve(b, time)?)?;
    let denom = (T::c(2.0 * std::f64::consts::PI) * (-(-time).exp_m1())).sqrt();
    let rhs = (-time * T::c(0.5)).exp() * w1(a, b)? / denom;
    Ok((lhs, rhs))
}

/// Scale parameters scanned by [`non_contraction_witness`].
pub fn witness_scales() -> impl Iterator<Item = f64> {
    (1..=10).map(|k| 2f64.powi(k))
}

pub const WITNESS_THRESHOLD: f64 = 0.9;

/// First `lambda` in `2, 4, ..., 2^10` with
/// `d_TV(G_T gaussian(0, lambda), gaussian(0, 1)) >= 0.9`: the standard
/// gaussian is invariant, yet at fixed `T` some starting law stays far.
pub fn non_contraction_witness(time: f64) -> Result<(f64, f64)> {
    if !(time > 0.0) || !time.is_finite() {
        return Err(Error::InvalidParameter(format!("witness needs T > 0, got {time}")));
    }
    let gamma = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0))?;
    for lambda in witness_scales() {
        let start = realize::<f64>(&MeasureSpec::gaussian(0.0, lambda))?;
        let v = tv(&ou_evolve(&start, time)?, &gamma)?;
        if v >= WITNESS_THRESHOLD {
            return Ok((lambda, v));
        }
    }
    Err(Error::WitnessNotFound { time, threshold: WITNESS_THRESHOLD })
}

/// `(d_LP(G_T nu, gamma), e^{-T/4} [d (1 + 2d / ln(1/d))]^{1/2})` with
/// `d = d_LP(gamma, nu)`. The right side is `+inf` when `d >= 1`.
pub fn check_lp_semigroup(nu: &GridMeasure<f64>, time: f64) -> Result<(f64, f64)> {
    let gamma = realize::<f64>(&MeasureSpec::gaussian(0.0, 1.0))?;
    let lhs = levy_prokhorov(&ou_evolve(nu, time)?, &gamma)?;
    let d = levy_prokhorov(&gamma, nu)?;
    let rhs = if d >= 1.0 {
        f64::INFINITY
    } else if d == 0.0 {
        0.0
    } else {
        (-time / 4.0).exp() * (d * (1.0 + 2.0 * d / (1.0 / d).ln())).sqrt()
    };
    Ok((lhs, rhs))
}

use num_traits::{FromPrimitive, NumCast, ToPrimitive};
use std::fmt;
use std::iter::Sum;

/// Floating point scalar used throughout the crate.
///
/// Implemented for `f32` and `f64`. Transcendental special functions
/// (normal CDF and friends) are evaluated in `f64` and cast back.
pub trait Real:
    num_traits::Float + FromPrimitive + ToPrimitive + Sum + Default + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Relative tolerance at which a quadrature mass counts as 1.
    const MASS_TOL: f64;
    /// Mass drift above which renormalization becomes an error.
    const DRIFT_TOL: f64;

    fn cast<U: NumCast>(x: U) -> Self {
        NumCast::from(x).expect("numeric cast")
    }

    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal")
    }

    fn f64(self) -> f64 {
        self.to_f64().expect("to f64")
    }
}

impl Real for f32 {
    const MASS_TOL: f64 = 1e-5;
    const DRIFT_TOL: f64 = 1e-3;
}

impl Real for f64 {
    const MASS_TOL: f64 = 1e-9;
    const DRIFT_TOL: f64 = 1e-6;
}

pub(crate) fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper quantile z with P(G > z) = tail for a standard gaussian G.
pub(crate) fn normal_upper_quantile(tail: f64) -> f64 {
    let mut z = (2.0 * (1.0 / tail).ln()).sqrt();
    for _ in 0..60 {
        let t = normal_cdf(-z);
        let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        // Newton on ln P(G > z)
        let step = (t.ln() - tail.ln()) * t / pdf;
        z += step;
        if step.abs() < 1e-14 * z.max(1.0) {
            break;
        }
    }
    z
}

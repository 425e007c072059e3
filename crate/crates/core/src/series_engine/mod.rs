//! Hypergeometric sums, summation theorems at unit argument, Barnes integrals
//! and the residue expansion of G_p at the origin.

pub mod accel;
pub mod identities;
pub mod pfq;
pub mod residues;
pub mod slater;

use thiserror::Error;

use crate::numerics::{NumericsError, PrecComplex};

pub use accel::{accelerate, levin_u, richardson, work_digits, wynn_epsilon, Family, Plan};
pub use identities::{
    dixon_3f2, evaluate_3f2_at_unity, gauss_2f1_at_unity, lavoie_3f2_variant, recognize_3f2, ClosedForm3F2,
};
pub use pfq::{pfq, three_f_two_at_unity};
pub use residues::{eval_series_sum, gp_at_zero, gp_integrand, gp_series, yj_star_series, BarnesIntegrand, GammaFactor};
pub use slater::{slater_expand, BarnesArg, SlaterSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series diverges: {0}")]
    Divergence(String),
    #[error("lower parameter {0} is a non-positive integer")]
    LowerPole(String),
    #[error("parameters do not have the {0} shape")]
    Shape(&'static str),
    #[error("Γ pole in a closed form")]
    Pole,
    #[error("resonant pole configuration: {0}")]
    Resonant(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("extrapolation is ill-posed: {0}")]
    Extrapolation(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A summed series. `tail_estimate` is the stopping-rule bound, not a certificate.
#[derive(Clone, Debug)]
pub struct SumResult {
    pub value: PrecComplex,
    pub tail_estimate: f64,
    pub terms_used: usize,
    pub accelerated: bool,
}

impl SumResult {
    pub fn exact(value: PrecComplex, terms_used: usize) -> Self {
        SumResult { value, tail_estimate: 0.0, terms_used, accelerated: false }
    }
}

/// Exactly-integer test for parameters that come from rationals.
pub(crate) fn as_integer(z: &PrecComplex) -> Option<i64> {
    if !z.im().is_zero() || !z.re().is_integer() {
        return None;
    }
    z.re().to_f64().round().to_string().parse::<i64>().ok()
}

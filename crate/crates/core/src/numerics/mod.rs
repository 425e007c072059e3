//! Arbitrary precision arithmetic and the special functions used by every other module.

pub mod complex;
pub mod jet;
pub mod linalg;
pub mod rational;
pub mod special;

use thiserror::Error;

pub use complex::{PrecComplex, DEFAULT_DIGITS, GUARD_DIGITS, MIN_DIGITS};
pub use jet::Jet;
pub use linalg::CMatrix;
pub use rational::{rat, ExactRational};
pub use special::{
    digamma, gamma, gamma_rational, log_gamma, nonpositive_integer, pochhammer, pochhammer_rational, polygamma, rgamma,
    taylor_jet_gamma, unit_phase, GammaJet,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("pole of the gamma function at {0}")]
    Pole(i64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse number: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

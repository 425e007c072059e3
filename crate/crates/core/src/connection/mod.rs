//! Closed-form connection coefficients and the 0 → 1 connection matrix.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equation::Point;
use crate::numerics::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ClosedForm => write!(f, "closed-form"),
            Method::Oracle => write!(f, "oracle"),
        }
    }
}

/// M with Φ_from(z) = Φ_to(1 − z) M.
#[derive(Clone, Debug)]
pub struct ConnectionMatrix {
    pub from_point: Point,
    pub to_point: Point,
    pub entries: CMatrix,
    pub method: Method,
    pub error_estimate: f64,
}

impl ConnectionMatrix {
    pub fn n(&self) -> usize {
        self.entries.rows()
    }
}

pub mod assemble;
pub mod buehring;
mod coords;
pub mod reference;
pub mod resonant;
pub mod table;
mod sums;
pub mod xi;

pub use buehring::{buehring_A, g_coeff, lqw_coeffs, ATable, Branch, Lqw};
pub use assemble::{closed_connection, connection_matrix_closed, coverage, ClosedConfig, Coverage};
pub use resonant::{h_coeff, im_k_residuals, k_coeff, ImKResiduals};
pub use table::{coefficient_table, CoefficientTable, Family};
pub use xi::{gp_basis_change, xi_continuation, PsiData, XiContinuationData};
pub use coords::{leading_slots, local_coordinates, slot_value};

use thiserror::Error;

use crate::frobenius::FrobeniusError;
use crate::numerics::NumericsError;
use crate::series_engine::SeriesError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConnectionError {
    #[error("outside closed-form coverage ({0}); use the oracle")]
    OracleOnly(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

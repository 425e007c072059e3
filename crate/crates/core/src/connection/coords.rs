//! Coordinates of a solution in a local fundamental basis, read off from the
//! coefficients at the basis' leading slots.

use crate::frobenius::{FundamentalMatrix, LogPowerSeries};
use crate::numerics::{CMatrix, ExactRational, PrecComplex};

use super::ConnectionError;

/// Leading (exponent, log power) of every column of a basis.
pub fn leading_slots(basis: &FundamentalMatrix<ExactRational>) -> Vec<(ExactRational, usize)> {
    basis
        .columns
        .iter()
        .zip(&basis.leading)
        .map(|(col, lead)| {
            let m = (lead - &col.exponent).to_i64().expect("integer offset") as usize;
            let k = (0..col.coeffs.len()).rev().find(|&k| col.coeff(k, m).is_some_and(|c| !c.is_zero())).unwrap_or(0);
            (lead.clone(), k)
        })
        .collect()
}

/// Coefficient of x^e (log x)^k in a sum of local series; None if a series in
/// the class of e is too short to tell.
pub fn slot_value(series: &[LogPowerSeries<PrecComplex>], e: &ExactRational, k: usize, digits: u32) -> Option<PrecComplex> {
    let mut v = PrecComplex::zero(digits);
    for s in series {
        let diff = e - &s.exponent;
        if !diff.is_integer() || diff.signum() < 0 {
            continue;
        }
        let m = diff.to_i64()? as usize;
        if m >= s.order() {
            return None;
        }
        if let Some(c) = s.coeff(k, m) {
            v += c;
        }
    }
    Some(v)
}

/// Coordinates of `source` in the normalized basis Φ = [columns] C.
pub fn local_coordinates(
    basis: &FundamentalMatrix<ExactRational>,
    source: &[LogPowerSeries<PrecComplex>],
    digits: u32,
) -> Result<Vec<PrecComplex>, ConnectionError> {
    let slots = leading_slots(basis);
    let n = slots.len();
    let mut q = CMatrix::zeros(n, n, digits);
    let mut rhs = Vec::with_capacity(n);
    for (i, (e, k)) in slots.iter().enumerate() {
        for (j, col) in basis.columns.iter().enumerate() {
            let diff = e - &col.exponent;
            if diff.is_integer() && diff.signum() >= 0 {
                let m = diff.to_i64().expect("small") as usize;
                if let Some(c) = col.coeff(*k, m) {
                    q[(i, j)] = PrecComplex::from_rational(c, digits);
                }
            }
        }
        rhs.push(slot_value(source, e, *k, digits).ok_or_else(|| {
            ConnectionError::Precondition(format!("source expansion too short for slot x^{e} log^{k}"))
        })?);
    }
    let raw = q.solve(&rhs)?;
    Ok(basis.c_matrix(digits).solve(&raw)?)
}

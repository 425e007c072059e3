//! Tables of expansion coefficients, one family at a time.

use std::fmt;
use std::ops::Range;

use crate::equation::HypergeometricEquation;
use crate::numerics::PrecComplex;
use crate::series_engine::SumResult;

use super::buehring::{g_coeff, lqw_coeffs, ATable, Branch};
use super::resonant::{h_coeff, k_coeff};
use super::ConnectionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Bühring's A⁽ⁿ⁾(k).
    A,
    G(Branch),
    L,
    Q,
    W,
    H,
    K,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s {
            "A" => Family::A,
            "g" | "g0" => Family::G(Branch::Zero),
            "gc" => Family::G(Branch::C),
            "l" => Family::L,
            "q" => Family::Q,
            "w" => Family::W,
            "h" => Family::H,
            "k" => Family::K,
            _ => return None,
        })
    }

    /// Which formula produces the family.
    pub fn formula(&self) -> &'static str {
        match self {
            Family::A => "Bühring recurrence for A(k), explicit n = 3, 4 forms",
            Family::G(Branch::Zero) => "g_m(0): A(k)-weighted sum, c not an integer",
            Family::G(Branch::C) => "g_m(c): finite A(k) sum with Γ(−c−m)",
            Family::L => "l_m: A(k)-weighted sum below the integer c",
            Family::Q => "q_m: finite A(k) sum, coefficient of the logarithm",
            Family::W => "w_m: digamma-weighted A(k) sum",
            Family::H => "h_m: Taylor coefficients of G_2 at 1 from the shifted-parameter ₃F₂",
            Family::K => "k_m: Taylor coefficients of G_3 at 1, double sum over ₃F₂ brackets",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::G(Branch::Zero) => "g0",
            Family::G(Branch::C) => "gc",
            Family::L => "l",
            Family::Q => "q",
            Family::W => "w",
            Family::H => "h",
            Family::K => "k",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub family: Family,
    pub start: usize,
    pub values: Vec<PrecComplex>,
    pub tail_estimates: Vec<f64>,
}

impl CoefficientTable {
    pub fn get(&self, m: usize) -> Option<&PrecComplex> {
        m.checked_sub(self.start).and_then(|i| self.values.get(i))
    }
}

/// Coefficients `range` of a family for `eq` (α is sorted first).
pub fn coefficient_table(
    eq: &HypergeometricEquation,
    family: Family,
    range: Range<usize>,
    tol: f64,
    digits: u32,
) -> Result<CoefficientTable, ConnectionError> {
    let eq = eq.with_sorted_alpha();
    let params = eq.buehring_params(digits);
    let c0 = || {
        let b = eq.beta_n();
        match b.to_i64() {
            Some(c) if b.is_integer() && c >= 0 => Ok(c),
            _ => Err(ConnectionError::Precondition(format!("c = {b} is not a nonnegative integer"))),
        }
    };
    let mut out: Vec<SumResult> = Vec::with_capacity(range.len());
    let mut a_table = if family == Family::A { Some(ATable::new(&params)?) } else { None };
    for m in range.clone() {
        let r = match family {
            Family::A => SumResult::exact(a_table.as_mut().expect("built").get(m)?.clone(), m + 1),
            Family::G(b) => g_coeff(&params, m, b, tol)?,
            Family::L => lqw_coeffs(&params, c0()?, m, tol)?
                .l
                .ok_or_else(|| ConnectionError::Precondition(format!("l_m needs m < c₀, got m = {m}")))?,
            Family::Q => SumResult::exact(lqw_coeffs(&params, c0()?, m, tol)?.q, 0),
            Family::W => lqw_coeffs(&params, c0()?, m, tol)?.w,
            Family::H => h_coeff(&eq, m, tol, digits)?,
            Family::K => k_coeff(&eq, m, tol, digits)?,
        };
        out.push(r);
    }
    Ok(CoefficientTable {
        family,
        start: range.start,
        tail_estimates: out.iter().map(|r| r.tail_estimate).collect(),
        values: out.into_iter().map(|r| r.value).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_starts_at_one() {
        let t = coefficient_table(&HypergeometricEquation::quartic(), Family::A, 0..3, 1e-30, 40).unwrap();
        assert!(t.get(0).unwrap().dist(&PrecComplex::one(40)) < 1e-38);
        // (b₂ − a₃)(b₁ − a₃)/1! = 1/16
        assert!(t.get(1).unwrap().dist(&PrecComplex::from_f64(0.0625, 40)) < 1e-38);
        assert!(t.get(3).is_none());
    }

    #[test]
    fn quintic_q0_is_one() {
        let t = coefficient_table(&HypergeometricEquation::quintic(), Family::Q, 0..1, 1e-20, 40).unwrap();
        assert!(t.values[0].dist(&PrecComplex::one(40)) < 1e-35);
        assert_eq!(t.tail_estimates, vec![0.0]);
    }

    #[test]
    fn family_names_round_trip() {
        for s in ["A", "g0", "gc", "l", "q", "w", "h", "k"] {
            assert_eq!(Family::parse(s).unwrap().to_string(), s);
        }
        assert!(Family::parse("x").is_none());
    }
}
